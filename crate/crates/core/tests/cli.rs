mod common;

use common::data_path;
use solvrep::cli::run;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["solvrep"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn normal_form_of_swapped_word() {
    let (code, out, _) = invoke(&["nf", &data_path("sl2_3"), "z y"]);
    assert_eq!(code, 0);
    assert_eq!(out, "x y z\n");
}

#[test]
fn product_of_words() {
    let (code, out, _) = invoke(&["mul", &data_path("q8"), "y", "y"]);
    assert_eq!(code, 0);
    assert_eq!(out, "x\n");
}

#[test]
fn pci_with_verification() {
    let (code, out, err) = invoke(&["pci", &data_path("sl2_3"), "--verify"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("field: Q(zeta_12)\n"));
    assert_eq!(out.lines().filter(|l| l.starts_with("pci ")).count(), 7);
    assert!(
        out.contains("step level 3 witness t lambda (-8) mu (-2)"),
        "{out}"
    );
    assert!(!out.contains("FAIL"));
}

#[test]
fn rational_field_rejected_for_nonabelian() {
    let (code, _, err) = invoke(&["pci", &data_path("sl2_3"), "--field", "rational"]);
    assert_eq!(code, 1);
    assert!(err.contains("rational field unsupported for nonabelian solvable pipeline"));
}

#[test]
fn domain_errors_name_the_variant() {
    let dir = std::env::temp_dir().join(format!("solvrep-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.grp");
    std::fs::write(&path, "gen x prime 2\ngen y prime 2\ngen z prime 3\npow x = 1\npow y = 1\npow z = 1\nconj z y = x\n")
        .unwrap();
    let (code, _, err) = invoke(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("InconsistentPresentation"), "{err}");
    std::fs::write(&path, "gen x prime 4\npow x = 1\n").unwrap();
    let (code, _, err) = invoke(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("NotPrime"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(invoke(&["frobnicate"]).0, 2);
    assert_eq!(invoke(&["pci"]).0, 2);
    assert_eq!(
        invoke(&["pci", &data_path("q8"), "--field", "cyclotomic:zero"]).0,
        2
    );
    assert_eq!(invoke(&["pci", "/nonexistent/file.grp"]).0, 2);
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("crosscheck"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["pci".to_string(), data_path("sl2_3")],
        vec!["irreps".to_string(), data_path("c3_sd_c4")],
        vec!["classes".to_string(), data_path("a4")],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(invoke(&args), invoke(&args));
    }
}

#[test]
fn cyclic_and_abelian_commands_verify() {
    for args in [
        vec!["cyclic".to_string(), "12".into(), "--verify".into()],
        vec![
            "cyclic".to_string(),
            "8".into(),
            "--field".into(),
            "cyclotomic:4".into(),
            "--verify".into(),
        ],
        vec![
            "abelian-pci".to_string(),
            data_path("c3xc3"),
            "--verify".into(),
        ],
        vec![
            "abelian-irreps".to_string(),
            data_path("c12"),
            "--field".into(),
            "splitting".into(),
            "--verify".into(),
        ],
        vec!["irreps".to_string(), data_path("d4"), "--verify".into()],
        vec![
            "pci".to_string(),
            data_path("a4"),
            "--field".into(),
            "cyclotomic:5".into(),
            "--verify".into(),
        ],
        vec!["crosscheck".to_string(), data_path("s3")],
    ] {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, out, err) = invoke(&argv);
        assert_eq!(code, 0, "{args:?}: {err}{out}");
        assert!(!out.contains("FAIL"), "{args:?}: {out}");
    }
}

#[test]
fn output_file_receives_results() {
    let dir = std::env::temp_dir().join(format!("solvrep-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("q8.pci");
    let (code, out, _) = invoke(&["pci", &data_path("q8"), "-o", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written.lines().filter(|l| l.starts_with("pci ")).count(), 5);
}
