//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on a domain error (or a failing `--verify`
//! report), 2 on a usage error.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use log::info;

use crate::cyclic_abelian::{
    abelian_components, companion_rep, cyclic_pci_from_factor, factor_xn_minus_1,
};
use crate::presentation::{
    parse_presentation, validate, Group, LongPresentation, ValidationOptions,
};
use crate::rep::Representation;
use crate::solvable::{solvable_full, SolvableOptions};
use crate::verify::{
    cross_check, verify_cyclic, verify_pairing, verify_pci_suite, verify_rep, VerificationReport,
};

#[derive(Parser, Debug)]
#[command(
    name = "solvrep",
    version,
    about = "Exact representations and central idempotents of solvable groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Coefficient field: `rational`, `cyclotomic:<m>` or `splitting`.
    #[arg(long)]
    field: Option<String>,
    /// Append a verification report; exit 1 if any check fails.
    #[arg(long)]
    verify: bool,
    /// Write the primary output to this file instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Starting precision in bits for root extraction.
    #[arg(long, default_value_t = 128)]
    precision: u32,
    /// Largest group order accepted.
    #[arg(long, default_value_t = 5000)]
    size_cap: usize,
    /// Which p-th root branch to use (index into the canonical order).
    #[arg(long, default_value_t = 0)]
    branch: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal form of a word.
    Nf {
        file: PathBuf,
        word: String,
        #[command(flatten)]
        common: Common,
    },
    /// Normal form of a product of two words.
    Mul {
        file: PathBuf,
        a: String,
        b: String,
        #[command(flatten)]
        common: Common,
    },
    /// Conjugacy classes.
    Classes {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Check consistency and report order and exponent.
    Validate {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Irreducible representations over a splitting field.
    Irreps {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Primitive central idempotents over a splitting field.
    Pci {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Primitive central idempotents of an abelian group.
    AbelianPci {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Irreducible representations of an abelian group.
    AbelianIrreps {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Factors, idempotents and representations of the cyclic group of order n.
    Cyclic {
        n: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the solvable pipeline with the character formula (and the
    /// abelian construction where it applies).
    Crosscheck {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Field {
    Rational,
    Cyclotomic(u32),
    Splitting,
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: String) -> Failure {
    Failure { code: 2, message }
}

fn domain<E: std::error::Error + std::fmt::Debug>(e: E) -> Failure {
    let dbg = format!("{e:?}");
    let name: String = dbg
        .chars()
        .take_while(|c| c.is_alphanumeric() || *c == '_')
        .collect();
    Failure {
        code: 1,
        message: format!("{name}: {e}"),
    }
}

fn parse_field(s: Option<&str>, default: Field) -> Result<Field, Failure> {
    match s {
        None => Ok(default),
        Some("rational") => Ok(Field::Rational),
        Some("splitting") => Ok(Field::Splitting),
        Some(other) => match other.strip_prefix("cyclotomic:").map(str::parse::<u32>) {
            Some(Ok(m)) if m >= 1 => Ok(Field::Cyclotomic(m)),
            _ => Err(usage(format!(
                "invalid field `{other}`; expected rational, cyclotomic:<m> or splitting"
            ))),
        },
    }
}

fn load(file: &PathBuf, common: &Common) -> Result<Arc<Group>, Failure> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| usage(format!("cannot read {}: {e}", file.display())))?;
    let lp = parse_presentation(&text).map_err(domain)?;
    let opts = ValidationOptions {
        size_cap: common.size_cap,
        ..Default::default()
    };
    Ok(validate(&lp, &opts).map_err(domain)?.group)
}

fn solvable_opts(common: &Common, group: &Group, field: Field) -> SolvableOptions {
    let exp = group.exponent().max(1);
    let conductor = match field {
        Field::Cyclotomic(m) => {
            let l = crate::lcm(m as u64, exp) as u32;
            if l != m {
                info!("conductor {m} enlarged to {l} to contain the exponent");
            }
            Some(l)
        }
        _ => None,
    };
    SolvableOptions {
        branch: common.branch,
        conductor,
        build_irreps: true,
        start_precision: common.precision,
    }
}

fn format_rep(out: &mut String, i: usize, rho: &Representation) {
    let g = rho.group();
    out.push_str(&format!("irrep {i} degree {}\n", rho.degree()));
    for (j, a) in rho.generator_images().iter().enumerate() {
        out.push_str(&format!("  {}: {}\n", g.symbol(j), a));
    }
}

fn rep_reports(irreps: &[Representation]) -> VerificationReport {
    let mut r = VerificationReport::new("irreps");
    for (i, rho) in irreps.iter().enumerate() {
        let sub = verify_rep(rho);
        for c in sub.checks {
            r.checks.push(crate::verify::Check {
                name: format!("irrep {i}: {}", c.name),
                ..c
            });
        }
    }
    r
}

/// Primary text and an optional verification report.
type Output = (String, Option<VerificationReport>);

fn common_of(cmd: &Command) -> &Common {
    match cmd {
        Command::Nf { common, .. }
        | Command::Mul { common, .. }
        | Command::Classes { common, .. }
        | Command::Validate { common, .. }
        | Command::Irreps { common, .. }
        | Command::Pci { common, .. }
        | Command::AbelianPci { common, .. }
        | Command::AbelianIrreps { common, .. }
        | Command::Cyclic { common, .. }
        | Command::Crosscheck { common, .. } => common,
    }
}

fn execute(cmd: Command) -> Result<Output, Failure> {
    let mut out = String::new();
    let mut report = None;
    let common = common_of(&cmd).clone();
    match cmd {
        Command::Nf { file, word, .. } => {
            let g = load(&file, &common)?;
            let e = g.normalize(&word).map_err(domain)?;
            out.push_str(&format!("{}\n", g.format_elem(e)));
        }
        Command::Mul { file, a, b, .. } => {
            let g = load(&file, &common)?;
            let x = g.normalize(&a).map_err(domain)?;
            let y = g.normalize(&b).map_err(domain)?;
            out.push_str(&format!("{}\n", g.format_elem(g.mul(x, y))));
        }
        Command::Classes { file, .. } => {
            let g = load(&file, &common)?;
            for (i, c) in g.conjugacy_classes().iter().enumerate() {
                let elems: Vec<String> = c.iter().map(|&e| g.format_elem(e)).collect();
                out.push_str(&format!(
                    "class {i} size {}: {}\n",
                    c.len(),
                    elems.join(", ")
                ));
            }
        }
        Command::Validate { file, .. } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| usage(format!("cannot read {}: {e}", file.display())))?;
            let lp = parse_presentation(&text).map_err(domain)?;
            let rep = validate(
                &lp,
                &ValidationOptions {
                    size_cap: common.size_cap,
                    ..Default::default()
                },
            )
            .map_err(domain)?;
            out.push_str(&format!(
                "group {}\nconsistent: yes\norder: {}\nexponent: {}\nassociativity triples checked: {}\n",
                lp.name, rep.order, rep.exponent, rep.associativity_triples
            ));
        }
        Command::Irreps { ref file, .. } | Command::Pci { ref file, .. } => {
            let is_pci = matches!(cmd, Command::Pci { .. });
            let g = load(file, &common)?;
            let field = parse_field(common.field.as_deref(), Field::Splitting)?;
            if field == Field::Rational {
                if !g.is_abelian() {
                    return Err(Failure {
                        code: 1,
                        message: "rational field unsupported for nonabelian solvable pipeline"
                            .into(),
                    });
                }
                return abelian_output(&g, 1, is_pci, common.verify);
            }
            let res = solvable_full(&g, &solvable_opts(&common, &g, field)).map_err(domain)?;
            out.push_str(&format!("field: Q(zeta_{})\n", res.conductor));
            if is_pci {
                for (i, e) in res.pcis().iter().enumerate() {
                    out.push_str(&format!("pci {i}\n{}", e.to_records()));
                }
                for s in &res.steps {
                    out.push_str(&format!(
                        "step level {} witness {} lambda {} mu {}\n",
                        s.level,
                        g.format_elem(s.witness),
                        s.lambda,
                        s.mu
                    ));
                }
            } else {
                for (i, rho) in res.irreps().iter().enumerate() {
                    format_rep(&mut out, i, rho);
                }
            }
            if common.verify {
                let classes = g.conjugacy_classes().len();
                let mut r = VerificationReport::new(if is_pci { "pci" } else { "irreps" });
                r.merge(verify_pci_suite(res.pcis(), &g, Some(classes)));
                r.merge(rep_reports(res.irreps()));
                r.merge(verify_pairing(res.irreps(), res.pcis()));
                report = Some(r);
            }
        }
        Command::AbelianPci { ref file, .. } | Command::AbelianIrreps { ref file, .. } => {
            let is_pci = matches!(cmd, Command::AbelianPci { .. });
            let g = load(file, &common)?;
            let m = match parse_field(common.field.as_deref(), Field::Rational)? {
                Field::Rational => 1,
                Field::Cyclotomic(m) => m,
                Field::Splitting => g.exponent() as u32,
            };
            return abelian_output(&g, m, is_pci, common.verify);
        }
        Command::Cyclic { n, .. } => {
            if n == 0 {
                return Err(usage("n must be positive".into()));
            }
            let m = match parse_field(common.field.as_deref(), Field::Rational)? {
                Field::Rational => 1,
                Field::Cyclotomic(m) => m,
                Field::Splitting => n as u32,
            };
            let lp = LongPresentation::cyclic(n);
            let opts = ValidationOptions {
                size_cap: common.size_cap,
                ..Default::default()
            };
            let g = validate(&lp, &opts).map_err(domain)?.group;
            out.push_str(&format!("group C{n}\n{lp}field: Q(zeta_{m})\n"));
            let x = g.cyclic_generator().map_err(domain)?;
            out.push_str(&format!("generator: {}\n", g.format_elem(x)));
            for (i, f) in factor_xn_minus_1(n, m).iter().enumerate() {
                let rho = companion_rep(&f.poly, &g).map_err(domain)?;
                let e = cyclic_pci_from_factor(&f.poly, &g).map_err(domain)?;
                out.push_str(&format!(
                    "factor {i} d {} degree {} poly {}\n",
                    f.d,
                    f.poly.degree(),
                    f.poly
                ));
                format_rep(&mut out, i, &rho);
                out.push_str(&format!("pci {i}\n{}", e.to_records()));
            }
            if common.verify {
                report = Some(verify_cyclic(n, m));
            }
        }
        Command::Crosscheck { file, .. } => {
            let g = load(&file, &common)?;
            let field = parse_field(common.field.as_deref(), Field::Splitting)?;
            if field == Field::Rational {
                return Err(usage("crosscheck needs a splitting field".into()));
            }
            report = Some(cross_check(&g, &solvable_opts(&common, &g, field)));
        }
    }
    Ok((out, report))
}

fn abelian_output(g: &Arc<Group>, m: u32, is_pci: bool, verify: bool) -> Result<Output, Failure> {
    let comps = abelian_components(g, m).map_err(domain)?;
    let mut out = format!("field: Q(zeta_{m})\n");
    for (i, c) in comps.iter().enumerate() {
        out.push_str(&format!(
            "component {i} quotient C{} kernel size {} factor {}\n",
            c.quotient.order,
            c.quotient.kernel.len(),
            c.factor.poly
        ));
        if is_pci {
            out.push_str(&format!("pci {i}\n{}", c.idempotent.to_records()));
        } else {
            format_rep(&mut out, i, &c.rep);
        }
    }
    let report = verify.then(|| {
        let pcis: Vec<_> = comps.iter().map(|c| c.idempotent.clone()).collect();
        let reps: Vec<_> = comps.iter().map(|c| c.rep.clone()).collect();
        let expected = (m as u64).is_multiple_of(g.exponent()).then_some(g.order());
        let mut r = VerificationReport::new(if is_pci {
            "abelian-pci"
        } else {
            "abelian-irreps"
        });
        r.merge(verify_pci_suite(&pcis, g, expected));
        r.merge(verify_pairing(&reps, &pcis));
        let bad: Vec<String> = reps
            .iter()
            .enumerate()
            .filter(|(_, r)| r.check_relations().is_err())
            .map(|(i, _)| i.to_string())
            .collect();
        r.check("relations", bad.is_empty(), || bad.join(", "));
        r
    });
    Ok((out, report))
}

/// Runs the command line `argv` (including the program name), writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<S: AsRef<str>>(argv: &[S], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv.iter().map(|s| s.as_ref())) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };
    let output_path = common_of(&cli.command).output.clone();
    match execute(cli.command) {
        Ok((text, report)) => {
            let mut text = text;
            let mut code = 0;
            if let Some(r) = &report {
                text.push_str(&r.to_string());
                if !r.passed() {
                    code = 1;
                }
            }
            match output_path {
                Some(p) => {
                    if let Err(e) = std::fs::write(&p, &text) {
                        let _ = writeln!(err, "error: cannot write {}: {e}", p.display());
                        return 1;
                    }
                }
                None => {
                    let _ = out.write_all(text.as_bytes());
                }
            }
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
