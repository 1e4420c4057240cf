//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

mod common;

use std::time::{Duration, Instant};

use common::{e_cubic, e_sign, elem, load, product, CORPUS};
use solvrep::cyclic_abelian::{
    abelian_irreps, abelian_pcis, direct_cyclic_pci, factor_xn_minus_1, newton_idempotent_coeffs,
    ppower_pci_factorization,
};
use solvrep::cyclotomic::{pth_roots, PthRootOptions};
use solvrep::grpalg::{class_sum, AlgebraElement};
use solvrep::matrix::Matrix;
use solvrep::rep::Representation;
use solvrep::solvable::{induce_rep, solvable_full, SolvableOptions};
use solvrep::verify::{cross_check, same_set, verify_cyclic, verify_pci_suite, verify_rep};
use solvrep::{divisors, CycNumber};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    let el = t.elapsed();
    ensure(el < limit, || format!("took {el:?}, limit {limit:?}"))
}

fn sl2_3_golden() -> Outcome {
    let t0 = Instant::now();
    let g = load("sl2_3");
    let res = solvable_full(&g, &SolvableOptions::default()).map_err(|e| e.to_string())?;
    let m = res.conductor;
    let w = CycNumber::root_of_unity(m, (m / 3) as i64);
    let w2 = w.pow(2);
    let one = AlgebraElement::one(&g, m);
    let t = elem(&g, "t");
    let class_t = g
        .conjugacy_classes()
        .into_iter()
        .find(|c| c.contains(&t))
        .unwrap();
    let c = class_sum(&g, &class_t, m).scale(&CycNumber::from_ratio(-1, 2, m));
    let c2 = &c * &c;
    let ex = e_sign(&g, "x", 1, m);
    let emx = e_sign(&g, "x", -1, m);
    let third = CycNumber::from_ratio(1, 3, m);
    let u = |a: &CycNumber, b: &CycNumber| {
        (&(&(&one + &c.scale(a)) + &c2.scale(b)) * &emx).scale(&third)
    };
    let ey = |s| e_sign(&g, "y", s, m);
    let ez = |s| e_sign(&g, "z", s, m);
    let xyz = product(&[ex.clone(), ey(1), ez(1)]);
    let expected = vec![
        u(&CycNumber::one(m), &CycNumber::one(m)),
        u(&w2, &w),
        u(&w, &w2),
        &(&product(&[ex.clone(), ey(1), ez(-1)]) + &product(&[ex.clone(), ey(-1), ez(1)]))
            + &product(&[ex.clone(), ey(-1), ez(-1)]),
        &xyz * &e_cubic(&g, "t", &w, m),
        &xyz * &e_cubic(&g, "t", &w2, m),
        &xyz * &e_cubic(&g, "t", &CycNumber::one(m), m),
    ];
    ensure(res.pcis().len() == 7, || {
        format!("{} idempotents", res.pcis().len())
    })?;
    ensure(same_set(res.pcis(), &expected), || {
        "idempotent set differs from the reference list".into()
    })?;
    let step = res.steps.iter().find(|s| {
        s.witness == t
            && s.lambda == CycNumber::from_int(-8, s.lambda.conductor())
            && s.mu == CycNumber::from_int(-2, s.mu.conductor())
    });
    ensure(step.is_some(), || {
        "no step with witness t, lambda -8, mu -2".into()
    })?;
    within(t0, Duration::from_secs(5))?;
    Ok(format!(
        "7 idempotents match the reference list, lambda -8 / mu -2 at t, {:?}",
        t0.elapsed()
    ))
}

fn q8_golden() -> Outcome {
    let t0 = Instant::now();
    let g = load("q8");
    let res = solvable_full(&g, &SolvableOptions::default()).map_err(|e| e.to_string())?;
    let m = res.conductor;
    let ex = e_sign(&g, "x", 1, m);
    let mut expected = Vec::new();
    for sy in [1, -1] {
        for sz in [1, -1] {
            expected.push(product(&[
                ex.clone(),
                e_sign(&g, "y", sy, m),
                e_sign(&g, "z", sz, m),
            ]));
        }
    }
    expected.push(&AlgebraElement::one(&g, m) - &ex);
    ensure(same_set(res.pcis(), &expected), || {
        "idempotent set differs".into()
    })?;
    within(t0, Duration::from_secs(2))?;
    Ok(format!("5 idempotents match, {:?}", t0.elapsed()))
}

fn sl2_3_irreps() -> Outcome {
    let g = load("sl2_3");
    let res = solvable_full(&g, &SolvableOptions::default()).map_err(|e| e.to_string())?;
    let m = res.conductor;
    let mut degrees: Vec<usize> = res.irreps().iter().map(|r| r.degree()).collect();
    degrees.sort();
    ensure(degrees == vec![1, 1, 1, 2, 2, 2, 3], || {
        format!("degrees {degrees:?}")
    })?;
    let sum: usize = degrees.iter().map(|d| d * d).sum();
    ensure(sum == 24, || format!("sum of squares {sum}"))?;
    for (i, rho) in res.irreps().iter().enumerate() {
        let r = verify_rep(rho);
        ensure(r.passed(), || format!("irrep {i}: {r}"))?;
    }
    // The degree-3 irrep against induction of the Q8 character y -> 1, z -> -1.
    let eta = Representation::checked(
        &g,
        3,
        vec![
            Matrix::from_int_rows(&[vec![1]], m),
            Matrix::from_int_rows(&[vec![1]], m),
            Matrix::from_int_rows(&[vec![-1]], m),
        ],
    )
    .map_err(|e| e.to_string())?;
    let induced = induce_rep(&eta).map_err(|e| e.to_string())?;
    let deg3 = res.irreps().iter().find(|r| r.degree() == 3).unwrap();
    let l = solvrep::lcm(induced.conductor() as u64, deg3.conductor() as u64) as u32;
    ensure(
        induced.coerce(l).character() == deg3.coerce(l).character(),
        || "degree-3 character differs from the induced one".into(),
    )?;
    // Hand-written degree-2 extension of the degree-2 irrep of Q8.
    let m12 = 12;
    let i = CycNumber::root_of_unity(m12, 3);
    let h = |a: i64, b: i64| {
        CycNumber::from_ratio(a, 2, m12).add_ref(&i.mul_ref(&CycNumber::from_ratio(b, 2, m12)))
    };
    let ext2 = Representation::checked(
        &g,
        4,
        vec![
            Matrix::from_int_rows(&[vec![-1, 0], vec![0, -1]], m12),
            Matrix::from_rows(vec![
                vec![i.clone(), CycNumber::zero(m12)],
                vec![CycNumber::zero(m12), i.neg_ref()],
            ]),
            Matrix::from_int_rows(&[vec![0, -1], vec![1, 0]], m12),
            Matrix::from_rows(vec![vec![h(-1, 1), h(-1, -1)], vec![h(1, -1), h(-1, -1)]]),
        ],
    )
    .map_err(|e| format!("reference degree-2 extension: {e}"))?;
    let r = verify_rep(&ext2);
    ensure(r.passed(), || format!("reference degree-2 extension: {r}"))?;
    Ok(
        "degrees {1,1,1,2,2,2,3}, audits pass, deg3 matches induction, reference degree-2 extension verifies"
            .into(),
    )
}

fn cyclic_rational() -> Outcome {
    let t0 = Instant::now();
    for n in 1..=30u64 {
        let factors = factor_xn_minus_1(n, 1);
        ensure(factors.len() == divisors(n).len(), || {
            format!("n = {n}: {} factors", factors.len())
        })?;
        let deg: usize = factors.iter().map(|f| f.poly.degree()).sum();
        ensure(deg as u64 == n, || format!("n = {n}: degree sum {deg}"))?;
        for f in &factors {
            let coeffs = newton_idempotent_coeffs(&f.poly, n).map_err(|e| e.to_string())?;
            ensure(coeffs.iter().all(|c| c.is_rational()), || {
                format!("n = {n}: irrational coefficient")
            })?;
        }
        let r = verify_cyclic(n, 1);
        ensure(r.passed(), || format!("n = {n}: {r}"))?;
    }
    within(t0, Duration::from_secs(10))?;
    Ok(format!("n = 1..30 pass, {:?}", t0.elapsed()))
}

fn ppower_exhaustive() -> Outcome {
    let g = load("c8");
    let x = g.generator(2);
    for k in 0..8 {
        let zeta = CycNumber::root_of_unity(8, k);
        let factors = ppower_pci_factorization(&g, &zeta).map_err(|e| e.to_string())?;
        let terms: usize = factors.iter().map(|f| f.support_len()).sum();
        ensure(terms == 6, || format!("zeta^{k}: {terms} factored terms"))?;
        let prod = product(&factors);
        ensure(prod.support_len() == 8, || {
            format!("zeta^{k}: {} expanded terms", prod.support_len())
        })?;
        let direct = direct_cyclic_pci(&g, x, &zeta);
        ensure(prod == direct, || {
            format!("zeta^{k}: product differs from direct formula")
        })?;
    }
    Ok("all 8 roots: factored 6 terms, expanded 8, equal to direct formula".into())
}

fn abelian() -> Outcome {
    let g = load("c2xc2");
    let p = abelian_pcis(&g, 1).map_err(|e| e.to_string())?;
    ensure(p.len() == 4, || format!("C2xC2: {} idempotents", p.len()))?;
    let r = verify_pci_suite(&p, &g, Some(4));
    ensure(r.passed(), || r.to_string())?;

    let g = load("c3xc3");
    let reps = abelian_irreps(&g, 1).map_err(|e| e.to_string())?;
    let mut degrees: Vec<usize> = reps.iter().map(|r| r.degree()).collect();
    degrees.sort();
    ensure(degrees == vec![1, 2, 2, 2, 2], || {
        format!("C3xC3 degrees {degrees:?}")
    })?;
    for rho in &reps {
        rho.check_relations().map_err(|e| e.to_string())?;
    }
    let p = abelian_pcis(&g, 1).map_err(|e| e.to_string())?;
    let r = verify_pci_suite(&p, &g, Some(5));
    ensure(r.passed(), || r.to_string())?;

    let g = load("c12");
    let p = abelian_pcis(&g, 12).map_err(|e| e.to_string())?;
    ensure(p.len() == 12, || format!("C12: {} idempotents", p.len()))?;
    let r = verify_pci_suite(&p, &g, Some(12));
    ensure(r.passed(), || r.to_string())?;
    for rho in abelian_irreps(&g, 12).map_err(|e| e.to_string())? {
        let r = verify_rep(&rho);
        ensure(r.passed(), || r.to_string())?;
    }
    Ok("C2xC2: 4, C3xC3: degrees {1,2,2,2,2}, C12 over Q(zeta_12): 12".into())
}

fn cross_pipeline() -> Outcome {
    let t0 = Instant::now();
    for name in CORPUS {
        let g = load(name);
        let r = cross_check(&g, &SolvableOptions::default());
        ensure(r.passed(), || format!("{name}: {r}"))?;
    }
    within(t0, Duration::from_secs(60))?;
    Ok(format!("{} groups agree, {:?}", CORPUS.len(), t0.elapsed()))
}

fn property_suites() -> Outcome {
    for name in CORPUS {
        let g = load(name);
        let n = g.order();
        // Normal forms: exponent vectors round-trip and are distinct.
        let mut seen = std::collections::BTreeSet::new();
        for a in g.elements() {
            let ex = g.exponents(a);
            ensure(g.from_exponents(&ex) == a, || {
                format!("{name}: normal form round trip")
            })?;
            ensure(seen.insert(ex), || format!("{name}: repeated normal form"))?;
        }
        // Latin square.
        for a in g.elements() {
            let row: std::collections::BTreeSet<_> = g.elements().map(|b| g.mul(a, b)).collect();
            let col: std::collections::BTreeSet<_> = g.elements().map(|b| g.mul(b, a)).collect();
            ensure(row.len() == n && col.len() == n, || {
                format!("{name}: table is not a Latin square")
            })?;
        }
        let res = solvable_full(&g, &SolvableOptions::default()).map_err(|e| e.to_string())?;
        let r = verify_pci_suite(res.pcis(), &g, Some(g.conjugacy_classes().len()));
        ensure(r.passed(), || format!("{name}: {r}"))?;
        for s in &res.steps {
            let p = g.prime(s.level);
            let roots =
                pth_roots(&s.lambda, p, &PthRootOptions::default()).map_err(|e| e.to_string())?;
            for mu in roots {
                ensure(mu.pow(p) == s.lambda, || {
                    format!("{name}: root of {} fails", s.lambda)
                })?;
            }
        }
    }
    Ok(format!(
        "{} groups: idempotent suites, normal forms, Latin squares, roots",
        CORPUS.len()
    ))
}

fn branch_robustness() -> Outcome {
    let g = load("sl2_3");
    let base = solvable_full(&g, &SolvableOptions::default()).map_err(|e| e.to_string())?;
    for branch in [1, 2] {
        let alt = solvable_full(
            &g,
            &SolvableOptions {
                branch,
                ..Default::default()
            },
        )
        .map_err(|e| e.to_string())?;
        ensure(same_set(base.pcis(), alt.pcis()), || {
            format!("branch {branch} gives a different set")
        })?;
    }
    Ok("branches 1 and 2 reproduce the branch-0 set".into())
}

fn main() {
    let _ = env_logger::builder().is_test(true).try_init();
    let criteria: [Criterion; 9] = [
        ("SL2(3) golden idempotents", sl2_3_golden),
        ("Q8 golden idempotents", q8_golden),
        ("SL2(3) irreducible representations", sl2_3_irreps),
        ("cyclic groups over Q, n <= 30", cyclic_rational),
        ("C8 factored idempotents", ppower_exhaustive),
        ("abelian groups", abelian),
        ("cross-pipeline agreement on the corpus", cross_pipeline),
        ("property suites on the corpus", property_suites),
        ("root branch robustness", branch_robustness),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
