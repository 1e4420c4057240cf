//! Independent oracles and exact audit suites.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use thiserror::Error;

use crate::cyclic_abelian::{
    abelian_pcis, companion_rep, cyclic_pci_from_factor, factor_xn_minus_1, Poly,
};
use crate::cyclotomic::CycNumber;
use crate::grpalg::AlgebraElement;
use crate::matrix::Matrix;
use crate::presentation::{Elem, Group, LongPresentation};
use crate::rep::Representation;
use crate::solvable::{solvable_full, SolvableOptions};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("representation list is incomplete: sum of squared degrees {sum} != |G| = {order}")]
    IncompleteRepList { sum: usize, order: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Offending indices or elements when the check failed.
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        VerificationReport {
            suite: suite.into(),
            checks: Vec::new(),
        }
    }

    pub fn check(
        &mut self,
        name: impl Into<String>,
        passed: bool,
        detail: impl FnOnce() -> String,
    ) {
        let detail = if passed { None } else { Some(detail()) };
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn merge(&mut self, other: VerificationReport) {
        for c in other.checks {
            self.checks.push(Check {
                name: format!("{}/{}", other.suite, c.name),
                ..c
            });
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}", self.suite)?;
        for c in &self.checks {
            match &c.detail {
                None => writeln!(f, "PASS {}", c.name)?,
                Some(d) => writeln!(f, "FAIL {}: {}", c.name, d)?,
            }
        }
        Ok(())
    }
}

/// `e_chi = (chi(1)/|G|) sum_g chi(g^-1) g` for each representation.
pub fn character_pci_oracle(
    irreps: &[Representation],
    group: &Arc<Group>,
) -> Result<Vec<AlgebraElement>, VerifyError> {
    let sum: usize = irreps.iter().map(|r| r.degree() * r.degree()).sum();
    if sum != group.order() {
        return Err(VerifyError::IncompleteRepList {
            sum,
            order: group.order(),
        });
    }
    Ok(irreps
        .iter()
        .map(|r| {
            let chi: HashMap<Elem, CycNumber> = r.character().into_iter().collect();
            let m = r.conductor();
            let scale = BigRational::new((r.degree() as i64).into(), (group.order() as i64).into());
            AlgebraElement::from_terms(
                group,
                m,
                group
                    .elements()
                    .map(|g| (g, chi[&group.inv(g)].scale_rational(&scale))),
            )
        })
        .collect())
}

fn index_list(v: &[String]) -> String {
    const SHOWN: usize = 8;
    let mut s = v.iter().take(SHOWN).cloned().collect::<Vec<_>>().join(", ");
    if v.len() > SHOWN {
        s.push_str(&format!(", ... ({} total)", v.len()));
    }
    s
}

/// Idempotency, orthogonality, completeness and centrality of a list of
/// idempotents; with `expected_count`, also the number of components.
pub fn verify_pci_suite(
    pcis: &[AlgebraElement],
    group: &Arc<Group>,
    expected_count: Option<usize>,
) -> VerificationReport {
    let mut r = VerificationReport::new("pci");
    let m = pcis
        .iter()
        .fold(1u64, |acc, e| crate::lcm(acc, e.conductor() as u64)) as u32;
    let bad: Vec<String> = pcis
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.is_idempotent())
        .map(|(i, _)| i.to_string())
        .collect();
    r.check("idempotent", bad.is_empty(), || {
        format!("not idempotent: {}", index_list(&bad))
    });
    let mut bad = Vec::new();
    for i in 0..pcis.len() {
        for j in i + 1..pcis.len() {
            if !(&pcis[i] * &pcis[j]).is_zero() || !(&pcis[j] * &pcis[i]).is_zero() {
                bad.push(format!("({i},{j})"));
            }
        }
    }
    r.check("orthogonal", bad.is_empty(), || {
        format!("nonzero products: {}", index_list(&bad))
    });
    let mut sum = AlgebraElement::zero(group, m);
    for e in pcis {
        sum = &sum + e;
    }
    r.check("complete", sum == AlgebraElement::one(group, m), || {
        format!("sum is {sum}")
    });
    let bad: Vec<String> = pcis
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.is_central())
        .map(|(i, _)| i.to_string())
        .collect();
    r.check("central", bad.is_empty(), || {
        format!("not central: {}", index_list(&bad))
    });
    if let Some(n) = expected_count {
        r.check("count", pcis.len() == n, || {
            format!("{} idempotents, expected {n}", pcis.len())
        });
    }
    r
}

/// `(1/|H|) sum chi(h) conj(chi(h))`, with complex conjugation as `zeta -> zeta^-1`.
pub fn character_norm(rep: &Representation) -> CycNumber {
    let chars = rep.character();
    let mut s = CycNumber::zero(rep.conductor());
    for (_, c) in &chars {
        s = s.add_ref(&c.mul_ref(&c.conj()));
    }
    s.scale_rational(&BigRational::new(1.into(), (chars.len() as i64).into()))
}

/// Relations and irreducibility of one representation.
pub fn verify_rep(rep: &Representation) -> VerificationReport {
    let mut r = VerificationReport::new("rep");
    let rel = rep.check_relations();
    r.check("relations", rel.is_ok(), || {
        rel.as_ref().unwrap_err().to_string()
    });
    let norm = character_norm(rep);
    r.check("irreducible", norm.is_one(), || {
        format!("character norm {norm}")
    });
    r
}

/// `rho_i(e_j) = delta_ij I` for paired lists.
pub fn verify_pairing(irreps: &[Representation], pcis: &[AlgebraElement]) -> VerificationReport {
    let mut r = VerificationReport::new("pairing");
    let mut bad = Vec::new();
    for (i, rho) in irreps.iter().enumerate() {
        let images: HashMap<Elem, Matrix> = rho.all_images().into_iter().collect();
        for (j, e) in pcis.iter().enumerate() {
            let mut a = Matrix::zero(
                rho.degree(),
                crate::lcm(rho.conductor() as u64, e.conductor() as u64) as u32,
            );
            for (g, c) in e.terms() {
                a = &a + &images[g].scale(c);
            }
            let ok = if i == j { a.is_identity() } else { a.is_zero() };
            if !ok {
                bad.push(format!("({i},{j})"));
            }
        }
    }
    r.check("rho(e) = delta I", bad.is_empty(), || {
        format!("mismatched pairs: {}", index_list(&bad))
    });
    r
}

/// Canonical serialization at a common conductor, sorted, for set comparison.
pub fn canonical_set(pcis: &[AlgebraElement], m: u32) -> Vec<String> {
    let mut v: Vec<String> = pcis.iter().map(|e| e.coerce(m).to_records()).collect();
    v.sort();
    v
}

pub fn same_set(a: &[AlgebraElement], b: &[AlgebraElement]) -> bool {
    let m = a
        .iter()
        .chain(b)
        .fold(1u64, |acc, e| crate::lcm(acc, e.conductor() as u64)) as u32;
    canonical_set(a, m) == canonical_set(b, m)
}

/// Solvable pipeline against the character oracle (and, for abelian groups,
/// against the pullback construction over the same conductor).
pub fn cross_check(group: &Arc<Group>, opts: &SolvableOptions) -> VerificationReport {
    let mut r = VerificationReport::new("crosscheck");
    let res = match solvable_full(
        group,
        &SolvableOptions {
            build_irreps: true,
            ..opts.clone()
        },
    ) {
        Ok(res) => res,
        Err(e) => {
            r.check("solvable pipeline", false, || e.to_string());
            return r;
        }
    };
    let pcis = res.pcis();
    let irreps = res.irreps();
    let classes = group.conjugacy_classes().len();
    r.check("count = #classes", pcis.len() == classes, || {
        format!("{} vs {classes}", pcis.len())
    });
    match character_pci_oracle(irreps, group) {
        Ok(oracle) => r.check("berman = character oracle", same_set(pcis, &oracle), || {
            "sets differ".into()
        }),
        Err(e) => r.check("berman = character oracle", false, || e.to_string()),
    }
    if group.is_abelian() {
        match abelian_pcis(group, res.conductor) {
            Ok(ab) => r.check("berman = abelian pullback", same_set(pcis, &ab), || {
                "sets differ".into()
            }),
            Err(e) => r.check("berman = abelian pullback", false, || e.to_string()),
        }
    }
    r.merge(verify_pci_suite(pcis, group, Some(classes)));
    r.merge(verify_pairing(irreps, pcis));
    let bad: Vec<String> = irreps
        .iter()
        .enumerate()
        .filter(|(_, rho)| !verify_rep(rho).passed())
        .map(|(i, _)| i.to_string())
        .collect();
    r.check(
        "irreps pass relation and irreducibility audits",
        bad.is_empty(),
        || index_list(&bad),
    );
    r
}

/// Full audit of the cyclic constructions for `C_n` over `Q(zeta_m)`.
pub fn verify_cyclic(n: u64, m: u32) -> VerificationReport {
    let mut r = VerificationReport::new(format!("cyclic C{n}"));
    let group = match Group::from_presentation(&LongPresentation::cyclic(n)) {
        Ok(g) => g,
        Err(e) => {
            r.check("presentation", false, || e.to_string());
            return r;
        }
    };
    let factors = factor_xn_minus_1(n, m);
    let mut prod = Poly::new(vec![CycNumber::one(m)], m);
    for f in &factors {
        prod = prod.mul(&f.poly);
    }
    r.check(
        "product of factors = X^n - 1",
        prod == Poly::x_pow_minus_one(n as usize, m),
        || prod.to_string(),
    );
    let deg: usize = factors.iter().map(|f| f.poly.degree()).sum();
    r.check("sum of degrees = n", deg == n as usize, || format!("{deg}"));
    let divs = crate::divisors(n).len();
    if m == 1 {
        r.check("#factors = #divisors", factors.len() == divs, || {
            format!("{} vs {divs}", factors.len())
        });
    }
    let mut reps = Vec::new();
    let mut pcis = Vec::new();
    let mut bad_rep = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        match (
            companion_rep(&f.poly, &group),
            cyclic_pci_from_factor(&f.poly, &group),
        ) {
            (Ok(rho), Ok(e)) => {
                let c = crate::cyclic_abelian::companion_matrix(&f.poly);
                let fc = f.poly.eval_matrix(&c);
                if !fc.is_zero()
                    || !c.pow(n as i64).map(|a| a.is_identity()).unwrap_or(false)
                    || rho.check_relations().is_err()
                {
                    bad_rep.push(i.to_string());
                }
                reps.push(rho);
                pcis.push(e);
            }
            _ => bad_rep.push(i.to_string()),
        }
    }
    r.check(
        "companion reps: f(C) = 0, C^n = I, relations",
        bad_rep.is_empty(),
        || index_list(&bad_rep),
    );
    let nonrational: Vec<String> = pcis
        .iter()
        .enumerate()
        .filter(|(_, e)| e.conductor() != m || (m == 1 && !e.is_rational()))
        .map(|(i, _)| i.to_string())
        .collect();
    r.check(
        "idempotent coefficients in the base field",
        nonrational.is_empty(),
        || index_list(&nonrational),
    );
    r.merge(verify_pci_suite(&pcis, &group, Some(factors.len())));
    r.merge(verify_pairing(&reps, &pcis));
    r
}
