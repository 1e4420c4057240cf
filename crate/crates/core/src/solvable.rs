//! Irreducible representations and primitive central idempotents of a
//! solvable group, built up the subnormal series one prime step at a time.
//!
//! At a step `G_k <| G_(k+1) = <G_k, x>` of prime index `p`, the orbit of an
//! irreducible `eta` of `G_k` under conjugation by `x` has size 1 or `p`.
//! Singleton orbits extend to `p` representations and the idempotent `e_eta`
//! splits into `p` pieces, using a class sum `C(g)` with
//! `(C(g) e_eta)^p = lambda e_eta`. Free orbits induce to one representation
//! and the idempotents of the orbit are merged into one.

use std::collections::HashMap;
use std::sync::Arc;

use log::{debug, info, warn};
use num_rational::BigRational;
use thiserror::Error;

use crate::cyclotomic::{pth_roots, CycError, CycNumber, PthRootOptions};
use crate::grpalg::{class_sum, AlgebraElement};
use crate::matrix::Matrix;
use crate::presentation::{Elem, Group};
use crate::rep::{RepError, Representation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolvableError {
    #[error("orbit is not a singleton")]
    OrbitNotSingleton,
    #[error("orbit is a singleton")]
    OrbitIsSingleton,
    #[error("orbit of size {size} at level {level} is neither 1 nor {p}")]
    BadOrbitSize { level: usize, size: usize, p: u64 },
    #[error("no nonzero intertwiner found")]
    IntertwinerNotFound,
    #[error("no {p}-th root in the working field: {source}")]
    RootFailure { p: u64, source: CycError },
    #[error("no witness with nonzero lambda at level {0}")]
    NoWitness(usize),
    #[error("power of the class sum is not a scalar multiple of the idempotent")]
    ScalarExtractionFailed,
    #[error("conjugates of the idempotent are not distinct and orthogonal")]
    ConjugatesNotDistinct,
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Rep(#[from] RepError),
}

#[derive(Clone, Debug)]
pub struct SolvableOptions {
    /// Index into the canonically sorted `p`-th roots used for `mu` and for
    /// the extension scalars.
    pub branch: usize,
    /// Working conductor; defaults to the exponent of the group.
    pub conductor: Option<u32>,
    pub build_irreps: bool,
    /// Starting precision in bits for the numeric part of root extraction.
    pub start_precision: u32,
}

impl Default for SolvableOptions {
    fn default() -> Self {
        SolvableOptions {
            branch: 0,
            conductor: None,
            build_irreps: true,
            start_precision: 128,
        }
    }
}

/// Data of one idempotent splitting step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BermanStep {
    /// Level `k` of the idempotent being split (it lives in `C[G_k]`).
    pub level: usize,
    pub witness: Elem,
    pub lambda: CycNumber,
    pub mu: CycNumber,
}

/// Irreducible representations and primitive central idempotents of `G_k`;
/// `irreps[i]` is paired with `pcis[i]` (`irreps[i](pcis[i]) = I`).
#[derive(Clone, Debug)]
pub struct LevelState {
    pub level: usize,
    pub irreps: Vec<Representation>,
    pub pcis: Vec<AlgebraElement>,
}

#[derive(Clone, Debug)]
pub struct SolvableResult {
    pub conductor: u32,
    pub levels: Vec<LevelState>,
    pub steps: Vec<BermanStep>,
}

impl SolvableResult {
    pub fn top(&self) -> &LevelState {
        self.levels.last().expect("level 0 always present")
    }

    pub fn pcis(&self) -> &[AlgebraElement] {
        &self.top().pcis
    }

    pub fn irreps(&self) -> &[Representation] {
        &self.top().irreps
    }
}

fn select_root(lambda: &CycNumber, p: u64, opts: &RootChoice) -> Result<CycNumber, SolvableError> {
    let popts = PthRootOptions {
        branch: opts.branch,
        start_precision: opts.start_precision,
        max_precision: opts.start_precision.max(4096),
        ..Default::default()
    };
    let mut roots =
        pth_roots(lambda, p, &popts).map_err(|source| SolvableError::RootFailure { p, source })?;
    let i = opts.branch % roots.len();
    let mu = roots.swap_remove(i);
    // roots are computed in Q(zeta_lcm(m, p)); stay in the working field
    let m = lambda.conductor();
    mu.try_descend(m).ok_or(SolvableError::RootFailure {
        p,
        source: CycError::NoRootFound(format!("root lies outside Q(zeta_{m})")),
    })
}

/// Branch and precision used for every root extraction.
#[derive(Clone, Copy, Debug)]
pub struct RootChoice {
    pub branch: usize,
    pub start_precision: u32,
}

impl Default for RootChoice {
    fn default() -> Self {
        RootChoice {
            branch: 0,
            start_precision: 128,
        }
    }
}

impl From<&SolvableOptions> for RootChoice {
    fn from(o: &SolvableOptions) -> Self {
        RootChoice {
            branch: o.branch,
            start_precision: o.start_precision,
        }
    }
}

fn image_map(rep: &Representation) -> HashMap<Elem, Matrix> {
    rep.all_images().into_iter().collect()
}

/// `eta^x(h) = eta(x h x^-1)` on the generators of `eta`'s level.
pub fn conjugate_rep(eta: &Representation, x: Elem) -> Representation {
    let g = eta.group();
    let images = image_map(eta);
    let xi = g.inv(x);
    let gens = (0..eta.level())
        .map(|j| images[&g.conj(g.generator(j), xi)].clone())
        .collect();
    let mut r = Representation::new(g, eta.level(), gens);
    if eta.level() == 0 {
        r = Representation::trivial(g, 0, eta.conductor());
    }
    r
}

/// The `p` extensions of `eta` (a representation of `G_k`, stable under
/// conjugation by `x = x_(k+1)`) to `G_(k+1)`, ordered by the power of
/// `zeta_p` multiplying the base extension.
pub fn extend_rep(
    eta: &Representation,
    roots: &RootChoice,
) -> Result<Vec<Representation>, SolvableError> {
    let g = eta.group().clone();
    let k = eta.level();
    let x = g.generator(k);
    let p = g.prime(k);
    let d = eta.degree();
    let m = eta.conductor();
    let images = image_map(eta);
    let xi = g.inv(x);

    let mut t = None;
    'seeds: for i in 0..d {
        for j in 0..d {
            let a = Matrix::unit(d, i, j, m);
            let mut s = Matrix::zero(d, m);
            for h in g.level_elements(k) {
                let left = &images[&g.conj(h, xi)];
                let right = &images[&g.inv(h)];
                s = &s + &(&(left * &a) * right);
            }
            if !s.is_zero() {
                t = Some(s);
                break 'seeds;
            }
        }
    }
    let t = t.ok_or(SolvableError::IntertwinerNotFound)?;
    // check the intertwining property on generators
    for j in 0..k {
        let h = g.generator(j);
        if &t * &images[&h] != &images[&g.conj(h, xi)] * &t {
            return Err(SolvableError::OrbitNotSingleton);
        }
    }
    let tp = t.pow(p as i64).map_err(|e| SolvableError::Rep(e.into()))?;
    let w = &images[&g.pow(x, p as i64)];
    let (r, c) = (0..d * d)
        .map(|idx| (idx / d, idx % d))
        .find(|&(r, c)| !tp.get(r, c).is_zero())
        .ok_or(SolvableError::IntertwinerNotFound)?;
    let beta = w
        .get(r, c)
        .div_ref(tp.get(r, c))
        .map_err(|e| SolvableError::Rep(e.into()))?;
    if *w != tp.scale(&beta) {
        return Err(SolvableError::ScalarExtractionFailed);
    }
    let c0 = select_root(&beta, p, roots)?;
    let base = t.scale(&c0);
    let zeta = CycNumber::root_of_unity(p as u32, 1)
        .coerce(m)
        .map_err(|e| SolvableError::Rep(e.into()))?;
    let mut out = Vec::with_capacity(p as usize);
    for i in 0..p {
        let mut gens: Vec<Matrix> = eta.generator_images().to_vec();
        gens.push(base.scale(&zeta.pow(i)));
        let rho = Representation::new(&g, k + 1, gens).coerce(m);
        rho.check_relations()?;
        out.push(rho);
    }
    Ok(out)
}

/// The representation of `G_(k+1)` induced from `eta` (a representation of
/// `G_k`): block `b` of `rho(h)` is `eta(x^-b h x^b)`, and `rho(x)` shifts
/// block `b` to `b + 1` with `eta(x^p)` in the wrap-around block.
pub fn induce_rep(eta: &Representation) -> Result<Representation, SolvableError> {
    let g = eta.group().clone();
    let k = eta.level();
    let x = g.generator(k);
    let p = g.prime(k) as usize;
    let d = eta.degree();
    let m = eta.conductor();
    let images = image_map(eta);
    let mut gens = Vec::with_capacity(k + 1);
    for j in 0..k {
        let blocks: Vec<Matrix> = (0..p)
            .map(|b| images[&g.conj(g.generator(j), g.pow(x, b as i64))].clone())
            .collect();
        gens.push(Matrix::block_diag(&blocks));
    }
    let mut rx = Matrix::zero(p * d, m);
    let id = Matrix::identity(d, m);
    for b in 0..p - 1 {
        rx.set_block((b + 1) * d, b * d, &id);
    }
    rx.set_block(0, (p - 1) * d, &images[&g.pow(x, p as i64)]);
    gens.push(rx);
    let rho = Representation::new(&g, k + 1, gens).coerce(m);
    rho.check_relations()?;
    if !rho.is_irreducible() {
        return Err(SolvableError::OrbitIsSingleton);
    }
    Ok(rho)
}

/// Splits a central idempotent `e` of `C[G_k]` that stays central in
/// `C[G_(k+1)]` into `p` primitive pieces.
pub fn berman_extend_pcis(
    e: &AlgebraElement,
    level: usize,
    roots: &RootChoice,
) -> Result<(Vec<AlgebraElement>, BermanStep), SolvableError> {
    let g = e.group().clone();
    let m = e.conductor();
    let p = g.prime(level);
    let e1 = e.coeff(g.identity());
    if e1.is_zero() {
        return Err(SolvableError::InvariantViolation(
            "idempotent has zero identity coefficient".into(),
        ));
    }
    for w in g.level_elements(level + 1) {
        if g.in_level(w, level) {
            continue;
        }
        let a = &class_sum(&g, &g.class_in_level(w, level + 1), m) * e;
        let b = a.pow(p - 1);
        let b = &b * &a;
        let lambda = b.coeff(g.identity()).div_ref(&e1).expect("nonzero");
        if lambda.is_zero() {
            if !b.is_zero() {
                return Err(SolvableError::ScalarExtractionFailed);
            }
            debug!("witness {} gives lambda = 0", g.format_elem(w));
            continue;
        }
        if b != e.scale(&lambda) {
            return Err(SolvableError::ScalarExtractionFailed);
        }
        let mu = select_root(&lambda, p, roots)?;
        let c = a.scale(&mu.inv().expect("nonzero"));
        let mut powers = vec![e.clone(), c.clone()];
        for _ in 2..p {
            let next = powers.last().unwrap() * &c;
            powers.push(next);
        }
        let zeta = CycNumber::root_of_unity(p as u32, 1);
        let inv_p = BigRational::new(1.into(), (p as i64).into());
        let mut fs = Vec::with_capacity(p as usize);
        for i in 0..p {
            let mut f = AlgebraElement::zero(&g, m);
            for (kk, ck) in powers.iter().enumerate() {
                f = &f + &ck.scale(&zeta.pow(i * kk as u64));
            }
            fs.push(f.scale(&CycNumber::from_rational(&inv_p, 1)).coerce(m));
        }
        let mut sum = AlgebraElement::zero(&g, m);
        for f in &fs {
            sum = &sum + f;
        }
        if sum != *e {
            return Err(SolvableError::InvariantViolation(
                "pieces do not sum to the idempotent".into(),
            ));
        }
        for i in 0..fs.len() {
            for j in i + 1..fs.len() {
                if !(&fs[i] * &fs[j]).is_zero() {
                    return Err(SolvableError::InvariantViolation(
                        "pieces are not orthogonal".into(),
                    ));
                }
            }
        }
        debug!(
            "level {level}: witness {}, lambda = {lambda}, mu = {mu}",
            g.format_elem(w)
        );
        return Ok((
            fs,
            BermanStep {
                level,
                witness: w,
                lambda,
                mu,
            },
        ));
    }
    Err(SolvableError::NoWitness(level))
}

/// `e + e^x + ... + e^(x^(p-1))` for an idempotent whose conjugates under
/// `x` are distinct and orthogonal.
pub fn berman_merge_pcis(
    e: &AlgebraElement,
    x: Elem,
    p: u64,
) -> Result<AlgebraElement, SolvableError> {
    let g = e.group();
    let conjs: Vec<AlgebraElement> = (0..p).map(|j| e.conjugate(g.pow(x, j as i64))).collect();
    for i in 0..conjs.len() {
        for j in i + 1..conjs.len() {
            if conjs[i] == conjs[j] || !(&conjs[i] * &conjs[j]).is_zero() {
                return Err(SolvableError::ConjugatesNotDistinct);
            }
        }
    }
    let mut sum = AlgebraElement::zero(g, e.conductor());
    for c in &conjs {
        sum = &sum + c;
    }
    Ok(sum)
}

fn run(
    group: &Arc<Group>,
    m: u32,
    opts: &SolvableOptions,
) -> Result<SolvableResult, SolvableError> {
    let mut levels = vec![LevelState {
        level: 0,
        irreps: if opts.build_irreps {
            vec![Representation::trivial(group, 0, m)]
        } else {
            vec![]
        },
        pcis: vec![AlgebraElement::one(group, m)],
    }];
    let mut steps = Vec::new();
    for k in 0..group.num_generators() {
        let prev = levels.last().unwrap();
        let x = group.generator(k);
        let p = group.prime(k);
        let sigma: Vec<usize> = prev
            .pcis
            .iter()
            .map(|e| {
                let c = e.conjugate(x);
                prev.pcis.iter().position(|f| *f == c).ok_or_else(|| {
                    SolvableError::InvariantViolation(format!(
                        "conjugate of an idempotent at level {k} is not listed"
                    ))
                })
            })
            .collect::<Result<_, _>>()?;
        let mut seen = vec![false; sigma.len()];
        let mut next = LevelState {
            level: k + 1,
            irreps: vec![],
            pcis: vec![],
        };
        for start in 0..sigma.len() {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut i = sigma[start];
            while i != start {
                seen[i] = true;
                orbit.push(i);
                i = sigma[i];
            }
            let e = &prev.pcis[start];
            if orbit.len() == 1 {
                let (fs, step) = berman_extend_pcis(e, k, &RootChoice::from(opts))?;
                steps.push(step);
                if opts.build_irreps {
                    let reps = extend_rep(&prev.irreps[start], &RootChoice::from(opts))?;
                    let maps: Vec<HashMap<Elem, Matrix>> = reps.iter().map(image_map).collect();
                    let mut used = vec![false; reps.len()];
                    for f in &fs {
                        let j = (0..reps.len())
                            .find(|&j| {
                                !used[j] && apply_with(&maps[j], f, reps[j].degree()).is_identity()
                            })
                            .ok_or_else(|| {
                                SolvableError::InvariantViolation(format!(
                                    "no extension matches an idempotent at level {}",
                                    k + 1
                                ))
                            })?;
                        used[j] = true;
                        next.irreps.push(reps[j].clone());
                    }
                }
                next.pcis.extend(fs);
            } else if orbit.len() as u64 == p {
                next.pcis.push(berman_merge_pcis(e, x, p)?);
                if opts.build_irreps {
                    next.irreps.push(induce_rep(&prev.irreps[start])?);
                }
            } else {
                return Err(SolvableError::BadOrbitSize {
                    level: k,
                    size: orbit.len(),
                    p,
                });
            }
        }
        if opts.build_irreps {
            let total: usize = next.irreps.iter().map(|r| r.degree() * r.degree()).sum();
            if total != group.level_order(k + 1) {
                return Err(SolvableError::InvariantViolation(format!(
                    "sum of squared degrees {total} at level {} is not {}",
                    k + 1,
                    group.level_order(k + 1)
                )));
            }
        }
        info!("level {}: {} idempotents", k + 1, next.pcis.len());
        levels.push(next);
    }
    Ok(SolvableResult {
        conductor: m,
        levels,
        steps,
    })
}

/// `sum_g c_g rho(g)` from a precomputed image table.
fn apply_with(images: &HashMap<Elem, Matrix>, a: &AlgebraElement, d: usize) -> Matrix {
    let mut out = Matrix::zero(d, a.conductor());
    for (g, c) in a.terms() {
        out = &out + &images[g].scale(c);
    }
    out
}

/// Runs the whole tower. If a `p`-th root is missing from the working field,
/// the conductor is enlarged by `p` and the run repeated.
pub fn solvable_full(
    group: &Arc<Group>,
    opts: &SolvableOptions,
) -> Result<SolvableResult, SolvableError> {
    let mut m = opts.conductor.unwrap_or(group.exponent() as u32).max(1);
    let mut attempts = 0;
    loop {
        match run(group, m, opts) {
            Err(SolvableError::RootFailure { p, source }) if attempts < 3 => {
                warn!(
                    "p-th root missing in Q(zeta_{m}) ({source}); retrying in Q(zeta_{})",
                    m as u64 * p
                );
                m *= p as u32;
                attempts += 1;
            }
            other => return other,
        }
    }
}

pub fn solvable_pcis(
    group: &Arc<Group>,
    opts: &SolvableOptions,
) -> Result<Vec<AlgebraElement>, SolvableError> {
    let opts = SolvableOptions {
        build_irreps: false,
        ..opts.clone()
    };
    Ok(solvable_full(group, &opts)?.top().pcis.clone())
}

pub fn solvable_irreps(
    group: &Arc<Group>,
    opts: &SolvableOptions,
) -> Result<Vec<Representation>, SolvableError> {
    let opts = SolvableOptions {
        build_irreps: true,
        ..opts.clone()
    };
    Ok(solvable_full(group, &opts)?.top().irreps.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q8: &str = "gen x prime 2\ngen y prime 2\ngen z prime 2\npow x = 1\npow y = x\npow z = x\nconj z y = x y\n";
    const S3: &str = "gen a prime 3\ngen b prime 2\npow a = 1\npow b = 1\nconj b a = a^2\n";

    #[test]
    fn q8_tower() {
        let g = Group::parse(Q8).unwrap();
        let res = solvable_full(&g, &SolvableOptions::default()).unwrap();
        assert_eq!(res.conductor, 4);
        let degs: Vec<usize> = res.irreps().iter().map(|r| r.degree()).collect();
        assert_eq!(degs.iter().filter(|&&d| d == 1).count(), 4);
        assert_eq!(degs.iter().filter(|&&d| d == 2).count(), 1);
        assert_eq!(res.pcis().len(), 5);
        for (rho, e) in res.irreps().iter().zip(res.pcis()) {
            assert!(rho.apply(e).unwrap().is_identity());
            assert!(e.is_central() && e.is_idempotent());
        }
    }

    #[test]
    fn s3_tower() {
        let g = Group::parse(S3).unwrap();
        let res = solvable_full(&g, &SolvableOptions::default()).unwrap();
        let mut degs: Vec<usize> = res.irreps().iter().map(|r| r.degree()).collect();
        degs.sort();
        assert_eq!(degs, vec![1, 1, 2]);
        for r in res.irreps() {
            assert!(r.is_irreducible());
        }
    }
}
