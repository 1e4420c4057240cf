//! Cyclic and abelian groups: cyclotomic factors of `X^n - 1`, companion
//! matrix representations, Newton-identity idempotents, the `p`-power and
//! CRT factorizations, and pullbacks from cyclic quotients.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use thiserror::Error;

use crate::cyclotomic::CycNumber;
use crate::grpalg::{avg_idempotent, AlgebraElement};
use crate::matrix::Matrix;
use crate::presentation::{CyclicQuotient, Elem, Group};
pub use crate::rep::Representation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyclicError {
    #[error("group is not abelian")]
    NotAbelian,
    #[error("group is not cyclic")]
    NotCyclic,
    #[error("group is not a cyclic p-group in tower form")]
    NotPPowerCyclic,
    #[error("polynomial does not divide X^{0} - 1")]
    FactorMismatch(u64),
}

/// Dense polynomial over `Q(zeta_m)`, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    m: u32,
    coeffs: Vec<CycNumber>,
}

impl Poly {
    pub fn new(coeffs: Vec<CycNumber>, m: u32) -> Self {
        let m = coeffs
            .iter()
            .fold(m as u64, |acc, c| crate::lcm(acc, c.conductor() as u64)) as u32;
        let mut coeffs: Vec<CycNumber> = coeffs
            .into_iter()
            .map(|c| c.coerce(m).expect("conductor divides"))
            .collect();
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { m, coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs.iter().map(|&c| CycNumber::from_int(c, 1)).collect(),
            1,
        )
    }

    /// `X^n - 1`.
    pub fn x_pow_minus_one(n: usize, m: u32) -> Self {
        let mut c = vec![CycNumber::zero(m); n + 1];
        c[0] = CycNumber::from_int(-1, m);
        c[n] = CycNumber::one(m);
        Self::new(c, m)
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[CycNumber] {
        &self.coeffs
    }

    /// Degree; the zero polynomial has degree 0 here and is flagged by
    /// [`Poly::is_zero`].
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coerce(&self, big: u32) -> Self {
        Poly {
            m: big,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.coerce(big).expect("conductor divides"))
                .collect(),
        }
    }

    pub fn try_descend(&self, small: u32) -> Option<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.try_descend(small))
            .collect::<Option<Vec<_>>>()?;
        Some(Poly { m: small, coeffs })
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly {
                m: crate::lcm(self.m as u64, other.m as u64) as u32,
                coeffs: vec![],
            };
        }
        let l = crate::lcm(self.m as u64, other.m as u64) as u32;
        let mut c = vec![CycNumber::zero(l); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Self::new(c, l)
    }

    /// Quotient and remainder; `other` must be nonzero.
    pub fn divrem(&self, other: &Self) -> (Self, Self) {
        let l = crate::lcm(self.m as u64, other.m as u64) as u32;
        let mut r = self.coerce(l).coeffs;
        let d = other.coerce(l);
        let lead_inv = d
            .coeffs
            .last()
            .expect("nonzero divisor")
            .inv()
            .expect("nonzero");
        let dd = d.degree();
        if r.len() < d.coeffs.len() {
            return (Self::new(vec![], l), Self::new(r, l));
        }
        let mut q = vec![CycNumber::zero(l); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].mul_ref(&lead_inv);
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].sub_ref(&c.mul_ref(dc));
                }
            }
            q[k] = c;
        }
        (Self::new(q, l), Self::new(r, l))
    }

    /// `f(A)` by Horner's rule.
    pub fn eval_matrix(&self, a: &Matrix) -> Matrix {
        let n = a.dim();
        let mut out = Matrix::zero(n, self.m);
        for c in self.coeffs.iter().rev() {
            out = &(&out * a) + &Matrix::scalar(n, c);
        }
        out
    }

    /// Dense coefficient list, ascending degree.
    pub fn serialize(&self) -> String {
        format!(
            "[{}]",
            self.coeffs
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// `Phi_d` over `Q`, by dividing `X^d - 1` by `Phi_e` for the proper divisors `e`.
pub fn cyclotomic_poly(d: u64) -> Poly {
    let mut f = Poly::x_pow_minus_one(d as usize, 1);
    for e in crate::divisors(d) {
        if e < d {
            let (q, r) = f.divrem(&cyclotomic_poly(e));
            debug_assert!(r.is_zero());
            f = q;
        }
    }
    f
}

/// A monic irreducible factor of `Phi_d` over `Q(zeta_m)`, with its roots
/// `zeta_d^j` listed by exponent `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicFactor {
    pub d: u64,
    pub roots: Vec<u64>,
    pub poly: Poly,
}

/// Irreducible factors of `Phi_d` over `Q(zeta_m)`: one per orbit of
/// `(Z/d)*` under the Galois group fixing `Q(zeta_m)`, ordered by least root
/// exponent.
pub fn factor_cyclotomic(d: u64, m: u32) -> Vec<CyclotomicFactor> {
    let l = crate::lcm(d, m as u64);
    let units_d: Vec<u64> = (0..d.max(1))
        .filter(|&j| crate::gcd(j, d) == 1)
        .map(|j| j % d.max(1))
        .collect();
    let units_d = if d == 1 { vec![0] } else { units_d };
    let h: Vec<u64> = (1..=l)
        .filter(|&k| crate::gcd(k, l) == 1 && k % m as u64 == 1 % m as u64)
        .map(|k| k % d)
        .collect();
    let mut seen = vec![false; d as usize];
    let mut out = Vec::new();
    for &j in &units_d {
        if seen[j as usize] {
            continue;
        }
        let mut orbit: Vec<u64> = h.iter().map(|&k| j * k % d).collect();
        orbit.sort();
        orbit.dedup();
        for &r in &orbit {
            seen[r as usize] = true;
        }
        let lc = l as u32;
        let mut f = Poly::new(vec![CycNumber::one(lc)], lc);
        for &r in &orbit {
            let root = CycNumber::root_of_unity(d as u32, r as i64)
                .coerce(lc)
                .expect("d divides l");
            f = f.mul(&Poly::new(vec![root.neg_ref(), CycNumber::one(lc)], lc));
        }
        let poly = f
            .try_descend(m)
            .expect("orbit product is fixed by the Galois group");
        out.push(CyclotomicFactor {
            d,
            roots: orbit,
            poly,
        });
    }
    out
}

/// All factors of `X^n - 1` over `Q(zeta_m)`, grouped by `d | n` ascending.
pub fn factor_xn_minus_1(n: u64, m: u32) -> Vec<CyclotomicFactor> {
    crate::divisors(n)
        .into_iter()
        .flat_map(|d| factor_cyclotomic(d, m))
        .collect()
}

/// Companion matrix: `C[j+1][j] = 1`, last column `-f_0, ..., -f_(d-1)`.
pub fn companion_matrix(f: &Poly) -> Matrix {
    let d = f.degree();
    let m = f.conductor();
    let mut c = Matrix::zero(d, m);
    for j in 0..d.saturating_sub(1) {
        c.set(j + 1, j, CycNumber::one(m));
    }
    for i in 0..d {
        c.set(i, d - 1, f.coeffs()[i].neg_ref());
    }
    c
}

/// Exponents `k_i` with `x_i = x^k_i` for a generator `x` of a cyclic group.
fn generator_exponents(group: &Group, x: Elem) -> Vec<u64> {
    let n = group.order() as i64;
    (0..group.num_generators())
        .map(|i| {
            let gi = group.generator(i);
            (0..n).find(|&k| group.pow(x, k) == gi).expect("cyclic") as u64
        })
        .collect()
}

fn check_divides(f: &Poly, n: u64) -> Result<(), CyclicError> {
    let (_, r) = Poly::x_pow_minus_one(n as usize, f.conductor()).divrem(f);
    if r.is_zero() && !f.is_zero() && f.degree() >= 1 {
        Ok(())
    } else {
        Err(CyclicError::FactorMismatch(n))
    }
}

/// Representation of a cyclic group sending its least generator `x` to the
/// companion matrix of `f`.
pub fn companion_rep(f: &Poly, group: &Arc<Group>) -> Result<Representation, CyclicError> {
    let x = group
        .cyclic_generator()
        .map_err(|_| CyclicError::NotCyclic)?;
    check_divides(f, group.order() as u64)?;
    let c = companion_matrix(f);
    let images = generator_exponents(group, x)
        .into_iter()
        .map(|k| c.pow(k as i64).expect("invertible"))
        .collect();
    Ok(Representation::new(group, group.num_generators(), images))
}

/// Power sums `P_0 .. P_(n-1)` of the roots of the monic `f`, from its
/// coefficients by Newton's identities.
pub fn power_sums(f: &Poly, n: usize) -> Vec<CycNumber> {
    let d = f.degree();
    let m = f.conductor();
    let a = f.coeffs();
    let mut p = vec![CycNumber::from_int(d as i64, m)];
    for k in 1..n {
        let mut s = CycNumber::zero(m);
        for i in 1..k.min(d + 1) {
            s = s.add_ref(&a[d - i].mul_ref(&p[k - i]));
        }
        if k <= d {
            s = s.add_ref(&a[d - k].mul_ref(&CycNumber::from_int(k as i64, m)));
        }
        p.push(s.neg_ref());
    }
    p
}

/// Coefficients `alpha_i` (`i < n`) of the idempotent of `F[C_n]` attached to
/// the factor `f`: `alpha_i = P_((n-i) mod n) / n`.
pub fn newton_idempotent_coeffs(f: &Poly, n: u64) -> Result<Vec<CycNumber>, CyclicError> {
    check_divides(f, n)?;
    let p = power_sums(f, n as usize);
    let inv_n = BigRational::new(1.into(), (n as i64).into());
    Ok((0..n as usize)
        .map(|i| p[(n as usize - i) % n as usize].scale_rational(&inv_n))
        .collect())
}

/// The primitive central idempotent of `F[G]` (`G` cyclic) attached to `f`,
/// written in powers of the least generator.
pub fn cyclic_pci_from_factor(f: &Poly, group: &Arc<Group>) -> Result<AlgebraElement, CyclicError> {
    let x = group
        .cyclic_generator()
        .map_err(|_| CyclicError::NotCyclic)?;
    let coeffs = newton_idempotent_coeffs(f, group.order() as u64)?;
    let m = f.conductor();
    Ok(AlgebraElement::from_terms(
        group,
        m,
        coeffs
            .into_iter()
            .enumerate()
            .map(|(i, c)| (group.pow(x, i as i64), c)),
    ))
}

/// `(1/N) sum_i zeta^-i x^i` for an element `x` of order `N`.
pub fn direct_cyclic_pci(group: &Arc<Group>, x: Elem, zeta: &CycNumber) -> AlgebraElement {
    let n = group.elem_order(x) as i64;
    let m = zeta.conductor();
    let inv = zeta.inv().expect("root of unity");
    let scale = BigRational::new(1.into(), n.into());
    AlgebraElement::from_terms(
        group,
        m,
        (0..n).map(|i| (group.pow(x, i), inv.pow(i as u64).scale_rational(&scale))),
    )
}

/// `e_X = (1 + X + ... + X^(k-1)) / k` with `X = c * g`.
fn geometric_idempotent(group: &Arc<Group>, g: Elem, c: &CycNumber, k: u64) -> AlgebraElement {
    let scale = BigRational::new(1.into(), (k as i64).into());
    AlgebraElement::from_terms(
        group,
        c.conductor(),
        (0..k).map(|i| (group.pow(g, i as i64), c.pow(i).scale_rational(&scale))),
    )
}

/// Factors `e_(zeta_1^-1 x_1) ... e_(zeta_n^-1 x_n)` of the idempotent
/// `(1/p^n) sum zeta^-i x_n^i` of a cyclic `p`-group in tower form
/// (`x_1^p = 1`, `x_i^p = x_(i-1)`), with `zeta_n = zeta`,
/// `zeta_(i-1) = zeta_i^p`.
pub fn ppower_pci_factorization(
    group: &Arc<Group>,
    zeta: &CycNumber,
) -> Result<Vec<AlgebraElement>, CyclicError> {
    let n = group.num_generators();
    if n == 0 {
        return Err(CyclicError::NotPPowerCyclic);
    }
    let p = group.prime(0);
    let tower = (0..n).all(|i| {
        group.prime(i) == p
            && group.pow(group.generator(i), p as i64)
                == if i == 0 {
                    group.identity()
                } else {
                    group.generator(i - 1)
                }
    }) && group.is_cyclic();
    if !tower {
        return Err(CyclicError::NotPPowerCyclic);
    }
    let mut zetas = vec![zeta.clone()];
    for _ in 1..n {
        let next = zetas.last().unwrap().pow(p);
        zetas.push(next);
    }
    zetas.reverse();
    Ok((0..n)
        .map(|i| {
            let c = zetas[i].inv().expect("root of unity");
            geometric_idempotent(group, group.generator(i), &c, p)
        })
        .collect())
}

/// One factor of the CRT decomposition `e_zeta = prod_p e_(zeta_p)`.
#[derive(Clone, Debug)]
pub struct CrtFactor {
    pub prime: u64,
    /// `c_p` with `c_p = 1 mod p^a`, `c_p = 0 mod N/p^a`.
    pub crt_exponent: u64,
    pub generator: Elem,
    pub zeta: CycNumber,
    pub idempotent: AlgebraElement,
}

/// Splits the idempotent of `zeta` over the Sylow decomposition
/// `y = prod y_p`, `y_p = y^(c_p)`, `zeta_p = zeta^(c_p)`.
pub fn crt_pci_factorization(
    group: &Arc<Group>,
    zeta: &CycNumber,
) -> Result<Vec<CrtFactor>, CyclicError> {
    let y = group
        .cyclic_generator()
        .map_err(|_| CyclicError::NotCyclic)?;
    let n = group.order() as u64;
    let mut primes = crate::prime_factors(n);
    primes.dedup();
    Ok(primes
        .into_iter()
        .map(|p| {
            let mut q = 1;
            while n.is_multiple_of(q * p) {
                q *= p;
            }
            let rest = n / q;
            let c = (0..n)
                .find(|&c| c % q == 1 % q && c % rest == 0)
                .expect("CRT");
            let yp = group.pow(y, c as i64);
            let zp = zeta.pow(c);
            let idempotent = direct_cyclic_pci(group, yp, &zp);
            CrtFactor {
                prime: p,
                crt_exponent: c,
                generator: yp,
                zeta: zp,
                idempotent,
            }
        })
        .collect())
}

/// A simple component of `F[G]` for abelian `G`: a cyclic quotient, a
/// faithful factor of `Phi_d`, the pulled-back idempotent and the
/// corresponding irreducible representation.
#[derive(Clone, Debug)]
pub struct AbelianComponent {
    pub quotient: CyclicQuotient,
    pub factor: CyclotomicFactor,
    pub idempotent: AlgebraElement,
    pub rep: Representation,
}

/// Every (cyclic quotient, faithful factor) pair over `Q(zeta_m)`.
pub fn abelian_components(
    group: &Arc<Group>,
    m: u32,
) -> Result<Vec<AbelianComponent>, CyclicError> {
    if !group.is_abelian() {
        return Err(CyclicError::NotAbelian);
    }
    let mut out = Vec::new();
    for q in group.cyclic_quotient_kernels() {
        let d = q.order;
        let e_k = avg_idempotent(group, &q.kernel, m).expect("kernel is a subgroup");
        let mut member = vec![false; group.order()];
        for k in &q.kernel {
            member[k.index()] = true;
        }
        let x = q.generator;
        // x_i = x^(k_i) modulo the kernel
        let ks: Vec<i64> = (0..group.num_generators())
            .map(|i| {
                let gi = group.generator(i);
                (0..d as i64)
                    .find(|&k| member[group.mul(gi, group.inv(group.pow(x, k))).index()])
                    .expect("x generates the quotient")
            })
            .collect();
        for factor in factor_cyclotomic(d, m) {
            let coeffs = newton_idempotent_coeffs(&factor.poly, d)?;
            let lift = AlgebraElement::from_terms(
                group,
                m,
                coeffs
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| (group.pow(x, i as i64), c)),
            );
            let idempotent = &e_k * &lift;
            let c = companion_matrix(&factor.poly).coerce(m);
            let images = ks.iter().map(|&k| c.pow(k).expect("invertible")).collect();
            let rep = Representation::new(group, group.num_generators(), images);
            out.push(AbelianComponent {
                quotient: q.clone(),
                factor,
                idempotent,
                rep,
            });
        }
    }
    Ok(out)
}

pub fn abelian_pcis(group: &Arc<Group>, m: u32) -> Result<Vec<AlgebraElement>, CyclicError> {
    Ok(abelian_components(group, m)?
        .into_iter()
        .map(|c| c.idempotent)
        .collect())
}

pub fn abelian_irreps(group: &Arc<Group>, m: u32) -> Result<Vec<Representation>, CyclicError> {
    Ok(abelian_components(group, m)?
        .into_iter()
        .map(|c| c.rep)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::LongPresentation;

    fn q(n: i64, d: i64) -> CycNumber {
        CycNumber::from_ratio(n, d, 1)
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), Poly::from_ints(&[-1, 1]));
        assert_eq!(cyclotomic_poly(4), Poly::from_ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), Poly::from_ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(12), Poly::from_ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn factorizations() {
        let fs: Vec<Poly> = factor_xn_minus_1(4, 1)
            .into_iter()
            .map(|f| f.poly)
            .collect();
        assert_eq!(
            fs,
            vec![
                Poly::from_ints(&[-1, 1]),
                Poly::from_ints(&[1, 1]),
                Poly::from_ints(&[1, 0, 1])
            ]
        );
        let fs = factor_xn_minus_1(4, 4);
        assert_eq!(fs.len(), 4);
        assert!(fs.iter().all(|f| f.poly.degree() == 1));
        let fs = factor_cyclotomic(8, 4);
        assert_eq!(fs.len(), 2);
        let i = CycNumber::root_of_unity(4, 1);
        let z0 = CycNumber::zero(4);
        let one = CycNumber::one(4);
        assert_eq!(
            fs[0].poly,
            Poly::new(vec![i.neg_ref(), z0.clone(), one.clone()], 4)
        );
        assert_eq!(fs[1].poly, Poly::new(vec![i.clone(), z0, one], 4));
        assert_eq!(fs[0].poly.mul(&fs[1].poly), cyclotomic_poly(8).coerce(4));
    }

    #[test]
    fn companion_and_newton() {
        let g = Group::from_presentation(&LongPresentation::cyclic(4)).unwrap();
        let f = Poly::from_ints(&[1, 0, 1]);
        let r = companion_rep(&f, &g).unwrap();
        r.check_relations().unwrap();
        assert_eq!(
            companion_matrix(&f),
            Matrix::from_int_rows(&[vec![0, -1], vec![1, 0]], 1)
        );
        let e = cyclic_pci_from_factor(&f, &g).unwrap();
        let x = g.cyclic_generator().unwrap();
        assert_eq!(e.coeff(g.identity()), q(1, 2));
        assert_eq!(e.coeff(g.pow(x, 2)), q(-1, 2));
        assert_eq!(e.support_len(), 2);
        assert!(matches!(
            companion_rep(&Poly::from_ints(&[1, 1, 1]), &g),
            Err(CyclicError::FactorMismatch(4))
        ));

        let g3 = Group::from_presentation(&LongPresentation::cyclic(3)).unwrap();
        let e = cyclic_pci_from_factor(&cyclotomic_poly(3), &g3).unwrap();
        let x = g3.cyclic_generator().unwrap();
        assert_eq!(e.coeff(g3.identity()), q(2, 3));
        assert_eq!(e.coeff(x), q(-1, 3));
        assert_eq!(e.coeff(g3.pow(x, 2)), q(-1, 3));
    }

    #[test]
    fn ppower_c4() {
        let g = Group::from_presentation(&LongPresentation::cyclic(4)).unwrap();
        let zeta = CycNumber::root_of_unity(4, 1);
        let fs = ppower_pci_factorization(&g, &zeta).unwrap();
        let prod = &fs[0] * &fs[1];
        assert_eq!(prod, direct_cyclic_pci(&g, g.generator(1), &zeta));
        assert_eq!(prod.support_len(), 4);
    }

    #[test]
    fn crt_c6() {
        let g = Group::from_presentation(&LongPresentation::cyclic(6)).unwrap();
        let y = g.cyclic_generator().unwrap();
        let zeta = CycNumber::root_of_unity(6, 1);
        let fs = crt_pci_factorization(&g, &zeta).unwrap();
        assert_eq!(fs[0].zeta, CycNumber::from_int(-1, 1));
        assert_eq!(fs[1].zeta, CycNumber::root_of_unity(6, 4));
        let prod = &fs[0].idempotent * &fs[1].idempotent;
        assert_eq!(prod, direct_cyclic_pci(&g, y, &zeta));
    }

    #[test]
    fn klein_four() {
        let g = Group::parse("gen a prime 2\ngen b prime 2\npow a = 1\npow b = 1\n").unwrap();
        let comps = abelian_components(&g, 1).unwrap();
        assert_eq!(comps.len(), 4);
        for c in &comps {
            assert_eq!(c.idempotent.support_len(), 4);
            assert!(c.idempotent.is_idempotent());
            c.rep.check_relations().unwrap();
        }
    }
}
