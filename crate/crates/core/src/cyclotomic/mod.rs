//! Exact arithmetic in `Q` and the cyclotomic fields `Q(zeta_m)`.
//!
//! An element of `Q(zeta_m)` is stored on the power basis
//! `1, zeta, ..., zeta^(phi(m)-1)` reduced modulo the cyclotomic polynomial
//! `Phi_m`, as a vector of integer numerators over one positive common
//! denominator. For a fixed conductor this representation is unique.
//! Values with different conductors are combined in `Q(zeta_lcm)`.

mod numeric;
mod qpoly;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use numeric::{
    embed_all, embed_complex, embed_conjugate, pth_root, pth_root_with, pth_roots,
    reconstruct_exact, BigComplex, PthRootOptions,
};
pub(crate) use qpoly::QPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("no p-th root found: {0}")]
    NoRootFound(String),
    #[error("reconstruction failed: {0}")]
    ReconstructionFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("conductor {from} does not divide {to}")]
    BadCoercion { from: u32, to: u32 },
}

/// Cached data for one conductor.
#[derive(Debug)]
pub(crate) struct CycloData {
    pub phi: usize,
    /// `Phi_m`, ascending, monic, length `phi + 1`.
    pub poly: Vec<BigInt>,
}

fn cyclo_cache() -> &'static Mutex<HashMap<u32, Arc<CycloData>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloData>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn cyclo_data(m: u32) -> Arc<CycloData> {
    assert!(m >= 1, "conductor must be positive");
    if let Some(d) = cyclo_cache().lock().unwrap().get(&m) {
        return d.clone();
    }
    let poly = cyclotomic_integer_poly(m as u64);
    let data = Arc::new(CycloData {
        phi: poly.len() - 1,
        poly,
    });
    cyclo_cache().lock().unwrap().insert(m, data.clone());
    data
}

/// `Phi_n` with integer coefficients (ascending), by exact division of
/// `X^n - 1` by `Phi_d` for the proper divisors `d` of `n`.
pub fn cyclotomic_integer_poly(n: u64) -> Vec<BigInt> {
    let mut p: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    p[0] = BigInt::from(-1);
    p[n as usize] = BigInt::one();
    for d in crate::divisors(n) {
        if d == n {
            continue;
        }
        let divisor = cyclo_data(d as u32).poly.clone();
        p = exact_div_monic(&p, &divisor);
    }
    p
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dc) in den.iter().enumerate() {
            rem[i + j] -= &c * dc;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

/// Reduces an integer polynomial modulo the monic `Phi_m`, returning exactly
/// `phi` coefficients.
fn reduce_mod(mut coeffs: Vec<BigInt>, data: &CycloData) -> Vec<BigInt> {
    let phi = data.phi;
    if coeffs.len() > phi {
        for i in (phi..coeffs.len()).rev() {
            let c = std::mem::take(&mut coeffs[i]);
            if c.is_zero() {
                continue;
            }
            let shift = i - phi;
            for (j, pc) in data.poly[..phi].iter().enumerate() {
                if !pc.is_zero() {
                    coeffs[shift + j] -= &c * pc;
                }
            }
        }
        coeffs.truncate(phi);
    }
    coeffs.resize(phi, BigInt::zero());
    coeffs
}

/// An exact element of `Q(zeta_m)`.
#[derive(Clone, Debug)]
pub struct CycNumber {
    m: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycNumber {
    fn from_parts(m: u32, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut x = CycNumber { m, num, den };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in self.num.iter_mut() {
                *c = -&*c;
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if self.num.iter().all(|c| c.is_zero()) {
            self.den = BigInt::one();
        } else if !g.is_one() {
            self.den = &self.den / &g;
            for c in self.num.iter_mut() {
                *c = &*c / &g;
            }
        }
    }

    pub fn zero(m: u32) -> Self {
        let phi = cyclo_data(m).phi;
        CycNumber {
            m,
            num: vec![BigInt::zero(); phi],
            den: BigInt::one(),
        }
    }

    pub fn one(m: u32) -> Self {
        Self::from_rational(&BigRational::one(), m)
    }

    pub fn from_int(n: i64, m: u32) -> Self {
        Self::from_rational(&BigRational::from_integer(n.into()), m)
    }

    pub fn from_ratio(n: i64, d: i64, m: u32) -> Self {
        Self::from_rational(&BigRational::new(n.into(), d.into()), m)
    }

    pub fn from_rational(q: &BigRational, m: u32) -> Self {
        let phi = cyclo_data(m).phi;
        let mut num = vec![BigInt::zero(); phi];
        // the constant 1 in Q(zeta_1) is the class of 1 modulo X - 1
        num[0] = q.numer().clone();
        Self::from_parts(m, num, q.denom().clone())
    }

    /// Builds an element from rational power-basis coefficients; longer
    /// vectors are reduced modulo `Phi_m`.
    pub fn from_coeffs(coeffs: &[BigRational], m: u32) -> Self {
        let data = cyclo_data(m);
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let num: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::from_parts(m, reduce_mod(num, &data), den)
    }

    /// Builds an element from integer power-basis coefficients over a common
    /// denominator; longer vectors are reduced modulo `Phi_m`.
    pub fn from_int_coeffs(num: Vec<BigInt>, den: BigInt, m: u32) -> Self {
        let data = cyclo_data(m);
        Self::from_parts(m, reduce_mod(num, &data), den)
    }

    /// `zeta_m^k`.
    pub fn root_of_unity(m: u32, k: i64) -> Self {
        let e = k.rem_euclid(m as i64) as usize;
        let mut num = vec![BigInt::zero(); e + 1];
        num[e] = BigInt::one();
        Self::from_int_coeffs(num, BigInt::one(), m)
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        BigRational::new(self.num[i].clone(), self.den.clone())
    }

    pub(crate) fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.num[0] == self.den && self.num[1..].iter().all(|c| c.is_zero())
    }

    /// Some(q) if the value lies in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        // 1 is the first power-basis vector
        if self.num[1..].iter().all(|c| c.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.to_rational().is_some()
    }

    /// Embeds into `Q(zeta_big)` where `m | big`.
    pub fn coerce(&self, big: u32) -> Result<Self, CycError> {
        if big == self.m {
            return Ok(self.clone());
        }
        if !big.is_multiple_of(self.m) {
            return Err(CycError::BadCoercion {
                from: self.m,
                to: big,
            });
        }
        let step = (big / self.m) as usize;
        let mut num = vec![BigInt::zero(); step * (self.num.len().max(1) - 1) + 1];
        for (i, c) in self.num.iter().enumerate() {
            num[i * step] = c.clone();
        }
        Ok(Self::from_int_coeffs(num, self.den.clone(), big))
    }

    fn coerce_unchecked(&self, big: u32) -> Self {
        self.coerce(big).expect("conductor divides target")
    }

    /// Expresses the value in the subfield `Q(zeta_small)`, if it lies there.
    pub fn try_descend(&self, small: u32) -> Option<Self> {
        if small == self.m {
            return Some(self.clone());
        }
        if !self.m.is_multiple_of(small) {
            return None;
        }
        let small_phi = cyclo_data(small).phi;
        let phi = cyclo_data(self.m).phi;
        // columns: images of the small power basis inside Q(zeta_m)
        let cols: Vec<Vec<BigRational>> = (0..small_phi)
            .map(|i| {
                CycNumber::root_of_unity(small, i as i64)
                    .coerce_unchecked(self.m)
                    .coeffs()
            })
            .collect();
        let a: Vec<Vec<BigRational>> = (0..phi)
            .map(|r| (0..small_phi).map(|c| cols[c][r].clone()).collect())
            .collect();
        let b = self.coeffs();
        crate::linalg::solve_rational(&a, &b).map(|sol| CycNumber::from_coeffs(&sol, small))
    }

    fn common(a: &Self, b: &Self) -> (Self, Self, u32) {
        if a.m == b.m {
            return (a.clone(), b.clone(), a.m);
        }
        let l = crate::lcm(a.m as u64, b.m as u64) as u32;
        (a.coerce_unchecked(l), b.coerce_unchecked(l), l)
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        if self.m != other.m {
            let (a, b, _) = Self::common(self, other);
            return a.add_ref(&b);
        }
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(x, y)| x * &other.den + y * &self.den)
            .collect();
        Self::from_parts(self.m, num, &self.den * &other.den)
    }

    pub fn neg_ref(&self) -> Self {
        CycNumber {
            m: self.m,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.m != other.m {
            let (a, b, _) = Self::common(self, other);
            return a.mul_ref(&b);
        }
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.m);
        }
        let data = cyclo_data(self.m);
        let phi = data.phi;
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (i, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.num.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        Self::from_parts(self.m, reduce_mod(prod, &data), &self.den * &other.den)
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        let num = self.num.iter().map(|c| c * q.numer()).collect();
        Self::from_parts(self.m, num, &self.den * q.denom())
    }

    /// Multiplicative inverse via the extended Euclidean algorithm of the
    /// coefficient polynomial against `Phi_m`.
    pub fn inv(&self) -> Result<Self, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        let data = cyclo_data(self.m);
        let a = QPoly::from_coeffs(self.coeffs());
        let modulus = QPoly::from_coeffs(
            data.poly
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        );
        let (g, s, _t) = QPoly::xgcd(&a, &modulus);
        // Phi_m is irreducible, so the gcd is a nonzero constant
        debug_assert_eq!(g.degree(), Some(0));
        let g0 = g.coeffs()[0].clone();
        let inv: Vec<BigRational> = s.coeffs().iter().map(|c| c / &g0).collect();
        Ok(Self::from_coeffs(&inv, self.m))
    }

    pub fn div_ref(&self, other: &Self) -> Result<Self, CycError> {
        Ok(self.mul_ref(&other.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// The Galois automorphism `zeta -> zeta^k` (`gcd(k, m) = 1`).
    pub fn galois(&self, k: i64) -> Self {
        let m = self.m as i64;
        debug_assert_eq!(num_integer::gcd(k.rem_euclid(m.max(1)), m), 1);
        let mut num = vec![BigInt::zero(); self.m as usize];
        for (i, c) in self.num.iter().enumerate() {
            let e = ((i as i64) * k).rem_euclid(m) as usize;
            num[e] += c;
        }
        Self::from_int_coeffs(num, self.den.clone(), self.m)
    }

    /// Complex conjugation, the automorphism `zeta -> zeta^-1`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Ordering used to pick a canonical representative among several
    /// candidates: fewer nonzero coefficients first, then lower top degree,
    /// then coefficient-wise.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        let key = |x: &Self| {
            let nnz = x.num.iter().filter(|c| !c.is_zero()).count();
            let top = x
                .num
                .iter()
                .rposition(|c| !c.is_zero())
                .map_or(0, |p| p + 1);
            (nnz, top)
        };
        key(self)
            .cmp(&key(other))
            .then_with(|| self.coeffs().cmp(&other.coeffs()))
    }

    /// Parses the form produced by `Display`, in conductor `m`.
    pub fn parse(s: &str, m: u32) -> Result<Self, CycError> {
        let phi = cyclo_data(m).phi;
        let mut coeffs = vec![BigRational::zero(); phi.max(1)];
        let s = s.trim();
        if s.is_empty() {
            return Err(CycError::Parse("empty number".into()));
        }
        for term in split_terms(s)? {
            let term = term.trim();
            let (coef_str, power) = match term.split_once(")*z^") {
                Some((c, p)) => {
                    let p: usize = p
                        .trim()
                        .parse()
                        .map_err(|_| CycError::Parse(format!("bad power in `{term}`")))?;
                    (c.trim().strip_prefix('(').unwrap_or(c), p)
                }
                None => {
                    let c = term
                        .strip_prefix('(')
                        .and_then(|t| t.strip_suffix(')'))
                        .ok_or_else(|| CycError::Parse(format!("bad term `{term}`")))?;
                    (c, 0)
                }
            };
            if power >= phi {
                return Err(CycError::Parse(format!(
                    "power {power} out of range for Q(zeta_{m})"
                )));
            }
            let q: BigRational = parse_rational(coef_str)?;
            coeffs[power] += q;
        }
        Ok(Self::from_coeffs(&coeffs, m))
    }

    pub fn field_header(&self) -> String {
        format!("field: Q(zeta_{})", self.m)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        let z = embed_complex(self, 64);
        z.to_f64()
    }
}

fn split_terms(s: &str) -> Result<Vec<&str>, CycError> {
    // terms are separated by " + " at parenthesis depth zero
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(CycError::Parse(format!("unbalanced parentheses in `{s}`")));
        }
        i += 1;
    }
    out.push(&s[start..]);
    Ok(out)
}

fn parse_rational(s: &str) -> Result<BigRational, CycError> {
    let s = s.trim();
    let err = || CycError::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| err())?)),
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for CycNumber {
    /// `(a0) + (a1)*z^1 + ...`, zero coefficients omitted; zero prints `(0)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "({})", fmt_rational(c))?;
            } else {
                write!(f, "({})*z^{}", fmt_rational(c), i)?;
            }
        }
        if first {
            write!(f, "(0)")?;
        }
        Ok(())
    }
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.m == other.m {
            self.den == other.den && self.num == other.num
        } else {
            let (a, b, _) = Self::common(self, other);
            a == b
        }
    }
}

impl Eq for CycNumber {}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl<'a> $tr<&'a CycNumber> for &'a CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: &'a CycNumber) -> CycNumber {
                self.$inner(rhs)
            }
        }
        impl $tr for CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: CycNumber) -> CycNumber {
                self.$inner(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        self.neg_ref()
    }
}

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: u32, k: i64) -> CycNumber {
        CycNumber::root_of_unity(m, k)
    }

    #[test]
    fn basic_identities() {
        assert_eq!(&z(4, 1) * &z(4, 1), CycNumber::from_int(-1, 4));
        let s = &(&CycNumber::one(3) + &z(3, 1)) + &z(3, 2);
        assert!(s.is_zero());
        let one_plus = &CycNumber::one(3) + &z(3, 1);
        let inv = CycNumber::one(3).div_ref(&one_plus).unwrap();
        assert_eq!(inv, -z(3, 1));
        assert_eq!(inv, &CycNumber::one(3) + &z(3, 2));
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(z(4, 1).coeffs()[1], BigRational::one());
        assert!(z(3, 3).is_one());
        assert_eq!(z(6, 2), z(3, 1));
        assert_eq!(z(3, 1).coerce(6).unwrap(), z(6, 2));
        assert_eq!(z(2, 1), CycNumber::from_int(-1, 1));
        assert_eq!(z(1, 5), CycNumber::one(1));
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(
            CycNumber::one(5).div_ref(&CycNumber::zero(5)),
            Err(CycError::DivisionByZero)
        );
    }

    #[test]
    fn cyclotomic_polynomial_vanishes_at_zeta() {
        for m in 1..=60u32 {
            let data = cyclo_data(m);
            let mut acc = CycNumber::zero(m);
            for (i, c) in data.poly.iter().enumerate() {
                let term = z(m, i as i64).scale_rational(&BigRational::from_integer(c.clone()));
                acc = &acc + &term;
            }
            assert!(acc.is_zero(), "Phi_{m}(zeta_{m}) != 0");
        }
    }

    #[test]
    fn descend_and_rationality() {
        let x = z(12, 4); // zeta_3
        assert_eq!(x.try_descend(3).unwrap(), z(3, 1));
        assert!(z(12, 1).try_descend(3).is_none());
        let r = &z(12, 1) + &z(12, 11); // 2 cos(pi/6) = sqrt 3, irrational
        assert!(!r.is_rational());
        let h = &z(12, 2) + &z(12, 10); // 2 cos(pi/3) = 1
        assert_eq!(h.to_rational(), Some(BigRational::one()));
    }

    #[test]
    fn conjugation_and_galois() {
        assert_eq!(z(8, 1).conj(), z(8, 7));
        assert_eq!(z(12, 5).galois(5), z(12, 1));
    }

    #[test]
    fn display_round_trip() {
        let x = &CycNumber::from_ratio(-3, 4, 12)
            + &z(12, 3).scale_rational(&BigRational::new(5.into(), 7.into()));
        let s = x.to_string();
        assert_eq!(s, "(-3/4) + (5/7)*z^3");
        assert_eq!(CycNumber::parse(&s, 12).unwrap(), x);
        assert_eq!(CycNumber::zero(5).to_string(), "(0)");
        assert!(CycNumber::parse("(0)", 5).unwrap().is_zero());
        assert!(CycNumber::parse("(1)*z^9", 5).is_err());
    }
}
