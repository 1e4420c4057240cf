//! Sparse group-algebra arithmetic over `Q(zeta_m)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::cyclotomic::{CycError, CycNumber};
use crate::presentation::{Elem, Group};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrpAlgError {
    #[error("group algebra elements belong to different groups")]
    GroupMismatch,
    #[error("element set is not a subgroup")]
    NotASubgroup,
    #[error("cannot parse algebra element: {0}")]
    Parse(String),
    #[error(transparent)]
    Cyc(#[from] CycError),
}

/// An element of `Q(zeta_m)[G]`, stored as a sparse map without zero terms.
///
/// Terms are keyed by normal-form index, which orders them lexicographically
/// by exponent vector.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    group: Arc<Group>,
    m: u32,
    terms: BTreeMap<Elem, CycNumber>,
}

fn same_group(a: &Arc<Group>, b: &Arc<Group>) -> bool {
    Arc::ptr_eq(a, b) || a.presentation() == b.presentation()
}

impl AlgebraElement {
    pub fn zero(group: &Arc<Group>, m: u32) -> Self {
        AlgebraElement {
            group: group.clone(),
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(group: &Arc<Group>, m: u32) -> Self {
        Self::from_elem(group, group.identity(), CycNumber::one(m))
    }

    /// `c * g`.
    pub fn from_elem(group: &Arc<Group>, g: Elem, c: CycNumber) -> Self {
        let m = c.conductor();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(g, c);
        }
        AlgebraElement {
            group: group.clone(),
            m,
            terms,
        }
    }

    /// Builds an element from terms, merging repeated group elements.
    pub fn from_terms(
        group: &Arc<Group>,
        m: u32,
        terms: impl IntoIterator<Item = (Elem, CycNumber)>,
    ) -> Self {
        let mut out = Self::zero(group, m);
        for (g, c) in terms {
            out.add_term(g, &c);
        }
        out
    }

    fn add_term(&mut self, g: Elem, c: &CycNumber) {
        if c.conductor() != self.m {
            let l = crate::lcm(self.m as u64, c.conductor() as u64) as u32;
            if l != self.m {
                *self = self.coerce(l);
            }
        }
        let c = c.coerce(self.m).expect("conductor divides");
        match self.terms.get_mut(&g) {
            Some(v) => {
                let s = v.add_ref(&c);
                if s.is_zero() {
                    self.terms.remove(&g);
                } else {
                    *v = s;
                }
            }
            None => {
                if !c.is_zero() {
                    self.terms.insert(g, c);
                }
            }
        }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn terms(&self) -> &BTreeMap<Elem, CycNumber> {
        &self.terms
    }

    pub fn coeff(&self, g: Elem) -> CycNumber {
        self.terms
            .get(&g)
            .cloned()
            .unwrap_or_else(|| CycNumber::zero(self.m))
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Moves every coefficient into `Q(zeta_big)`; `m` must divide `big`.
    pub fn coerce(&self, big: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(g, c)| (*g, c.coerce(big).expect("conductor divides")))
            .collect();
        AlgebraElement {
            group: self.group.clone(),
            m: big,
            terms,
        }
    }

    /// Rewrites the coefficients over `Q(zeta_small)` if they all lie there.
    pub fn try_descend(&self, small: u32) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (g, c) in &self.terms {
            terms.insert(*g, c.try_descend(small)?);
        }
        Some(AlgebraElement {
            group: self.group.clone(),
            m: small,
            terms,
        })
    }

    /// Descends to the least divisor of the current conductor holding all
    /// coefficients.
    pub fn descend_minimal(&self) -> Self {
        for d in crate::divisors(self.m as u64) {
            if let Some(a) = self.try_descend(d as u32) {
                return a;
            }
        }
        self.clone()
    }

    fn check(&self, other: &Self) -> Result<u32, GrpAlgError> {
        if !same_group(&self.group, &other.group) {
            return Err(GrpAlgError::GroupMismatch);
        }
        Ok(crate::lcm(self.m as u64, other.m as u64) as u32)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, GrpAlgError> {
        let l = self.check(other)?;
        let mut out = self.coerce(l);
        for (g, c) in &other.terms {
            out.add_term(*g, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, GrpAlgError> {
        self.try_add(&other.neg_ref())
    }

    /// Convolution product.
    pub fn try_mul(&self, other: &Self) -> Result<Self, GrpAlgError> {
        let l = self.check(other)?;
        let a = self.coerce(l);
        let b = other.coerce(l);
        let mut acc: BTreeMap<Elem, CycNumber> = BTreeMap::new();
        for (g, cg) in &a.terms {
            for (h, ch) in &b.terms {
                let k = self.group.mul(*g, *h);
                let p = cg.mul_ref(ch);
                match acc.get_mut(&k) {
                    Some(v) => *v = v.add_ref(&p),
                    None => {
                        acc.insert(k, p);
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(AlgebraElement {
            group: self.group.clone(),
            m: l,
            terms: acc,
        })
    }

    pub fn neg_ref(&self) -> Self {
        AlgebraElement {
            group: self.group.clone(),
            m: self.m,
            terms: self.terms.iter().map(|(g, c)| (*g, c.neg_ref())).collect(),
        }
    }

    pub fn scale(&self, s: &CycNumber) -> Self {
        let l = crate::lcm(self.m as u64, s.conductor() as u64) as u32;
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            for (g, c) in &self.terms {
                terms.insert(*g, c.mul_ref(s).coerce(l).expect("conductor divides"));
            }
        }
        AlgebraElement {
            group: self.group.clone(),
            m: l,
            terms,
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut out = Self::one(&self.group, self.m);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Term-wise `g^-1 h g`.
    pub fn conjugate(&self, g: Elem) -> Self {
        AlgebraElement {
            group: self.group.clone(),
            m: self.m,
            terms: self
                .terms
                .iter()
                .map(|(h, c)| (self.group.conj(*h, g), c.clone()))
                .collect(),
        }
    }

    pub fn is_idempotent(&self) -> bool {
        &(self * self) == self
    }

    /// Commutes with every group element (checked on generators).
    pub fn is_central(&self) -> bool {
        (0..self.group.num_generators()).all(|i| self.conjugate(self.group.generator(i)) == *self)
    }

    /// Whether all coefficients lie in `Q`.
    pub fn is_rational(&self) -> bool {
        self.terms.values().all(|c| c.is_rational())
    }

    /// Applies `zeta -> zeta^k` to every coefficient.
    pub fn galois(&self, k: i64) -> Self {
        AlgebraElement {
            group: self.group.clone(),
            m: self.m,
            terms: self.terms.iter().map(|(g, c)| (*g, c.galois(k))).collect(),
        }
    }

    /// One record per line: `{exponents: [a1, ..], coeff: <number>}`.
    pub fn to_records(&self) -> String {
        let mut s = String::new();
        for (g, c) in &self.terms {
            let exps: Vec<String> = self
                .group
                .exponents(*g)
                .iter()
                .map(|e| e.to_string())
                .collect();
            s.push_str(&format!(
                "{{exponents: [{}], coeff: {}}}\n",
                exps.join(", "),
                c
            ));
        }
        s
    }

    /// Inverse of [`AlgebraElement::to_records`].
    pub fn parse_records(group: &Arc<Group>, text: &str, m: u32) -> Result<Self, GrpAlgError> {
        let mut out = Self::zero(group, m);
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let bad = || GrpAlgError::Parse(line.to_string());
            let body = line
                .strip_prefix('{')
                .and_then(|l| l.strip_suffix('}'))
                .ok_or_else(bad)?;
            let body = body
                .trim()
                .strip_prefix("exponents:")
                .ok_or_else(bad)?
                .trim();
            let close = body.find(']').ok_or_else(bad)?;
            let exps: Vec<u32> = body[1..close]
                .split(',')
                .map(|s| s.trim())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<u32>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?;
            if exps.len() != group.num_generators() {
                return Err(bad());
            }
            let rest = body[close + 1..]
                .trim()
                .strip_prefix(',')
                .ok_or_else(bad)?
                .trim();
            let coeff = rest.strip_prefix("coeff:").ok_or_else(bad)?.trim();
            let c = CycNumber::parse(coeff, m)?;
            out.add_term(group.from_exponents(&exps), &c);
        }
        Ok(out)
    }
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group)
            && self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|((g, a), (h, b))| g == h && a == b)
    }
}

impl Eq for AlgebraElement {}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(g, c)| {
                let cs = c.to_string();
                let cs = if cs.contains(" + ") {
                    format!("({cs})")
                } else {
                    cs
                };
                format!("{}*[{}]", cs, self.group.format_elem(*g))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<'a> Add<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    /// Panics on mismatched groups; see [`AlgebraElement::try_add`].
    fn add(self, rhs: &'a AlgebraElement) -> AlgebraElement {
        self.try_add(rhs).expect("group mismatch")
    }
}

impl<'a> Sub<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &'a AlgebraElement) -> AlgebraElement {
        self.try_sub(rhs).expect("group mismatch")
    }
}

impl<'a> Mul<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &'a AlgebraElement) -> AlgebraElement {
        self.try_mul(rhs).expect("group mismatch")
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.neg_ref()
    }
}

/// Sum of the elements of a conjugacy class, each with coefficient 1.
pub fn class_sum(group: &Arc<Group>, class: &[Elem], m: u32) -> AlgebraElement {
    AlgebraElement::from_terms(group, m, class.iter().map(|&g| (g, CycNumber::one(m))))
}

/// `e_H = (1/|H|) sum_{h in H} h`.
pub fn avg_idempotent(
    group: &Arc<Group>,
    h: &[Elem],
    m: u32,
) -> Result<AlgebraElement, GrpAlgError> {
    let mut set = h.to_vec();
    set.sort();
    set.dedup();
    if !group.is_subgroup(&set) {
        return Err(GrpAlgError::NotASubgroup);
    }
    let c = CycNumber::from_ratio(1, set.len() as i64, m);
    Ok(AlgebraElement::from_terms(
        group,
        m,
        set.into_iter().map(|g| (g, c.clone())),
    ))
}

/// `F[G] = F[G] e_G' + Delta(G, G')`: the commutative part is cut out by the
/// central idempotent `e_G'`.
#[derive(Clone, Debug)]
pub struct DeltaDecomposition {
    pub e_derived: AlgebraElement,
    /// `|G/G'|`, the dimension of the commutative part.
    pub commutative_dimension: usize,
    /// Whether the noncommutative complement `(1 - e_G') F[G]` is nonzero.
    pub has_complement: bool,
}

pub fn delta_decomposition(group: &Arc<Group>) -> DeltaDecomposition {
    let derived = group.derived_subgroup();
    let e = avg_idempotent(group, &derived, 1).expect("derived subgroup");
    DeltaDecomposition {
        e_derived: e,
        commutative_dimension: group.order() / derived.len(),
        has_complement: derived.len() > 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q8: &str = "gen x prime 2\ngen y prime 2\ngen z prime 2\npow x = 1\npow y = x\npow z = x\nconj z y = x y\n";

    #[test]
    fn averaging_idempotents() {
        let g = Group::parse(Q8).unwrap();
        let x = g.generator(0);
        let ex = avg_idempotent(&g, &[g.identity(), x], 1).unwrap();
        assert!(ex.is_idempotent());
        assert!(ex.is_central());
        let half = CycNumber::from_ratio(1, 2, 1);
        assert_eq!(ex.coeff(x), half);
        let one = AlgebraElement::one(&g, 1);
        let other = &one - &ex;
        assert!((&ex * &other).is_zero());
        assert!(matches!(
            avg_idempotent(&g, &[x, g.generator(1)], 1),
            Err(GrpAlgError::NotASubgroup)
        ));
    }

    #[test]
    fn delta_of_q8() {
        let g = Group::parse(Q8).unwrap();
        let d = delta_decomposition(&g);
        assert_eq!(d.commutative_dimension, 4);
        assert_eq!(d.e_derived.support_len(), 2);
    }

    #[test]
    fn records_round_trip() {
        let g = Group::parse(Q8).unwrap();
        let a = AlgebraElement::from_terms(
            &g,
            4,
            [
                (g.generator(1), CycNumber::root_of_unity(4, 1)),
                (g.generator(2), CycNumber::from_ratio(-3, 2, 4)),
            ],
        );
        let text = a.to_records();
        assert_eq!(AlgebraElement::parse_records(&g, &text, 4).unwrap(), a);
    }
}
