//! Structural queries: conjugacy classes, subgroups, abelianization and
//! cyclic quotients.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{Elem, Group, PresentationError, Word};
use crate::linalg::smith_normal_form;

/// `G/G'` as a product of cyclic groups, with the projection from `G`.
#[derive(Clone, Debug)]
pub struct Abelianization {
    /// Nontrivial invariant factors `n_1 | n_2 | ...`.
    pub invariant_factors: Vec<u64>,
    /// `columns[l][i]` is the coefficient of the exponent of `x_i` in
    /// coordinate `l`.
    columns: Vec<Vec<i64>>,
}

impl Abelianization {
    /// Coordinates of the image of an element with the given exponent vector.
    pub fn project_exponents(&self, exps: &[u32]) -> Vec<u64> {
        self.columns
            .iter()
            .zip(&self.invariant_factors)
            .map(|(col, &n)| {
                let s: i64 = col.iter().zip(exps).map(|(&c, &a)| c * a as i64).sum();
                s.rem_euclid(n as i64) as u64
            })
            .collect()
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }
}

/// A surjection `G -> C_d` described by its kernel and a coset generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicQuotient {
    pub order: u64,
    pub kernel: Vec<Elem>,
    /// Least element whose image generates the quotient.
    pub generator: Elem,
}

impl Group {
    /// Conjugacy classes of `G_k` (under conjugation within `G_k`), each sorted,
    /// ordered by least element.
    pub fn conjugacy_classes_in_level(&self, k: usize) -> Vec<Vec<Elem>> {
        let elems = self.level_elements(k);
        let gens: Vec<Elem> = (0..k).map(|i| self.generator(i)).collect();
        let mut seen = vec![false; self.order()];
        let mut classes = Vec::new();
        for &e in &elems {
            if seen[e.index()] {
                continue;
            }
            seen[e.index()] = true;
            let mut class = vec![e];
            let mut queue = VecDeque::from([e]);
            while let Some(h) = queue.pop_front() {
                for &g in &gens {
                    let c = self.conj(h, g);
                    if !seen[c.index()] {
                        seen[c.index()] = true;
                        class.push(c);
                        queue.push_back(c);
                    }
                }
            }
            class.sort();
            classes.push(class);
        }
        classes
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<Elem>> {
        self.conjugacy_classes_in_level(self.num_generators())
    }

    /// Conjugacy class of `a` in `G_k`.
    pub fn class_in_level(&self, a: Elem, k: usize) -> Vec<Elem> {
        let gens: Vec<Elem> = (0..k).map(|i| self.generator(i)).collect();
        let mut seen = BTreeSet::from([a]);
        let mut queue = VecDeque::from([a]);
        while let Some(h) = queue.pop_front() {
            for &g in &gens {
                let c = self.conj(h, g);
                if seen.insert(c) {
                    queue.push_back(c);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn subgroup_closure(&self, gens: &[Elem]) -> Vec<Elem> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![self.identity()];
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(h) = queue.pop_front() {
            for &g in gens {
                let c = self.mul(h, g);
                if !seen[c.index()] {
                    seen[c.index()] = true;
                    out.push(c);
                    queue.push_back(c);
                }
            }
        }
        out.sort();
        out
    }

    pub fn is_subgroup(&self, set: &[Elem]) -> bool {
        let mut member = vec![false; self.order()];
        for &a in set {
            member[a.index()] = true;
        }
        !set.is_empty()
            && set.iter().all(|&a| {
                set.iter()
                    .all(|&b| member[self.mul(a, self.inv(b)).index()])
            })
    }

    pub fn is_normal(&self, set: &[Elem]) -> bool {
        let mut member = vec![false; self.order()];
        for &a in set {
            member[a.index()] = true;
        }
        self.is_subgroup(set)
            && (0..self.num_generators()).all(|i| {
                set.iter()
                    .all(|&a| member[self.conj(a, self.generator(i)).index()])
            })
    }

    /// Whether `a` commutes with every generator of `G_k`.
    pub fn centralizes_level(&self, a: Elem, k: usize) -> bool {
        (0..k).all(|i| {
            let g = self.generator(i);
            self.mul(a, g) == self.mul(g, a)
        })
    }

    /// Commutator subgroup `G'`, sorted.
    pub fn derived_subgroup(&self) -> Vec<Elem> {
        let mut comms = BTreeSet::new();
        for a in self.elements() {
            for b in self.elements() {
                let c = self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b));
                comms.insert(c);
            }
        }
        let gens: Vec<Elem> = comms.into_iter().collect();
        self.subgroup_closure(&gens)
    }

    /// Abelianization via the Smith normal form of the abelianized relations.
    pub fn abelianization(&self) -> Abelianization {
        let n = self.num_generators();
        let lp = self.presentation();
        let ab = |w: &Word| {
            let mut v = vec![0i64; n];
            for &(g, e) in &w.0 {
                v[g] += e;
            }
            v
        };
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for i in 0..n {
            let mut r = ab(&lp.power_relations[i]);
            for x in r.iter_mut() {
                *x = -*x;
            }
            r[i] += self.prime(i) as i64;
            rows.push(r.into_iter().map(BigInt::from).collect());
            for j in 0..i {
                let mut r = ab(&lp.conj_relations[i][j]);
                for x in r.iter_mut() {
                    *x = -*x;
                }
                r[j] += 1;
                if r.iter().any(|&x| x != 0) {
                    rows.push(r.into_iter().map(BigInt::from).collect());
                }
            }
        }
        let snf = smith_normal_form(&rows, n);
        let mut invariant_factors = Vec::new();
        let mut columns = Vec::new();
        for (l, d) in snf.diagonal.iter().enumerate() {
            debug_assert!(!d.is_zero(), "finite group has full rank relations");
            let d = d.to_u64().expect("invariant factor fits");
            if d > 1 {
                invariant_factors.push(d);
                let d = d as i64;
                columns.push(
                    (0..n)
                        .map(|i| {
                            let c: BigInt = &snf.v[i][l] % d;
                            c.to_i64().unwrap().rem_euclid(d)
                        })
                        .collect(),
                );
            }
        }
        Abelianization {
            invariant_factors,
            columns,
        }
    }

    /// All cyclic quotients `G -> C_d` (`d >= 1`), one per distinct kernel,
    /// ordered by `d` and then by the order of enumeration.
    pub fn cyclic_quotient_kernels(&self) -> Vec<CyclicQuotient> {
        let ab = self.abelianization();
        let coords: Vec<Vec<u64>> = self
            .elements()
            .map(|a| ab.project_exponents(&self.exponents(a)))
            .collect();
        let mut seen: BTreeSet<Vec<Elem>> = BTreeSet::new();
        let mut out = Vec::new();
        for d in crate::divisors(ab.order()) {
            // phi_l must be a multiple of d / gcd(d, n_l)
            let choices: Vec<Vec<u64>> = ab
                .invariant_factors
                .iter()
                .map(|&nl| {
                    let g = crate::gcd(d, nl);
                    (0..g).map(|t| t * (d / g)).collect()
                })
                .collect();
            let mut idx = vec![0usize; choices.len()];
            loop {
                let phi: Vec<u64> = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
                let g = phi.iter().fold(d, |acc, &x| crate::gcd(acc, x));
                if g == 1 {
                    let image = |a: Elem| -> u64 {
                        coords[a.index()]
                            .iter()
                            .zip(&phi)
                            .map(|(&c, &f)| c * f % d)
                            .sum::<u64>()
                            % d
                    };
                    let kernel: Vec<Elem> = self.elements().filter(|&a| image(a) == 0).collect();
                    if seen.insert(kernel.clone()) {
                        let generator = self
                            .elements()
                            .find(|&a| crate::gcd(image(a), d) == 1)
                            .expect("surjective");
                        out.push(CyclicQuotient {
                            order: d,
                            kernel,
                            generator,
                        });
                    }
                }
                // odometer
                let mut pos = 0;
                loop {
                    if pos == idx.len() {
                        break;
                    }
                    idx[pos] += 1;
                    if idx[pos] < choices[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == idx.len() {
                    break;
                }
            }
        }
        out
    }

    /// The generator of maximal order when `G` is cyclic.
    pub fn cyclic_generator(&self) -> Result<Elem, PresentationError> {
        self.elements()
            .find(|&a| self.elem_order(a) == self.order() as u64)
            .ok_or(PresentationError::NotCyclic)
    }
}
