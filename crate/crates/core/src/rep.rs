//! Matrix representations of the groups `G_k` along a long presentation.

use std::sync::Arc;

use thiserror::Error;

use crate::cyclotomic::{CycError, CycNumber};
use crate::grpalg::AlgebraElement;
use crate::matrix::Matrix;
use crate::presentation::{Elem, Group};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("relation check failed: {0}")]
    RelationFailed(String),
    #[error("image of generator {0} is not invertible")]
    NotInvertible(usize),
    #[error("element {0:?} is outside the level of the representation")]
    OutsideLevel(Elem),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error(transparent)]
    Cyc(#[from] CycError),
}

/// A representation of `G_level = <x_1, ..., x_level>` given by the images of
/// its generators.
#[derive(Clone, Debug)]
pub struct Representation {
    group: Arc<Group>,
    level: usize,
    degree: usize,
    m: u32,
    images: Vec<Matrix>,
}

impl Representation {
    /// Wraps generator images without checking relations.
    pub fn new(group: &Arc<Group>, level: usize, images: Vec<Matrix>) -> Self {
        assert_eq!(images.len(), level, "one image per generator of the level");
        let degree = images.first().map_or(1, |a| a.dim());
        let m = images
            .iter()
            .fold(1u64, |acc, a| crate::lcm(acc, a.conductor() as u64)) as u32;
        let images = images.iter().map(|a| a.coerce(m)).collect();
        Representation {
            group: group.clone(),
            level,
            degree,
            m,
            images,
        }
    }

    /// Same as [`Representation::new`] followed by [`Representation::check_relations`].
    pub fn checked(
        group: &Arc<Group>,
        level: usize,
        images: Vec<Matrix>,
    ) -> Result<Self, RepError> {
        let r = Self::new(group, level, images);
        r.check_relations()?;
        Ok(r)
    }

    pub fn trivial(group: &Arc<Group>, level: usize, m: u32) -> Self {
        let mut r = Self::new(group, level, vec![Matrix::identity(1, m); level]);
        r.m = m;
        r
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn generator_images(&self) -> &[Matrix] {
        &self.images
    }

    pub fn coerce(&self, big: u32) -> Self {
        Representation {
            images: self.images.iter().map(|a| a.coerce(big)).collect(),
            m: big,
            ..self.clone()
        }
    }

    /// Image of an element of `G_level`, from its normal form.
    pub fn image_of(&self, g: Elem) -> Result<Matrix, RepError> {
        if !self.group.in_level(g, self.level) {
            return Err(RepError::OutsideLevel(g));
        }
        let exps = self.group.exponents(g);
        let mut out = Matrix::identity(self.degree, self.m);
        for (i, &a) in exps.iter().enumerate().take(self.level) {
            if a > 0 {
                out = &out * &self.images[i].pow(a as i64)?;
            }
        }
        Ok(out)
    }

    /// Images of all elements of `G_level`, in index order.
    pub fn all_images(&self) -> Vec<(Elem, Matrix)> {
        let g = &self.group;
        let powers: Vec<Vec<Matrix>> = (0..self.level)
            .map(|i| {
                let mut v = vec![Matrix::identity(self.degree, self.m)];
                for _ in 1..g.prime(i) {
                    let next = v.last().unwrap() * &self.images[i];
                    v.push(next);
                }
                v
            })
            .collect();
        // prefix products along the digits
        let mut out: Vec<(Elem, Matrix)> =
            vec![(g.identity(), Matrix::identity(self.degree, self.m))];
        for i in 0..self.level {
            let mut next = Vec::with_capacity(out.len() * g.prime(i) as usize);
            for (e, a) in &out {
                for k in 0..g.prime(i) {
                    let elem = g.mul(*e, g.pow(g.generator(i), k as i64));
                    next.push((elem, a * &powers[i][k as usize]));
                }
            }
            out = next;
        }
        out.sort_by_key(|(e, _)| *e);
        out
    }

    /// Character values on `G_level`, in index order.
    pub fn character(&self) -> Vec<(Elem, CycNumber)> {
        self.all_images()
            .into_iter()
            .map(|(e, a)| (e, a.trace()))
            .collect()
    }

    /// Exact check of every power and conjugation relation among the
    /// generators of the level.
    pub fn check_relations(&self) -> Result<(), RepError> {
        let g = &self.group;
        let lp = g.presentation();
        for (i, a) in self.images.iter().enumerate() {
            if a.dim() != self.degree {
                return Err(RepError::DegreeMismatch(a.dim(), self.degree));
            }
            if a.inverse().is_err() {
                return Err(RepError::NotInvertible(i));
            }
        }
        let eval = |w: &crate::presentation::Word| -> Result<Matrix, RepError> {
            let mut out = Matrix::identity(self.degree, self.m);
            for &(gen, e) in &w.0 {
                out = &out * &self.images[gen].pow(e)?;
            }
            Ok(out)
        };
        for i in 0..self.level {
            let sym = g.symbol(i);
            let lhs = self.images[i].pow(g.prime(i) as i64)?;
            if lhs != eval(&lp.power_relations[i])? {
                return Err(RepError::RelationFailed(format!(
                    "power relation of `{sym}`"
                )));
            }
            let inv = self.images[i].inverse()?;
            for j in 0..i {
                let lhs = &(&inv * &self.images[j]) * &self.images[i];
                if lhs != eval(&lp.conj_relations[i][j])? {
                    return Err(RepError::RelationFailed(format!(
                        "conjugation relation of `{sym}` on `{}`",
                        g.symbol(j)
                    )));
                }
            }
        }
        Ok(())
    }

    /// `sum_g c_g rho(g)`; the support must lie in `G_level`.
    pub fn apply(&self, a: &AlgebraElement) -> Result<Matrix, RepError> {
        let l = crate::lcm(self.m as u64, a.conductor() as u64) as u32;
        let mut out = Matrix::zero(self.degree, l);
        for (g, c) in a.terms() {
            out = &out + &self.image_of(*g)?.scale(c);
        }
        Ok(out)
    }

    /// Squared norm of the character `(1/|H|) sum chi(h) chi(h^-1)`; equals 1
    /// exactly for absolutely irreducible representations.
    pub fn character_norm(&self) -> CycNumber {
        let chars = self.character();
        let lookup: std::collections::HashMap<Elem, &CycNumber> =
            chars.iter().map(|(e, c)| (*e, c)).collect();
        let mut s = CycNumber::zero(self.m);
        for (e, c) in &chars {
            s = s.add_ref(&c.mul_ref(lookup[&self.group.inv(*e)]));
        }
        s.scale_rational(&num_rational::BigRational::new(
            1.into(),
            (chars.len() as i64).into(),
        ))
    }

    pub fn is_irreducible(&self) -> bool {
        self.character_norm().is_one()
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, RepError> {
        if self.level != other.level {
            return Err(RepError::DegreeMismatch(self.level, other.level));
        }
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| Matrix::block_diag(&[a.clone(), b.clone()]))
            .collect();
        Ok(Self::new(&self.group, self.level, images))
    }

    /// Restriction to `G_k`, `k <= level`.
    pub fn restrict(&self, k: usize) -> Self {
        assert!(k <= self.level);
        let mut r = Self::new(&self.group, k, self.images[..k].to_vec());
        r.degree = self.degree;
        r.m = self.m;
        r
    }

    pub fn galois(&self, k: i64) -> Self {
        Representation {
            images: self.images.iter().map(|a| a.galois(k)).collect(),
            ..self.clone()
        }
    }

    /// Descends all matrices to `Q(zeta_small)` when possible.
    pub fn try_descend(&self, small: u32) -> Option<Self> {
        let images = self
            .images
            .iter()
            .map(|a| a.try_descend(small))
            .collect::<Option<Vec<_>>>()?;
        Some(Representation {
            images,
            m: small,
            ..self.clone()
        })
    }
}
