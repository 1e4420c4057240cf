//! Dense square matrices over `Q(zeta_m)`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::cyclotomic::{CycError, CycNumber};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    n: usize,
    m: u32,
    data: Vec<CycNumber>,
}

impl Matrix {
    pub fn zero(n: usize, m: u32) -> Self {
        Matrix {
            n,
            m,
            data: vec![CycNumber::zero(m); n * n],
        }
    }

    pub fn identity(n: usize, m: u32) -> Self {
        let mut a = Self::zero(n, m);
        for i in 0..n {
            a.data[i * n + i] = CycNumber::one(m);
        }
        a
    }

    pub fn scalar(n: usize, c: &CycNumber) -> Self {
        let mut a = Self::zero(n, c.conductor());
        for i in 0..n {
            a.data[i * n + i] = c.clone();
        }
        a
    }

    /// Builds a matrix from rows; all entries are moved to the lcm conductor.
    pub fn from_rows(rows: Vec<Vec<CycNumber>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        let m = rows
            .iter()
            .flatten()
            .fold(1u64, |acc, c| crate::lcm(acc, c.conductor() as u64)) as u32;
        let data = rows
            .into_iter()
            .flatten()
            .map(|c| c.coerce(m).expect("conductor divides"))
            .collect();
        Matrix { n, m, data }
    }

    pub fn from_int_rows(rows: &[Vec<i64>], m: u32) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| CycNumber::from_int(x, m)).collect())
                .collect(),
        )
    }

    /// Matrix unit `E_ij`.
    pub fn unit(n: usize, i: usize, j: usize, m: u32) -> Self {
        let mut a = Self::zero(n, m);
        a.data[i * n + j] = CycNumber::one(m);
        a
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNumber {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: CycNumber) {
        if c.conductor() != self.m {
            let l = crate::lcm(self.m as u64, c.conductor() as u64) as u32;
            *self = self.coerce(l);
        }
        self.data[i * self.n + j] = c.coerce(self.m).expect("conductor divides");
    }

    pub fn rows(&self) -> Vec<Vec<CycNumber>> {
        self.data
            .chunks(self.n.max(1))
            .take(self.n)
            .map(|r| r.to_vec())
            .collect()
    }

    pub fn coerce(&self, big: u32) -> Self {
        Matrix {
            n: self.n,
            m: big,
            data: self
                .data
                .iter()
                .map(|c| c.coerce(big).expect("conductor divides"))
                .collect(),
        }
    }

    fn unify(&self, other: &Self) -> (Matrix, Matrix) {
        assert_eq!(self.n, other.n, "dimension mismatch");
        if self.m == other.m {
            return (self.clone(), other.clone());
        }
        let l = crate::lcm(self.m as u64, other.m as u64) as u32;
        (self.coerce(l), other.coerce(l))
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        let (a, b) = self.unify(other);
        let data = a
            .data
            .iter()
            .zip(&b.data)
            .map(|(x, y)| x.add_ref(y))
            .collect();
        Matrix {
            n: a.n,
            m: a.m,
            data,
        }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        let (a, b) = self.unify(other);
        let data = a
            .data
            .iter()
            .zip(&b.data)
            .map(|(x, y)| x.sub_ref(y))
            .collect();
        Matrix {
            n: a.n,
            m: a.m,
            data,
        }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        let (a, b) = self.unify(other);
        let n = a.n;
        let mut out = Matrix::zero(n, a.m);
        for i in 0..n {
            for k in 0..n {
                let x = &a.data[i * n + k];
                if x.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let y = &b.data[k * n + j];
                    if !y.is_zero() {
                        out.data[i * n + j] = out.data[i * n + j].add_ref(&x.mul_ref(y));
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &CycNumber) -> Self {
        let l = crate::lcm(self.m as u64, c.conductor() as u64) as u32;
        let a = self.coerce(l);
        Matrix {
            n: a.n,
            m: l,
            data: a.data.iter().map(|x| x.mul_ref(c)).collect(),
        }
    }

    pub fn trace(&self) -> CycNumber {
        (0..self.n).fold(CycNumber::zero(self.m), |acc, i| {
            acc.add_ref(&self.data[i * self.n + i])
        })
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n, self.m);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].clone();
            }
        }
        out
    }

    /// Block matrix placement: copies `b` into `self` at offset `(r, c)`.
    pub fn set_block(&mut self, r: usize, c: usize, b: &Matrix) {
        for i in 0..b.n {
            for j in 0..b.n {
                self.set(r + i, c + j, b.get(i, j).clone());
            }
        }
    }

    pub fn block_diag(blocks: &[Matrix]) -> Self {
        let n = blocks.iter().map(|b| b.n).sum();
        let m = blocks
            .iter()
            .fold(1u64, |acc, b| crate::lcm(acc, b.m as u64)) as u32;
        let mut out = Self::zero(n, m);
        let mut off = 0;
        for b in blocks {
            out.set_block(off, off, b);
            off += b.n;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n, self.m)
    }

    /// If the matrix is `c * I`, returns `c`.
    pub fn as_scalar(&self) -> Option<CycNumber> {
        let c = self.data.first()?.clone();
        (*self == Self::scalar(self.n, &c).coerce(self.m)).then_some(c)
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self, CycError> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n, self.m);
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a.data[r * n + col].is_zero())
                .ok_or(CycError::DivisionByZero)?;
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    inv.data.swap(piv * n + j, col * n + j);
                }
            }
            let s = a.data[col * n + col].inv()?;
            for j in 0..n {
                a.data[col * n + j] = a.data[col * n + j].mul_ref(&s);
                inv.data[col * n + j] = inv.data[col * n + j].mul_ref(&s);
            }
            for r in 0..n {
                if r == col || a.data[r * n + col].is_zero() {
                    continue;
                }
                let f = a.data[r * n + col].clone();
                for j in 0..n {
                    let t = f.mul_ref(&a.data[col * n + j]);
                    a.data[r * n + j] = a.data[r * n + j].sub_ref(&t);
                    let t = f.mul_ref(&inv.data[col * n + j]);
                    inv.data[r * n + j] = inv.data[r * n + j].sub_ref(&t);
                }
            }
        }
        Ok(inv)
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, e: i64) -> Result<Self, CycError> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut out = Self::identity(self.n, self.m);
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul_ref(&base);
            }
            base = base.mul_ref(&base);
            k >>= 1;
        }
        Ok(out)
    }

    /// Whether all entries lie in `Q(zeta_small)`; returns the descended matrix.
    pub fn try_descend(&self, small: u32) -> Option<Self> {
        let data = self
            .data
            .iter()
            .map(|c| c.try_descend(small))
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix {
            n: self.n,
            m: small,
            data,
        })
    }

    pub fn galois(&self, k: i64) -> Self {
        Matrix {
            n: self.n,
            m: self.m,
            data: self.data.iter().map(|c| c.galois(k)).collect(),
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| {
                format!(
                    "[{}]",
                    r.iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &'a Matrix) -> Matrix {
        self.add_ref(rhs)
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &'a Matrix) -> Matrix {
        self.sub_ref(rhs)
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &'a Matrix) -> Matrix {
        self.mul_ref(rhs)
    }
}
