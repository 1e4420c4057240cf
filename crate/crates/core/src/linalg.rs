//! Small dense exact linear algebra over `Q` and the integer Smith normal form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Solves `a * x = b` over `Q` where `a` has `rows` rows and `cols` columns
/// (row-major). Returns `None` if the system is inconsistent or the solution
/// is not unique.
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    if rows == 0 {
        return None;
    }
    let cols = a[0].len();
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(sel) = (pivot_row..rows).find(|&r| !aug[r][col].is_zero()) else {
            return None;
        };
        aug.swap(pivot_row, sel);
        let inv = BigRational::one() / &aug[pivot_row][col];
        for v in aug[pivot_row].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..rows {
            if r != pivot_row && !aug[r][col].is_zero() {
                let factor = aug[r][col].clone();
                for c in col..=cols {
                    let sub = &factor * &aug[pivot_row][c];
                    aug[r][c] -= sub;
                }
            }
        }
        pivot_row += 1;
    }
    if aug[pivot_row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    Some(aug[..cols].iter().map(|r| r[cols].clone()).collect())
}

/// Result of a Smith normal form computation `u * a * v = d`.
///
/// Only `v` (the column transform) is kept; the callers project exponent
/// vectors onto the diagonal coordinates with it.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub v: Vec<Vec<BigInt>>,
}

/// Smith normal form of an integer matrix with `cols` columns.
pub fn smith_normal_form(a: &[Vec<BigInt>], cols: usize) -> SmithForm {
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let rows = m.len();
    let mut v: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();

    let swap_cols = |m: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    };
    // col_j -= q * col_i
    let sub_col =
        |m: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, j: usize, i: usize, q: &BigInt| {
            for row in m.iter_mut() {
                let t = &row[i] * q;
                row[j] -= t;
            }
            for row in v.iter_mut() {
                let t = &row[i] * q;
                row[j] -= t;
            }
        };

    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                if !m[r][c].is_zero() && best.is_none_or(|(br, bc)| m[r][c].abs() < m[br][bc].abs())
                {
                    best = Some((r, c));
                }
            }
        }
        let Some((br, bc)) = best else { break };
        m.swap(t, br);
        swap_cols(&mut m, &mut v, t, bc);

        let mut clean = true;
        for r in t + 1..rows {
            if !m[r][t].is_zero() {
                let q = num_integer::Integer::div_floor(&m[r][t], &m[t][t]);
                for c in t..cols {
                    let s = &m[t][c] * &q;
                    m[r][c] -= s;
                }
                if !m[r][t].is_zero() {
                    clean = false;
                }
            }
        }
        for c in t + 1..cols {
            if !m[t][c].is_zero() {
                let q = num_integer::Integer::div_floor(&m[t][c], &m[t][t]);
                sub_col(&mut m, &mut v, c, t, &q);
                if !m[t][c].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }
        // divisibility condition on the remaining block
        let mut fixed = false;
        'outer: for r in t + 1..rows {
            for c in t + 1..cols {
                if !(&m[r][c] % &m[t][t]).is_zero() {
                    for cc in t..cols {
                        let s = m[r][cc].clone();
                        m[t][cc] += s;
                    }
                    fixed = true;
                    break 'outer;
                }
            }
        }
        if fixed {
            continue;
        }
        if m[t][t].is_negative() {
            for c in t..cols {
                m[t][c] = -&m[t][c];
            }
        }
        t += 1;
    }
    let diagonal = (0..cols)
        .map(|i| {
            if i < rows {
                m[i][i].clone()
            } else {
                BigInt::zero()
            }
        })
        .collect();
    SmithForm { diagonal, v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn solves_overdetermined_consistent_system() {
        let a = vec![vec![q(1), q(1)], vec![q(1), q(-1)], vec![q(2), q(0)]];
        let b = vec![q(3), q(1), q(4)];
        assert_eq!(solve_rational(&a, &b), Some(vec![q(2), q(1)]));
        let bad = vec![q(3), q(1), q(5)];
        assert_eq!(solve_rational(&a, &bad), None);
    }

    #[test]
    fn smith_form_of_small_relation_matrix() {
        let a: Vec<Vec<BigInt>> = vec![
            vec![2.into(), 4.into(), 4.into()],
            vec![(-6).into(), 6.into(), 12.into()],
            vec![10.into(), (-4).into(), (-16).into()],
        ];
        let snf = smith_normal_form(&a, 3);
        let d: Vec<BigInt> = vec![2.into(), 6.into(), 12.into()];
        assert_eq!(snf.diagonal, d);
        // columns of a*v are diagonal up to row operations: check a*v has the same lattice
        // by verifying each diagonal entry divides the next
        for w in snf.diagonal.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
    }
}
