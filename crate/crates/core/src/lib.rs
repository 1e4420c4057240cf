//! Exact representations and primitive central idempotents of finite
//! solvable groups given by long (polycyclic) presentations.
//!
//! The crate is organised bottom-up:
//!
//! * [`presentation`] parses long presentations, builds and certifies the
//!   multiplication table, and answers structural questions (classes,
//!   derived subgroup, abelianization, cyclic quotients).
//! * [`cyclotomic`] is exact arithmetic in `Q(zeta_m)` together with the
//!   numeric embedding used to extract exact `p`-th roots.
//! * [`grpalg`] is sparse group-algebra arithmetic.
//! * [`cyclic_abelian`] holds the constructions for cyclic and abelian
//!   groups over `Q` and cyclotomic fields.
//! * [`solvable`] runs the level-by-level extension/induction of irreducible
//!   representations and the matching lift of primitive central idempotents.
//! * [`verify`] contains independent oracles and audit suites.
//! * [`cli`] is the command-line front end.

pub mod cli;
pub mod cyclic_abelian;
pub mod cyclotomic;
pub mod grpalg;
pub mod linalg;
pub mod matrix;
pub mod presentation;
pub mod rep;
pub mod solvable;
pub mod verify;

pub use cyclotomic::CycNumber;
pub use grpalg::AlgebraElement;
pub use matrix::Matrix;
pub use presentation::{Elem, Group, LongPresentation, Word};
pub use rep::Representation;

/// Divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Prime factors of `n` with multiplicity, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            out.push(p);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n).len() == 1
}

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut primes = prime_factors(n);
    primes.dedup();
    for p in primes {
        result = result / p * (p - 1);
    }
    result
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_number_theory() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(prime_factors(24), vec![2, 2, 2, 3]);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(1), 1);
        assert!(is_prime(7) && !is_prime(9) && !is_prime(1));
    }
}
