//! Certified multiplication tables built level by level along the series.

use std::sync::Arc;

use log::debug;

use super::{LongPresentation, PresentationError, Word};

/// A group element, identified by its normal-form index.
///
/// The index of `x_1^a_1 ... x_n^a_n` is the mixed-radix number with digits
/// `a_1 ... a_n` (`a_1` most significant), so index order is the
/// lexicographic order of exponent vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub u32);

impl Elem {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug)]
pub struct ValidationOptions {
    /// Largest group order accepted.
    pub size_cap: usize,
    /// Associativity is checked exhaustively when `|G|^3` is at most this
    /// many triples, otherwise on this many sampled triples.
    pub assoc_cap: u64,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            size_cap: 5000,
            assoc_cap: 1 << 20,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub group: Arc<Group>,
    pub order: usize,
    pub exponent: u64,
    pub associativity_triples: u64,
}

/// A finite group given by a consistent long presentation, with its full
/// multiplication table.
#[derive(Debug)]
pub struct Group {
    lp: LongPresentation,
    primes: Vec<usize>,
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    elem_order: Vec<u32>,
    /// `level_stride[k] = prod_{l >= k} p_l`; `G_k` consists of the multiples.
    level_stride: Vec<usize>,
    exponent: u64,
}

struct Level<'a> {
    order: usize,
    table: &'a [u32],
    gens: &'a [u32],
}

impl Level<'_> {
    fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    fn inv(&self, a: u32) -> u32 {
        (0..self.order as u32)
            .find(|&b| self.mul(a, b) == 0)
            .expect("latin square")
    }

    fn pow(&self, a: u32, e: i64) -> u32 {
        let base = if e < 0 { self.inv(a) } else { a };
        let mut r = 0;
        for _ in 0..e.unsigned_abs() {
            r = self.mul(r, base);
        }
        r
    }

    fn eval(&self, w: &Word) -> u32 {
        w.0.iter()
            .fold(0, |acc, &(g, e)| self.mul(acc, self.pow(self.gens[g], e)))
    }
}

/// Builds and certifies the group of a long presentation.
///
/// The table is built one generator at a time: `G_k` is a cyclic extension of
/// `G_(k-1)` by `x_k`, which exists exactly when conjugation by `x_k` defines
/// an automorphism `phi` of `G_(k-1)` fixing `w_k` with `phi^p = inn(w_k)`.
/// Those conditions are checked at every level, then all relations,
/// the Latin-square property and associativity are checked on the result.
pub fn validate(
    lp: &LongPresentation,
    opts: &ValidationOptions,
) -> Result<ValidationReport, PresentationError> {
    let nominal = lp.nominal_order();
    if nominal > opts.size_cap as u128 {
        return Err(PresentationError::SizeExceeded {
            order: nominal,
            cap: opts.size_cap,
        });
    }
    let n = lp.num_generators();
    let primes: Vec<usize> = lp.generators.iter().map(|g| g.prime as usize).collect();
    let inconsistent = |msg: String| PresentationError::InconsistentPresentation(msg);

    let mut table: Vec<u32> = vec![0];
    let mut ord = 1usize;
    for k in 0..n {
        let p = primes[k];
        let sym = &lp.generators[k].symbol;
        // local index of x_j in G_k
        let gens: Vec<u32> = (0..k)
            .map(|j| primes[j + 1..k].iter().product::<usize>() as u32)
            .collect();
        let level = Level {
            order: ord,
            table: &table,
            gens: &gens,
        };
        let w = level.eval(&lp.power_relations[k]);
        let phi_gen: Vec<u32> = (0..k)
            .map(|j| level.eval(&lp.conj_relations[k][j]))
            .collect();

        // extend phi multiplicatively along normal forms
        let mut phi = vec![0u32; ord];
        for (g, slot) in phi.iter_mut().enumerate() {
            let mut rem = g;
            let mut digits = vec![0usize; k];
            for j in (0..k).rev() {
                digits[j] = rem % primes[j];
                rem /= primes[j];
            }
            *slot = digits.iter().enumerate().fold(0, |acc, (j, &a)| {
                level.mul(acc, level.pow(phi_gen[j], a as i64))
            });
        }
        for a in 0..ord as u32 {
            for b in 0..ord as u32 {
                if phi[level.mul(a, b) as usize] != level.mul(phi[a as usize], phi[b as usize]) {
                    return Err(inconsistent(format!(
                        "conjugation by `{sym}` does not define a homomorphism of the previous level"
                    )));
                }
            }
        }
        let mut psi = vec![u32::MAX; ord];
        for (g, &im) in phi.iter().enumerate() {
            if psi[im as usize] != u32::MAX {
                return Err(inconsistent(format!(
                    "conjugation by `{sym}` is not bijective"
                )));
            }
            psi[im as usize] = g as u32;
        }
        if phi[w as usize] != w {
            return Err(inconsistent(format!(
                "conjugation by `{sym}` does not fix `{sym}^{p}`"
            )));
        }
        let w_inv = level.inv(w);
        for g in 0..ord as u32 {
            let mut img = g;
            for _ in 0..p {
                img = phi[img as usize];
            }
            if img != level.mul(level.mul(w_inv, g), w) {
                return Err(inconsistent(format!(
                    "the {p}-th power of conjugation by `{sym}` is not conjugation by `{sym}^{p}`"
                )));
            }
        }

        // psi^a for a in 0..p
        let mut psi_pows: Vec<Vec<u32>> = vec![(0..ord as u32).collect()];
        for a in 1..p {
            let prev = &psi_pows[a - 1];
            psi_pows.push(prev.iter().map(|&g| psi[g as usize]).collect());
        }
        let new_ord = ord * p;
        let mut new_table = vec![0u32; new_ord * new_ord];
        for a in 0..new_ord {
            let (pa, alpha) = (a / p, a % p);
            for b in 0..new_ord {
                let (pb, beta) = (b / p, b % p);
                let mut q = level.mul(pa as u32, psi_pows[alpha][pb]);
                let mut s = alpha + beta;
                if s >= p {
                    q = level.mul(q, w);
                    s -= p;
                }
                new_table[a * new_ord + b] = q * p as u32 + s as u32;
            }
        }
        debug!("level {} built, order {}", k + 1, new_ord);
        table = new_table;
        ord = new_ord;
    }

    let group = Group::from_table(lp.clone(), primes, table);
    group.check_relations()?;
    group.check_latin()?;
    let triples = group.check_associativity(opts.assoc_cap)?;
    let order = group.order;
    let exponent = group.exponent;
    Ok(ValidationReport {
        group: Arc::new(group),
        order,
        exponent,
        associativity_triples: triples,
    })
}

impl Group {
    /// Validates with default options.
    pub fn from_presentation(lp: &LongPresentation) -> Result<Arc<Group>, PresentationError> {
        validate(lp, &ValidationOptions::default()).map(|r| r.group)
    }

    /// Parses and validates presentation text with default options.
    pub fn parse(text: &str) -> Result<Arc<Group>, PresentationError> {
        Self::from_presentation(&super::parse_presentation(text)?)
    }

    fn from_table(lp: LongPresentation, primes: Vec<usize>, table: Vec<u32>) -> Group {
        let order = primes.iter().product::<usize>();
        let mut inverse = vec![0u32; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inverse[a] = b as u32;
                    break;
                }
            }
        }
        let mut elem_order = vec![0u32; order];
        for (a, slot) in elem_order.iter_mut().enumerate() {
            let mut x = a;
            let mut k = 1;
            while x != 0 {
                x = table[x * order + a] as usize;
                k += 1;
            }
            *slot = k;
        }
        let exponent = elem_order
            .iter()
            .fold(1u64, |acc, &o| crate::lcm(acc, o as u64));
        let n = primes.len();
        let level_stride = (0..=n).map(|k| primes[k..].iter().product()).collect();
        Group {
            lp,
            primes,
            order,
            table,
            inverse,
            elem_order,
            level_stride,
            exponent,
        }
    }

    fn check_relations(&self) -> Result<(), PresentationError> {
        let n = self.num_generators();
        for i in 0..n {
            let x = self.generator(i);
            if self.pow(x, self.primes[i] as i64) != self.eval_word(&self.lp.power_relations[i]) {
                return Err(PresentationError::InconsistentPresentation(format!(
                    "power relation of `{}` fails in the table",
                    self.lp.generators[i].symbol
                )));
            }
            for j in 0..i {
                if self.conj(self.generator(j), x) != self.eval_word(&self.lp.conj_relations[i][j])
                {
                    return Err(PresentationError::InconsistentPresentation(format!(
                        "conjugation relation of `{}` on `{}` fails in the table",
                        self.lp.generators[i].symbol, self.lp.generators[j].symbol
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_latin(&self) -> Result<(), PresentationError> {
        let n = self.order;
        let mut seen = vec![0usize; n];
        for a in 0..n {
            for b in 0..n {
                let v = self.table[a * n + b] as usize;
                if seen[v] == 2 * a + 1 {
                    return Err(PresentationError::InconsistentPresentation(
                        "table is not a Latin square".into(),
                    ));
                }
                seen[v] = 2 * a + 1;
            }
        }
        for b in 0..n {
            for a in 0..n {
                let v = self.table[a * n + b] as usize;
                if seen[v] == 2 * b + 2 {
                    return Err(PresentationError::InconsistentPresentation(
                        "table is not a Latin square".into(),
                    ));
                }
                seen[v] = 2 * b + 2;
            }
        }
        Ok(())
    }

    fn check_associativity(&self, cap: u64) -> Result<u64, PresentationError> {
        let n = self.order as u64;
        let bad = || {
            PresentationError::InconsistentPresentation("multiplication is not associative".into())
        };
        let check = |a: u32, b: u32, c: u32| {
            let (a, b, c) = (Elem(a), Elem(b), Elem(c));
            self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
        };
        if n.saturating_mul(n).saturating_mul(n) <= cap {
            for a in 0..n as u32 {
                for b in 0..n as u32 {
                    for c in 0..n as u32 {
                        if !check(a, b, c) {
                            return Err(bad());
                        }
                    }
                }
            }
            return Ok(n * n * n);
        }
        // deterministic sample (splitmix64)
        let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
        let mut next = || {
            state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            ((z ^ (z >> 31)) % n) as u32
        };
        for _ in 0..cap {
            let (a, b, c) = (next(), next(), next());
            if !check(a, b, c) {
                return Err(bad());
            }
        }
        Ok(cap)
    }

    pub fn presentation(&self) -> &LongPresentation {
        &self.lp
    }

    pub fn name(&self) -> &str {
        &self.lp.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn num_generators(&self) -> usize {
        self.primes.len()
    }

    pub fn prime(&self, i: usize) -> u64 {
        self.primes[i] as u64
    }

    pub fn primes(&self) -> Vec<u64> {
        self.primes.iter().map(|&p| p as u64).collect()
    }

    pub fn symbol(&self, i: usize) -> &str {
        &self.lp.generators[i].symbol
    }

    pub fn identity(&self) -> Elem {
        Elem(0)
    }

    /// The generator `x_(i+1)` (0-based `i`).
    pub fn generator(&self, i: usize) -> Elem {
        Elem(self.level_stride[i + 1] as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order as u32).map(Elem)
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.table[a.index() * self.order + b.index()])
    }

    pub fn inv(&self, a: Elem) -> Elem {
        Elem(self.inverse[a.index()])
    }

    pub fn pow(&self, a: Elem, e: i64) -> Elem {
        let o = self.elem_order[a.index()] as i64;
        let e = e.rem_euclid(o);
        let mut r = Elem(0);
        for _ in 0..e {
            r = self.mul(r, a);
        }
        r
    }

    pub fn elem_order(&self, a: Elem) -> u64 {
        self.elem_order[a.index()] as u64
    }

    /// `g^-1 a g`.
    pub fn conj(&self, a: Elem, g: Elem) -> Elem {
        self.mul(self.mul(self.inv(g), a), g)
    }

    pub fn exponents(&self, a: Elem) -> Vec<u32> {
        let mut rem = a.index();
        let mut out = vec![0u32; self.primes.len()];
        for j in (0..self.primes.len()).rev() {
            out[j] = (rem % self.primes[j]) as u32;
            rem /= self.primes[j];
        }
        out
    }

    /// The element with normal form exponents `exps` (reduced mod `p_i`).
    pub fn from_exponents(&self, exps: &[u32]) -> Elem {
        let idx = exps
            .iter()
            .zip(&self.primes)
            .fold(0usize, |acc, (&a, &p)| acc * p + a as usize % p);
        Elem(idx as u32)
    }

    pub fn eval_word(&self, w: &Word) -> Elem {
        w.0.iter().fold(Elem(0), |acc, &(g, e)| {
            self.mul(acc, self.pow(self.generator(g), e))
        })
    }

    /// Parses a word over the generators and returns its normal form element.
    pub fn normalize(&self, text: &str) -> Result<Elem, PresentationError> {
        Ok(self.eval_word(&self.lp.parse_word(text)?))
    }

    /// The normal form word of `a`.
    pub fn normal_form(&self, a: Elem) -> Word {
        Word(
            self.exponents(a)
                .into_iter()
                .enumerate()
                .filter(|&(_, e)| e != 0)
                .map(|(i, e)| (i, e as i64))
                .collect(),
        )
    }

    pub fn format_elem(&self, a: Elem) -> String {
        self.lp.format_word(&self.normal_form(a))
    }

    /// Order of `G_k = <x_1, ..., x_k>`.
    pub fn level_order(&self, k: usize) -> usize {
        self.order / self.level_stride[k]
    }

    pub fn in_level(&self, a: Elem, k: usize) -> bool {
        a.index().is_multiple_of(self.level_stride[k])
    }

    /// Elements of `G_k` in index order.
    pub fn level_elements(&self, k: usize) -> Vec<Elem> {
        (0..self.level_order(k))
            .map(|i| Elem((i * self.level_stride[k]) as u32))
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.num_generators();
        (0..n).all(|i| {
            (0..i).all(|j| {
                let (a, b) = (self.generator(i), self.generator(j));
                self.mul(a, b) == self.mul(b, a)
            })
        })
    }

    pub fn is_cyclic(&self) -> bool {
        self.exponent == self.order as u64
    }

    /// Raw multiplication table, row-major.
    pub fn table(&self) -> &[u32] {
        &self.table
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    const SL23: &str = "group SL2(3)\ngen x prime 2\ngen y prime 2\ngen z prime 2\ngen t prime 3\n\
pow x = 1\npow y = x\npow z = x\npow t = 1\nconj z y = x y\nconj t y = z\nconj t z = y z\n";

    #[test]
    fn sl23_table() {
        let g = Group::parse(SL23).unwrap();
        assert_eq!(g.order(), 24);
        assert_eq!(g.exponent(), 12);
        let (x, y, z, t) = (
            g.generator(0),
            g.generator(1),
            g.generator(2),
            g.generator(3),
        );
        assert_eq!(g.elem_order(x), 2);
        assert_eq!(g.elem_order(y), 4);
        assert_eq!(g.elem_order(t), 3);
        assert_eq!(g.conj(z, t), g.mul(y, z));
        assert_eq!(g.conj(y, z), g.mul(x, y));
        assert_eq!(g.normalize("t y").unwrap(), g.mul(t, y));
        assert_eq!(g.format_elem(g.normalize("t y").unwrap()), "y z t");
        assert_eq!(g.level_order(3), 8);
        assert!(!g.is_abelian());
    }

    #[test]
    fn inconsistent_presentations_are_rejected() {
        // conjugation by z would send y to x, which is not injective
        let text = "gen x prime 2\ngen y prime 2\ngen z prime 2\npow x = 1\npow y = x\npow z = x\nconj z y = x\n";
        let lp = parse_presentation(text).unwrap();
        assert!(matches!(
            Group::from_presentation(&lp),
            Err(PresentationError::InconsistentPresentation(_))
        ));
        // conjugation by b does not fix b^2 = a
        let text = "gen a prime 3\ngen b prime 2\npow a = 1\npow b = a\nconj b a = a^2\n";
        assert!(matches!(
            Group::parse(text),
            Err(PresentationError::InconsistentPresentation(_))
        ));
        // an order 3 automorphism cannot come from an element of order 2
        let text = "gen x prime 2\ngen y prime 2\ngen t prime 2\npow x = 1\npow y = 1\npow t = 1\nconj t x = y\nconj t y = x y\n";
        assert!(matches!(
            Group::parse(text),
            Err(PresentationError::InconsistentPresentation(_))
        ));
    }

    #[test]
    fn size_cap() {
        let lp = LongPresentation::cyclic(64);
        let opts = ValidationOptions {
            size_cap: 32,
            ..Default::default()
        };
        assert!(matches!(
            validate(&lp, &opts),
            Err(PresentationError::SizeExceeded { order: 64, cap: 32 })
        ));
    }

    #[test]
    fn cyclic_tower_is_cyclic() {
        let g = Group::from_presentation(&LongPresentation::cyclic(12)).unwrap();
        assert!(g.is_cyclic());
        assert_eq!(g.elem_order(g.generator(2)), 12);
    }
}
