//! Fixed-point complex embeddings of `Q(zeta_m)` and exact `p`-th roots.
//!
//! Numerics are only ever used to *propose* candidates; every value returned
//! from [`pth_roots`] has been checked by exact multiplication.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use super::{cyclo_data, CycError, CycNumber};

/// A complex number `(re + i*im) / 2^prec` with big-integer parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigComplex {
    pub re: BigInt,
    pub im: BigInt,
    pub prec: u32,
}

fn round_shift(x: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        return x.clone();
    }
    let half = BigInt::one() << (s - 1);
    (x + half) >> s
}

fn fixed_to_f64(x: &BigInt, prec: u32) -> f64 {
    let bits = x.bits() as i64;
    // keep about 64 significant bits before converting
    let drop = (bits - 64).max(0) as u32;
    let mant = (x >> drop).to_f64().unwrap_or(f64::NAN);
    mant * 2f64.powi(drop as i32 - prec as i32)
}

fn fixed_from_f64(v: f64, prec: u32) -> BigInt {
    if v == 0.0 || !v.is_finite() {
        return BigInt::zero();
    }
    let scaled = BigInt::from_f64(v * 2f64.powi(60)).unwrap_or_default();
    if prec >= 60 {
        scaled << (prec - 60)
    } else {
        scaled >> (60 - prec)
    }
}

impl BigComplex {
    pub fn zero(prec: u32) -> Self {
        BigComplex {
            re: BigInt::zero(),
            im: BigInt::zero(),
            prec,
        }
    }

    pub fn one(prec: u32) -> Self {
        BigComplex {
            re: BigInt::one() << prec,
            im: BigInt::zero(),
            prec,
        }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        BigComplex {
            re: fixed_from_f64(re, prec),
            im: fixed_from_f64(im, prec),
            prec,
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (
            fixed_to_f64(&self.re, self.prec),
            fixed_to_f64(&self.im, self.prec),
        )
    }

    pub fn abs_f64(&self) -> f64 {
        let (r, i) = self.to_f64();
        r.hypot(i)
    }

    pub fn add(&self, o: &Self) -> Self {
        BigComplex {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
            prec: self.prec,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        BigComplex {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
            prec: self.prec,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        BigComplex {
            re: round_shift(&re, self.prec),
            im: round_shift(&im, self.prec),
            prec: self.prec,
        }
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            re: self.re.clone(),
            im: -&self.im,
            prec: self.prec,
        }
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        BigComplex {
            re: &self.re * k,
            im: &self.im * k,
            prec: self.prec,
        }
    }

    pub fn div_int(&self, k: &BigInt) -> Self {
        BigComplex {
            re: self.re.div_floor(k),
            im: self.im.div_floor(k),
            prec: self.prec,
        }
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        let n2 = &o.re * &o.re + &o.im * &o.im;
        if n2.is_zero() {
            return None;
        }
        let re = (&self.re * &o.re + &self.im * &o.im) << self.prec;
        let im = (&self.im * &o.re - &self.re * &o.im) << self.prec;
        Some(BigComplex {
            re: re.div_floor(&n2),
            im: im.div_floor(&n2),
            prec: self.prec,
        })
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = BigComplex::one(self.prec);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Re-expresses the value with `prec` fractional bits (rounding).
    pub fn with_prec(&self, prec: u32) -> Self {
        if prec >= self.prec {
            let s = prec - self.prec;
            BigComplex {
                re: &self.re << s,
                im: &self.im << s,
                prec,
            }
        } else {
            let s = self.prec - prec;
            BigComplex {
                re: round_shift(&self.re, s),
                im: round_shift(&self.im, s),
                prec,
            }
        }
    }
}

/// `pi * 2^prec` via Machin's formula.
fn pi_fixed(prec: u32) -> BigInt {
    let guard = 16;
    let w = prec + guard;
    let arctan_inv = |x: u64| -> BigInt {
        let x = BigInt::from(x);
        let x2 = &x * &x;
        let mut power = (BigInt::one() << w) / &x;
        let mut sum = BigInt::zero();
        let mut k = 0u64;
        while !power.is_zero() {
            let term = &power / BigInt::from(2 * k + 1);
            if k.is_multiple_of(2) {
                sum += term;
            } else {
                sum -= term;
            }
            power = &power / &x2;
            k += 1;
        }
        sum
    };
    let pi = arctan_inv(5) * 16 - arctan_inv(239) * 4;
    round_shift(&pi, guard)
}

/// `exp(i * theta)` for a fixed-point `theta` with `|theta| <= 2*pi`.
fn exp_i(theta: &BigInt, prec: u32) -> BigComplex {
    let mut term = BigComplex::one(prec);
    let mut sum = term.clone();
    let step = BigComplex {
        re: BigInt::zero(),
        im: theta.clone(),
        prec,
    };
    let mut n = 1u64;
    loop {
        term = term.mul(&step).div_int(&BigInt::from(n));
        if term.re.is_zero() && term.im.is_zero() {
            break;
        }
        sum = sum.add(&term);
        n += 1;
    }
    sum
}

/// `zeta_m^j` for `j = 0..m` at `prec` bits.
pub(crate) fn unit_root_table(m: u32, prec: u32) -> Vec<BigComplex> {
    let guard = 24 + 32 - (m.max(1)).leading_zeros();
    let w = prec + guard;
    let theta = (pi_fixed(w) * 2) / BigInt::from(m);
    let zeta = exp_i(&theta, w);
    let mut out = Vec::with_capacity(m as usize);
    let mut acc = BigComplex::one(w);
    for _ in 0..m {
        out.push(acc.with_prec(prec));
        acc = acc.mul(&zeta);
    }
    out
}

fn units(m: u32) -> Vec<u32> {
    if m <= 1 {
        return vec![1];
    }
    (1..m).filter(|&k| num_integer::gcd(k, m) == 1).collect()
}

fn embed_with_table(a: &CycNumber, k: u32, table: &[BigComplex], prec: u32) -> BigComplex {
    let m = a.conductor() as u64;
    let mut acc = BigComplex::zero(prec);
    for (j, c) in a.numerators().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let idx = ((j as u64) * (k as u64) % m) as usize;
        acc = acc.add(&table[idx].scale_int(c));
    }
    // divide by the common denominator, rounding
    let den = a.denominator();
    let half = den / 2;
    let div = |x: &BigInt| -> BigInt {
        if x.sign() == Sign::Minus {
            {
                let t: BigInt = &half - x;
                -(t.div_floor(den))
            }
        } else {
            let t: BigInt = x + &half;
            t.div_floor(den)
        }
    };
    BigComplex {
        re: div(&acc.re),
        im: div(&acc.im),
        prec,
    }
}

fn working_guard(a: &CycNumber) -> u32 {
    let coeff_bits = a.numerators().iter().map(|c| c.bits()).max().unwrap_or(0) as u32;
    40 + coeff_bits + (32 - a.conductor().leading_zeros()) + 8
}

/// The embedding `zeta_m -> exp(2 pi i k / m)` of `a`, with absolute error
/// below `2^(2 - precision)`.
pub fn embed_conjugate(a: &CycNumber, k: u32, precision: u32) -> BigComplex {
    let w = precision + working_guard(a);
    let table = unit_root_table(a.conductor(), w);
    embed_with_table(a, k, &table, w).with_prec(precision)
}

/// The principal embedding `zeta_m -> exp(2 pi i / m)`.
pub fn embed_complex(a: &CycNumber, precision: u32) -> BigComplex {
    embed_conjugate(a, 1, precision)
}

/// All embeddings, one per unit `k` of `Z/m` in ascending order.
pub fn embed_all(a: &CycNumber, precision: u32) -> Vec<BigComplex> {
    let w = precision + working_guard(a);
    let table = unit_root_table(a.conductor(), w);
    units(a.conductor())
        .into_iter()
        .map(|k| embed_with_table(a, k, &table, w).with_prec(precision))
        .collect()
}

fn mobius(mut n: u64) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Ramanujan's sum `c_m(n) = sum over units k of zeta_m^(k n)`.
fn ramanujan_sum(m: u64, n: i64) -> i64 {
    let g = num_integer::gcd(n.unsigned_abs(), m);
    crate::divisors(g)
        .into_iter()
        .map(|d| mobius(m / d) * d as i64)
        .sum()
}

/// Recovers an element of `Q(zeta_m)` from approximations of *all* of its
/// embeddings (one per unit `k` of `Z/m`, ascending).
///
/// The normal equations of the least-squares problem have the integer Gram
/// matrix `c_m(i - j)`; the right-hand sides are traces, which are rounded to
/// the nearest multiple of `1 / denominator_bound` before an exact solve.
/// The candidate is re-embedded and compared against the input.
pub fn reconstruct_exact(
    embeddings: &[BigComplex],
    m: u32,
    denominator_bound: u64,
) -> Result<CycNumber, CycError> {
    let ks = units(m);
    if embeddings.len() != ks.len() {
        return Err(CycError::ReconstructionFailed(format!(
            "expected {} embeddings for conductor {m}, got {}",
            ks.len(),
            embeddings.len()
        )));
    }
    let prec = embeddings[0].prec;
    let phi = cyclo_data(m).phi;
    let table = unit_root_table(m, prec);
    let bound = BigInt::from(denominator_bound.max(1));
    let one = BigInt::one() << prec;
    let quarter = &one >> 2;

    let mut traces = Vec::with_capacity(phi);
    for j in 0..phi {
        let mut t = BigComplex::zero(prec);
        for (z, &k) in embeddings.iter().zip(&ks) {
            let idx = ((k as u64 * j as u64) % m as u64) as usize;
            t = t.add(&z.with_prec(prec).mul(&table[idx].conj()));
        }
        let scaled = &t.re * &bound;
        let r = round_shift(&scaled, prec);
        let dev = (&scaled - (&r << prec)).abs();
        if dev > quarter || (&t.im * &bound).abs() > quarter {
            return Err(CycError::ReconstructionFailed(format!(
                "trace {j} is not near a multiple of 1/{denominator_bound}"
            )));
        }
        traces.push(BigRational::new(r, bound.clone()));
    }

    let gram: Vec<Vec<BigRational>> = (0..phi)
        .map(|j| {
            (0..phi)
                .map(|i| {
                    BigRational::from_integer(ramanujan_sum(m as u64, i as i64 - j as i64).into())
                })
                .collect()
        })
        .collect();
    let coeffs = crate::linalg::solve_rational(&gram, &traces)
        .ok_or_else(|| CycError::ReconstructionFailed("singular trace form".into()))?;
    let candidate = CycNumber::from_coeffs(&coeffs, m);

    let check_prec = prec.min(256);
    let tol_bits = (check_prec / 2).min(40) as i32;
    for (z, e) in embeddings.iter().zip(embed_all(&candidate, check_prec)) {
        let z = z.with_prec(check_prec);
        let diff = z.sub(&e).abs_f64();
        let scale = 1.0 + z.abs_f64();
        if !(diff <= scale * 2f64.powi(-tol_bits)) {
            return Err(CycError::ReconstructionFailed(format!(
                "residual {diff:.3e} too large"
            )));
        }
    }
    Ok(candidate)
}

/// Tuning for [`pth_root_with`].
#[derive(Clone, Debug)]
pub struct PthRootOptions {
    /// Which of the `p` roots (in canonical order) to return.
    pub branch: usize,
    pub start_precision: u32,
    pub max_precision: u32,
    /// Rounding grid for traces of the integral-scaled root.
    pub denominator_bound: u64,
    /// Upper limit on branch combinations tried per precision.
    pub max_combinations: u64,
}

impl Default for PthRootOptions {
    fn default() -> Self {
        PthRootOptions {
            branch: 0,
            start_precision: 128,
            max_precision: 4096,
            denominator_bound: 1,
            max_combinations: 1 << 16,
        }
    }
}

fn principal_root(z: &BigComplex, p: u64) -> Option<BigComplex> {
    let (re, im) = z.to_f64();
    let r = re.hypot(im);
    if !(r > 0.0) || !r.is_finite() {
        return None;
    }
    let mag = r.powf(1.0 / p as f64);
    let arg = im.atan2(re) / p as f64;
    let prec = z.prec;
    let mut x = BigComplex::from_f64(mag * arg.cos(), mag * arg.sin(), prec);
    let pb = BigInt::from(p);
    let pm1 = BigInt::from(p - 1);
    let tol = BigInt::one() << 16u32.min(prec / 4);
    for _ in 0..200 {
        let xp = x.pow(p - 1);
        let q = z.div(&xp)?;
        let next = x.scale_int(&pm1).add(&q).div_int(&pb);
        let d = next.sub(&x);
        x = next;
        if d.re.abs() <= tol && d.im.abs() <= tol {
            return Some(x);
        }
    }
    None
}

/// All `p` roots of `lambda` in `Q(zeta_lcm(m, p))`, sorted canonically.
///
/// The radicand is first scaled to an algebraic integer, so its root has
/// integer power-basis coefficients. The principal embedding is fixed to the
/// principal numeric root; the remaining complex-conjugate pairs of
/// embeddings range over the `p` rotations. Each combination is
/// reconstructed and checked exactly.
pub fn pth_roots(
    lambda: &CycNumber,
    p: u64,
    opts: &PthRootOptions,
) -> Result<Vec<CycNumber>, CycError> {
    if lambda.is_zero() {
        return Err(CycError::NoRootFound("radicand is zero".into()));
    }
    if !crate::is_prime(p) {
        return Err(CycError::NoRootFound(format!("{p} is not prime")));
    }
    let big_m = crate::lcm(lambda.conductor() as u64, p) as u32;
    let lambda = lambda.coerce(big_m)?;
    let den = lambda.denominator().clone();
    let scaled = CycNumber::from_int_coeffs(
        lambda
            .numerators()
            .iter()
            .map(|c| c * num_traits::pow(den.clone(), p as usize - 1))
            .collect(),
        BigInt::one(),
        big_m,
    );

    let ks = units(big_m);
    let reps: Vec<usize> = (0..ks.len())
        .filter(|&i| ks[i] <= big_m - ks[i] || big_m <= 2)
        .collect();
    let partner: Vec<usize> = ks
        .iter()
        .map(|&k| {
            let c = (big_m - k) % big_m.max(1);
            ks.iter().position(|&x| x == c).unwrap_or(0)
        })
        .collect();
    let combos = (p as u128).saturating_pow(reps.len().saturating_sub(1) as u32);
    if combos > opts.max_combinations as u128 {
        return Err(CycError::NoRootFound(format!(
            "{combos} branch combinations exceed the limit"
        )));
    }

    let mut prec = opts.start_precision.max(64);
    while prec <= opts.max_precision {
        let w = prec + working_guard(&scaled);
        let table = unit_root_table(big_m, w);
        let zeta_p = table[(big_m as u64 / p) as usize].with_prec(prec);
        let rotations: Vec<BigComplex> = (0..p).map(|j| zeta_p.pow(j)).collect();
        let mut candidates: Vec<Vec<BigComplex>> = Vec::with_capacity(reps.len());
        let mut ok = true;
        for &ri in &reps {
            let z = embed_with_table(&scaled, ks[ri], &table, w).with_prec(prec);
            match principal_root(&z, p) {
                Some(r) => candidates.push(rotations.iter().map(|rot| r.mul(rot)).collect()),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let mut choice = vec![0usize; reps.len()];
            loop {
                let mut emb = vec![BigComplex::zero(prec); ks.len()];
                for (slot, &ri) in reps.iter().enumerate() {
                    let v = candidates[slot][choice[slot]].clone();
                    emb[partner[ri]] = v.conj();
                    emb[ri] = v;
                }
                if let Ok(c) = reconstruct_exact(&emb, big_m, opts.denominator_bound) {
                    if c.pow(p) == scaled {
                        let mu = c.scale_rational(&BigRational::new(BigInt::one(), den.clone()));
                        return Ok(all_rotations(&mu, p, big_m));
                    }
                }
                // odometer over all but the first representative
                let mut pos = 1;
                while pos < choice.len() {
                    choice[pos] += 1;
                    if choice[pos] < p as usize {
                        break;
                    }
                    choice[pos] = 0;
                    pos += 1;
                }
                if pos >= choice.len() {
                    break;
                }
            }
        }
        log::debug!("pth_root: no root at {prec} bits, doubling");
        prec *= 2;
    }
    Err(CycError::NoRootFound(format!(
        "no {p}-th root of {lambda} in Q(zeta_{big_m})"
    )))
}

fn all_rotations(mu: &CycNumber, p: u64, m: u32) -> Vec<CycNumber> {
    let zeta = CycNumber::root_of_unity(m, (m as u64 / p) as i64);
    let mut out = Vec::with_capacity(p as usize);
    let mut cur = mu.clone();
    for _ in 0..p {
        out.push(cur.clone());
        cur = cur.mul_ref(&zeta);
    }
    out.sort_by(|a, b| a.canonical_cmp(b));
    out
}

/// A `p`-th root of `lambda` (the canonical first one).
pub fn pth_root(lambda: &CycNumber, p: u64) -> Result<CycNumber, CycError> {
    pth_root_with(lambda, p, &PthRootOptions::default())
}

/// A `p`-th root of `lambda`, selecting the branch given in `opts`.
pub fn pth_root_with(
    lambda: &CycNumber,
    p: u64,
    opts: &PthRootOptions,
) -> Result<CycNumber, CycError> {
    let mut roots = pth_roots(lambda, p, opts)?;
    let i = opts.branch % roots.len();
    Ok(roots.swap_remove(i))
}
