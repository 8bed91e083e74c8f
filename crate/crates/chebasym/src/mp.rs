//! Multiprecision plumbing: big-integer export to log scale, exact Bernoulli
//! numbers, complex arithmetic over `astro_float::BigFloat`, and a real
//! log-gamma used for the Airy normalisation constants.

use alloc::vec::Vec;

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use spin::RwLock;

use crate::numerics::LogComplex;

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

/// Splits a big integer into `(m, e)` with `|x| ~ m * 2^e` and `m` in [2^63, 2^64).
fn uint_parts(x: &BigUint) -> (f64, i64) {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap_or(0) as f64, 0);
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    (top.to_u64().unwrap_or(0) as f64, shift as i64)
}

/// `(ln|x|, sign)` of a big integer; zero maps to `-inf`.
pub fn bigint_ln_abs(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = uint_parts(x.magnitude());
    m.ln() + e as f64 * core::f64::consts::LN_2
}

/// Converts a Gaussian rational `(re + i im) / den` to log scale, rounding once.
pub fn gaussian_to_log(re: &BigInt, im: &BigInt, den: &BigInt) -> LogComplex {
    if re.is_zero() && im.is_zero() {
        return LogComplex::ZERO;
    }
    let part = |x: &BigInt| -> (f64, i64) {
        if x.is_zero() {
            return (0.0, i64::MIN);
        }
        let (m, e) = uint_parts(x.magnitude());
        (if x.is_negative() { -m } else { m }, e)
    };
    let (mr, er) = part(re);
    let (mi, ei) = part(im);
    let top = er.max(ei);
    let scale = |m: f64, e: i64| if e == i64::MIN { 0.0 } else { m * 2f64.powi((e - top).max(-1100) as i32) };
    let (xr, xi) = (scale(mr, er), scale(mi, ei));
    // exponents are combined as integers so the large parts cancel exactly
    let (md, ed) = uint_parts(den.magnitude());
    let log_mod = (xr.hypot(xi) / md).ln() + (top - ed) as f64 * core::f64::consts::LN_2;
    let mut phase = xi.atan2(xr);
    if den.is_negative() {
        phase += core::f64::consts::PI;
    }
    LogComplex::new(log_mod, phase)
}

/// Log-scale value of an exact complex rational.
pub fn ratio_to_log(z: &Complex<BigRational>) -> LogComplex {
    let den = num_integer::Integer::lcm(z.re.denom(), z.im.denom());
    let re = z.re.numer() * (&den / z.re.denom());
    let im = z.im.numer() * (&den / z.im.denom());
    gaussian_to_log(&re, &im, &den)
}

static BERNOULLI: RwLock<Vec<BigRational>> = RwLock::new(Vec::new());

/// Bernoulli numbers `B_0 ..= B_m` (convention `B_1 = -1/2`), computed exactly
/// and cached.
pub fn bernoulli(m: usize) -> Vec<BigRational> {
    {
        let cache = BERNOULLI.read();
        if cache.len() > m {
            return cache[..=m].to_vec();
        }
    }
    let mut cache = BERNOULLI.write();
    if cache.is_empty() {
        cache.push(BigRational::one());
    }
    while cache.len() <= m {
        // B_k = -1/(k+1) * sum_{j<k} C(k+1, j) B_j
        let k = cache.len();
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (j, bj) in cache.iter().enumerate() {
            if !bj.is_zero() {
                acc += bj * BigRational::from_integer(binom.clone());
            }
            binom = binom * BigInt::from(k + 1 - j) / BigInt::from(j + 1);
        }
        let next = -acc / BigRational::from_integer(BigInt::from(k + 1));
        cache.push(next);
    }
    cache[..=m].to_vec()
}

/// Nearest binary64 value of a big rational.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let (mn, en) = uint_parts(r.numer().magnitude());
    let (md, ed) = uint_parts(r.denom().magnitude());
    let v = mn / md * 2f64.powi((en - ed) as i32);
    if r.is_negative() {
        -v
    } else {
        v
    }
}

pub(crate) fn bf_u64(v: u64, p: usize) -> BigFloat {
    BigFloat::from_word(v, p.max(64))
}

pub(crate) fn bf_from_biguint(x: &BigUint, p: usize) -> BigFloat {
    let radix = BigFloat::from_f64(18446744073709551616.0, 128);
    let mut acc = BigFloat::from_f64(0.0, p);
    for d in x.to_u64_digits().iter().rev() {
        acc = acc.mul(&radix, p, RM).add(&bf_u64(*d, 64), p, RM);
    }
    acc
}

pub(crate) fn bf_from_ratio(r: &BigRational, p: usize) -> BigFloat {
    let n = bf_from_biguint(r.numer().magnitude(), p);
    let d = bf_from_biguint(r.denom().magnitude(), p);
    let q = n.div(&d, p, RM);
    if r.is_negative() {
        q.neg()
    } else {
        q
    }
}

/// `(m, e)` with value `m * 2^e`, `m` a binary64 in [0.5, 1); `None` for zero
/// or non-finite values.
pub(crate) fn bf_parts(x: &BigFloat) -> Option<(f64, i64)> {
    if x.is_zero() {
        return None;
    }
    let (words, _, sign, e, _) = x.as_raw_parts()?;
    let top = *words.last()?;
    let m = (top as f64) / 18446744073709551616.0;
    Some((if sign == Sign::Neg { -m } else { m }, e as i64))
}

pub(crate) fn bf_to_f64(x: &BigFloat) -> f64 {
    match bf_parts(x) {
        None => 0.0,
        Some((m, e)) => m * 2f64.powi(e.clamp(-1100, 1100) as i32),
    }
}

/// Complex number over `BigFloat`.
#[derive(Debug, Clone)]
pub struct MpComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl MpComplex {
    pub fn from_f64(re: f64, im: f64, p: usize) -> Self {
        MpComplex { re: BigFloat::from_f64(re, p), im: BigFloat::from_f64(im, p) }
    }

    pub fn zero(p: usize) -> Self {
        Self::from_f64(0.0, 0.0, p)
    }

    pub fn add(&self, o: &Self, p: usize) -> Self {
        MpComplex { re: self.re.add(&o.re, p, RM), im: self.im.add(&o.im, p, RM) }
    }

    pub fn sub(&self, o: &Self, p: usize) -> Self {
        MpComplex { re: self.re.sub(&o.re, p, RM), im: self.im.sub(&o.im, p, RM) }
    }

    pub fn mul(&self, o: &Self, p: usize) -> Self {
        let rr = self.re.mul(&o.re, p, RM);
        let ii = self.im.mul(&o.im, p, RM);
        let ri = self.re.mul(&o.im, p, RM);
        let ir = self.im.mul(&o.re, p, RM);
        MpComplex { re: rr.sub(&ii, p, RM), im: ri.add(&ir, p, RM) }
    }

    pub fn scale(&self, s: &BigFloat, p: usize) -> Self {
        MpComplex { re: self.re.mul(s, p, RM), im: self.im.mul(s, p, RM) }
    }

    pub fn div_real(&self, s: &BigFloat, p: usize) -> Self {
        MpComplex { re: self.re.div(s, p, RM), im: self.im.div(s, p, RM) }
    }

    /// Rough `log2 |self|` from the exponents; `-inf` for zero.
    pub fn log2_mag(&self) -> f64 {
        let e = |x: &BigFloat| bf_parts(x).map(|(m, e)| e as f64 + m.abs().log2()).unwrap_or(f64::NEG_INFINITY);
        e(&self.re).max(e(&self.im))
    }

    pub fn to_log(&self) -> LogComplex {
        let (pr, pi) = (bf_parts(&self.re), bf_parts(&self.im));
        let top = match (pr, pi) {
            (None, None) => return LogComplex::ZERO,
            (Some((_, a)), None) => a,
            (None, Some((_, b))) => b,
            (Some((_, a)), Some((_, b))) => a.max(b),
        };
        let scaled = |p: Option<(f64, i64)>| p.map(|(m, e)| m * 2f64.powi((e - top).max(-1100) as i32)).unwrap_or(0.0);
        let (xr, xi) = (scaled(pr), scaled(pi));
        LogComplex::new(xr.hypot(xi).ln() + top as f64 * core::f64::consts::LN_2, xi.atan2(xr))
    }
}

/// `ln Gamma(x)` for real `x > 0` at precision `p` via the Stirling series
/// after shifting the argument upwards.
pub fn ln_gamma_real(x: &BigFloat, p: usize, cc: &mut Consts) -> BigFloat {
    let wp = p + 32;
    let floor = 0.12 * (wp as f64 + 16.0) + 6.0;
    let x0 = bf_to_f64(x);
    let shift = if x0 < floor { (floor - x0).ceil() as u64 } else { 0 };
    let one = BigFloat::from_f64(1.0, wp);
    let mut y = x.clone();
    let mut prod = one.clone();
    for _ in 0..shift {
        prod = prod.mul(&y, wp, RM);
        y = y.add(&one, wp, RM);
    }
    let half = BigFloat::from_f64(0.5, wp);
    let ln_y = y.ln(wp, RM, cc);
    let two_pi = cc.pi(wp, RM).mul(&BigFloat::from_f64(2.0, wp), wp, RM);
    let mut s = y.sub(&half, wp, RM).mul(&ln_y, wp, RM).sub(&y, wp, RM);
    s = s.add(&two_pi.ln(wp, RM, cc).mul(&half, wp, RM), wp, RM);

    let y2 = y.mul(&y, wp, RM);
    let mut ypow = y.clone();
    let mut k = 1usize;
    loop {
        let b = bernoulli(2 * k);
        let coeff = bf_from_ratio(&b[2 * k], wp).div(&bf_u64((2 * k * (2 * k - 1)) as u64, wp), wp, RM);
        let term = coeff.div(&ypow, wp, RM);
        s = s.add(&term, wp, RM);
        let small = match bf_parts(&term) {
            None => true,
            Some((_, e)) => e < -(wp as i64) - 8,
        };
        if small || k > 4 * wp {
            break;
        }
        ypow = ypow.mul(&y2, wp, RM);
        k += 1;
    }
    s.sub(&prod.ln(wp, RM, cc), wp, RM)
}

/// f64 value of `B_{2k}` for k = 1..=count.
pub(crate) fn bernoulli_even_f64(count: usize) -> Vec<f64> {
    let b = bernoulli(2 * count);
    (1..=count).map(|k| ratio_to_f64(&b[2 * k])).collect()
}
