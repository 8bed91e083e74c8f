//! Ground truth for `t_n(z, N)`: exact rational evaluation by three
//! independent routes, plus a multiprecision float path with a
//! precision-doubling self check.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::equilibrium::endpoints;
use crate::error::{Error, Result};
use crate::mp::{gaussian_to_log, ratio_to_log, MpComplex, RM};
use crate::numerics::{rel_diff, LogComplex};

pub type GaussRational = Complex<BigRational>;

/// Problem instance: degree, node count and everything derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChebParams {
    pub n: usize,
    pub nodes: usize,
    pub c: f64,
    pub a: f64,
    pub b: f64,
    pub x0: f64,
    /// Lagrange multiplier of the equilibrium problem.
    pub l: f64,
}

impl ChebParams {
    /// Degree `n >= 1` with `nodes > n`; the dispatch abscissa defaults to 1/2.
    pub fn new(n: usize, nodes: usize) -> Result<Self> {
        if n == 0 || n >= nodes {
            return Err(Error::InvalidParams(format!("need 1 <= n < N, got n = {n}, N = {nodes}")));
        }
        let c = n as f64 / nodes as f64;
        let eq = crate::equilibrium::EquilibriumData::new(c)?;
        ChebParams { n, nodes, c, a: eq.a, b: eq.b, x0: 0.5, l: eq.l }.with_x0(0.5)
    }

    /// Degree `n` with `N = round(n / c)`.
    pub fn from_ratio(n: usize, c: f64) -> Result<Self> {
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::InvalidParams(format!("ratio c = {c} must lie in (0, 1)")));
        }
        let nodes = (n as f64 / c).round() as usize;
        Self::new(n, nodes.max(n + 1))
    }

    pub fn with_x0(self, x0: f64) -> Result<Self> {
        if !(x0 > self.a && x0 < self.b) {
            return Err(Error::InvalidParams(format!("x0 = {x0} must lie in ({}, {})", self.a, self.b)));
        }
        Ok(ChebParams { x0, ..self })
    }

    pub fn equilibrium(&self) -> crate::equilibrium::EquilibriumData {
        crate::equilibrium::EquilibriumData { c: self.c, a: self.a, b: self.b, l: self.l }
    }
}

/// Oracle output: exact when the input was rational, otherwise a
/// multiprecision result exported to log scale.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactValue {
    Rational(GaussRational),
    HighPrecision { value: LogComplex, bits: u32 },
}

impl ExactValue {
    pub fn to_log(&self) -> LogComplex {
        match self {
            ExactValue::Rational(q) => ratio_to_log(q),
            ExactValue::HighPrecision { value, .. } => *value,
        }
    }

    pub fn as_rational(&self) -> Option<&GaussRational> {
        match self {
            ExactValue::Rational(q) => Some(q),
            ExactValue::HighPrecision { .. } => None,
        }
    }
}

/// A point `(re + i im) / den` with integer parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactPoint {
    pub re: BigInt,
    pub im: BigInt,
    pub den: BigInt,
}

fn dyadic(x: f64) -> Result<(BigInt, i64)> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("non-finite coordinate {x}")));
    }
    if x == 0.0 {
        return Ok((BigInt::zero(), 0));
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
    let m = BigInt::from(mant);
    Ok((if x < 0.0 { -m } else { m }, e))
}

impl ExactPoint {
    /// The exact binary value of a double-precision complex number.
    pub fn from_f64(z: Complex64) -> Result<Self> {
        let (mr, er) = dyadic(z.re)?;
        let (mi, ei) = dyadic(z.im)?;
        let e = er.min(ei).min(0);
        let re = mr << ((er - e) as usize);
        let im = mi << ((ei - e) as usize);
        Ok(ExactPoint { re, im, den: BigInt::one() << ((-e) as usize) }.reduced())
    }

    pub fn from_ratio(z: &GaussRational) -> Self {
        let den = z.re.denom().lcm(z.im.denom());
        let re = z.re.numer() * (&den / z.re.denom());
        let im = z.im.numer() * (&den / z.im.denom());
        ExactPoint { re, im, den }.reduced()
    }

    pub fn from_int(k: i64) -> Self {
        ExactPoint { re: BigInt::from(k), im: BigInt::zero(), den: BigInt::one() }
    }

    pub fn to_ratio(&self) -> GaussRational {
        Complex::new(
            BigRational::new(self.re.clone(), self.den.clone()),
            BigRational::new(self.im.clone(), self.den.clone()),
        )
    }

    /// `N z - 1/2`, the lattice variable of the point `z`.
    pub fn lattice_variable(&self, nodes: usize) -> Self {
        let nn = BigInt::from(nodes);
        ExactPoint {
            re: BigInt::from(2) * &nn * &self.re - &self.den,
            im: BigInt::from(2) * &nn * &self.im,
            den: BigInt::from(2) * &self.den,
        }
        .reduced()
    }

    fn reduced(self) -> Self {
        let g = self.re.gcd(&self.im).gcd(&self.den);
        if g.is_zero() || g.is_one() {
            return self;
        }
        ExactPoint { re: &self.re / &g, im: &self.im / &g, den: &self.den / &g }
    }
}

fn check_degree(n: usize, nodes: usize) -> Result<()> {
    if n >= nodes {
        return Err(Error::InvalidParams(format!("degree {n} must be below node count {nodes}")));
    }
    Ok(())
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

fn gauss(re: BigInt, im: BigInt, den: BigInt) -> GaussRational {
    Complex::new(BigRational::new(re, den.clone()), BigRational::new(im, den))
}

/// Scaled recurrence `r_m = m! Q^m t_m` at `x = P/Q`, which stays in the
/// Gaussian integers: r_{m+1} = (2m+1) W r_m - m^2 (N^2 - m^2) Q^2 r_{m-1}
/// with W = 2P - (N-1)Q.
fn scaled_recurrence(n: usize, nodes: usize, x: &ExactPoint) -> (BigInt, BigInt) {
    let q = &x.den;
    let wr = BigInt::from(2) * &x.re - BigInt::from(nodes - 1) * q;
    let wi = BigInt::from(2) * &x.im;
    let q2 = q * q;
    let (mut pr, mut pi) = (BigInt::one(), BigInt::zero());
    if n == 0 {
        return (pr, pi);
    }
    let (mut cr, mut ci) = (wr.clone(), wi.clone());
    let nn = BigInt::from(nodes) * BigInt::from(nodes);
    for m in 1..n {
        let k = BigInt::from(2 * m + 1);
        let mm = BigInt::from(m) * BigInt::from(m);
        let back = &mm * (&nn - &mm) * &q2;
        let nr = &k * (&wr * &cr - &wi * &ci) - &back * &pr;
        let ni = &k * (&wr * &ci + &wi * &cr) - &back * &pi;
        pr = core::mem::replace(&mut cr, nr);
        pi = core::mem::replace(&mut ci, ni);
    }
    (cr, ci)
}

/// `t_n(x, N)` by the three-term recurrence, exact.
pub fn t_recurrence(n: usize, nodes: usize, x: &GaussRational) -> Result<ExactValue> {
    check_degree(n, nodes)?;
    let p = ExactPoint::from_ratio(x);
    let (r, i) = scaled_recurrence(n, nodes, &p);
    let den = factorial(n) * num_traits::pow(p.den.clone(), n);
    Ok(ExactValue::Rational(gauss(r, i, den)))
}

/// `t_n(x, N) = n! Delta^n [C(x, n) C(x - N, n)]`, expanded as an alternating
/// binomial sum.
pub fn t_difference(n: usize, nodes: usize, x: &GaussRational) -> Result<ExactValue> {
    check_degree(n, nodes)?;
    let p = ExactPoint::from_ratio(x);
    let q = &p.den;
    let nn = nodes as i64;
    // n! t_n Q^{2n} = sum_j (-1)^{n-j} C(n,j) prod_i (P + (j-i)Q) prod_i (P + (j-N-i)Q)
    let mut sr = BigInt::zero();
    let mut si = BigInt::zero();
    let mut binom = BigInt::one();
    for j in 0..=n {
        let (mut fr, mut fi) = (BigInt::one(), BigInt::zero());
        for i in 0..n as i64 {
            for shift in [j as i64 - i, j as i64 - nn - i] {
                let ar = &p.re + BigInt::from(shift) * q;
                let nr = &fr * &ar - &fi * &p.im;
                let ni = &fr * &p.im + &fi * &ar;
                fr = nr;
                fi = ni;
            }
        }
        let term_r = &binom * fr;
        let term_i = &binom * fi;
        if (n - j) % 2 == 0 {
            sr += term_r;
            si += term_i;
        } else {
            sr -= term_r;
            si -= term_i;
        }
        binom = binom * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    let den = factorial(n) * num_traits::pow(q.clone(), 2 * n);
    Ok(ExactValue::Rational(gauss(sr, si, den)))
}

/// Lower parameter of the terminating hypergeometric sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HahnLowerParam {
    /// `-(N - 1)`: the lattice {0, ..., N-1} carries the orthogonality.
    NodesMinusOne,
    /// `-N`, the lattice {0, ..., N}.
    Nodes,
}

/// `3F2(-n, -x, n+1; -M, 1; 1)` with `M` given by the convention.
pub fn hahn_sum(n: usize, nodes: usize, x: &GaussRational, lower: HahnLowerParam) -> GaussRational {
    let m = match lower {
        HahnLowerParam::NodesMinusOne => nodes as i64 - 1,
        HahnLowerParam::Nodes => nodes as i64,
    };
    let one = BigRational::one();
    let mut term: GaussRational = Complex::new(one.clone(), BigRational::zero());
    let mut sum = term.clone();
    for k in 0..n as i64 {
        // ratio of consecutive terms: (k-n)(k-x)(k+n+1) / ((k-M)(k+1)(k+1))
        let kq = BigRational::from_integer(BigInt::from(k));
        let minus_x = Complex::new(&kq - &x.re, -x.im.clone());
        let num = BigRational::from_integer(BigInt::from((k - n as i64) * (k + n as i64 + 1)));
        let den = BigRational::from_integer(BigInt::from((k - m) * (k + 1) * (k + 1)));
        if den.is_zero() {
            break;
        }
        let r = num / den;
        term = term * minus_x;
        term = Complex::new(&term.re * &r, &term.im * &r);
        sum = sum + term.clone();
    }
    sum
}

/// `t_n(x, N) = kappa * 3F2(...)`, with `kappa` fixed by matching the
/// recurrence at `x = 0` and confirmed at `x = 1`.
pub fn t_hahn(n: usize, nodes: usize, x: &GaussRational) -> Result<ExactValue> {
    t_hahn_with(n, nodes, x, HahnLowerParam::NodesMinusOne)
}

pub fn t_hahn_with(n: usize, nodes: usize, x: &GaussRational, lower: HahnLowerParam) -> Result<ExactValue> {
    check_degree(n, nodes)?;
    let point = |k: i64| Complex::new(BigRational::from_integer(BigInt::from(k)), BigRational::zero());
    let kappa = match t_recurrence(n, nodes, &point(0))? {
        ExactValue::Rational(v) => v,
        _ => unreachable!(),
    };
    let at_one = hahn_sum(n, nodes, &point(1), lower) * kappa.clone();
    let want = t_recurrence(n, nodes, &point(1))?;
    if want.as_rational() != Some(&at_one) {
        return Err(Error::HahnMismatch { n, nodes });
    }
    Ok(ExactValue::Rational(hahn_sum(n, nodes, x, lower) * kappa))
}

/// `n!^2 / (2n)!`, the factor that makes `t_n` monic.
pub fn monic_factor(n: usize) -> BigRational {
    let f = factorial(n);
    BigRational::new(&f * &f, factorial(2 * n))
}

/// Monic polynomial `pi_{N,n}(x) = n!^2/(2n)! t_n(x, N)`, exact.
pub fn monic_pi(n: usize, nodes: usize, x: &GaussRational) -> Result<ExactValue> {
    let t = t_recurrence(n, nodes, x)?;
    let f = monic_factor(n);
    match t {
        ExactValue::Rational(v) => Ok(ExactValue::Rational(Complex::new(&v.re * &f, &v.im * &f))),
        other => Ok(other),
    }
}

/// `sum_{k=0}^{N-1} t_n(k) t_m(k)`, exact.
pub fn norm_check(n: usize, m: usize, nodes: usize) -> Result<BigRational> {
    check_degree(n.max(m), nodes)?;
    let mut acc = BigRational::zero();
    for k in 0..nodes as i64 {
        let x = Complex::new(BigRational::from_integer(BigInt::from(k)), BigRational::zero());
        let tn = t_recurrence(n, nodes, &x)?;
        let tm = t_recurrence(m, nodes, &x)?;
        acc += &tn.as_rational().unwrap().re * &tm.as_rational().unwrap().re;
    }
    Ok(acc)
}

/// `delta_{nm} (N+n)! / ((2n+1) (N-n-1)!)`.
pub fn norm_closed_form(n: usize, m: usize, nodes: usize) -> Result<BigRational> {
    check_degree(n.max(m), nodes)?;
    if n != m {
        return Ok(BigRational::zero());
    }
    Ok(BigRational::new(factorial(nodes + n), BigInt::from(2 * n + 1) * factorial(nodes - n - 1)))
}

/// How the reference value of `pi_{N,n}(N z - 1/2)` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Oracle {
    /// Exact Gaussian-integer arithmetic on the binary value of `z`.
    Exact,
    /// Multiprecision float recurrence at `bits`, cross-checked at `2 bits`.
    Float { bits: u32 },
}

/// Default float-oracle precision for degree `n`.
pub fn default_oracle_bits(n: usize) -> u32 {
    (4 * n + 256) as u32
}

/// `pi_{N,n}(N z - 1/2)` in log scale.
pub fn monic_at_scaled_point(n: usize, nodes: usize, z: Complex64, oracle: Oracle) -> Result<LogComplex> {
    check_degree(n, nodes)?;
    let ln_monic = ln_factorial(n) * 2.0 - ln_factorial(2 * n);
    let t = match oracle {
        Oracle::Exact => {
            let x = ExactPoint::from_f64(z)?.lattice_variable(nodes);
            let (r, i) = scaled_recurrence(n, nodes, &x);
            let den = factorial(n) * num_traits::pow(x.den.clone(), n);
            gaussian_to_log(&r, &i, &den)
        }
        Oracle::Float { bits } => {
            let lo = float_recurrence(n, nodes, z, bits as usize);
            let hi = float_recurrence(n, nodes, z, 2 * bits as usize);
            let tol = 2f64.powi(-(bits as i32) / 2).max(4.0 * f64::EPSILON);
            let d = if hi.is_zero() { if lo.is_zero() { 0.0 } else { 1.0 } } else { rel_diff(lo, hi)? };
            if d > tol {
                return Err(Error::OraclePrecision { bits, disagreement: d });
            }
            hi
        }
    };
    Ok(t.mul(LogComplex::new(ln_monic, 0.0)))
}

fn ln_factorial(k: usize) -> f64 {
    crate::dfun::ln_gamma(Complex64::new(k as f64 + 1.0, 0.0)).re
}

/// Forward recurrence for `t_n(N z - 1/2, N)` in `p`-bit floating point.
fn float_recurrence(n: usize, nodes: usize, z: Complex64, p: usize) -> LogComplex {
    let nn = nodes as f64;
    let centre = MpComplex::from_f64(z.re, z.im, p)
        .scale(&astro_float::BigFloat::from_f64(nn, p), p)
        .sub(&MpComplex::from_f64(0.5 + (nn - 1.0) / 2.0, 0.0, p), p);
    let mut prev = MpComplex::from_f64(1.0, 0.0, p);
    if n == 0 {
        return prev.to_log();
    }
    let two = astro_float::BigFloat::from_f64(2.0, p);
    let mut cur = centre.scale(&two, p);
    let nsq = astro_float::BigFloat::from_f64(nn, p).mul(&astro_float::BigFloat::from_f64(nn, p), p, RM);
    for m in 1..n {
        let mf = astro_float::BigFloat::from_f64(m as f64, p);
        let k = astro_float::BigFloat::from_f64((2 * (2 * m + 1)) as f64, p);
        let back = mf.mul(&nsq.sub(&mf.mul(&mf, p, RM), p, RM), p, RM);
        let next = centre
            .mul(&cur, p)
            .scale(&k, p)
            .sub(&prev.scale(&back, p), p)
            .div_real(&astro_float::BigFloat::from_f64((m + 1) as f64, p), p);
        prev = core::mem::replace(&mut cur, next);
    }
    cur.to_log()
}

/// The turning points of the instance, for callers holding only `(n, N)`.
pub fn turning_points(n: usize, nodes: usize) -> Result<(f64, f64)> {
    check_degree(n, nodes)?;
    endpoints(n as f64 / nodes as f64)
}

/// Checks that `t_n` is monic up to `(2n)!/n!^2` via the n-th divided
/// difference on the nodes 0..=n (small n only).
pub fn leading_coefficient(n: usize, nodes: usize) -> Result<BigRational> {
    check_degree(n, nodes)?;
    let vals: Vec<BigRational> = (0..=n as i64)
        .map(|k| {
            let x = Complex::new(BigRational::from_integer(BigInt::from(k)), BigRational::zero());
            monic_pi(n, nodes, &x).map(|v| v.as_rational().unwrap().re.clone())
        })
        .collect::<Result<_>>()?;
    // n-th forward difference over unit spacing divided by n!
    let mut acc = BigRational::zero();
    let mut binom = BigInt::one();
    for (j, v) in vals.iter().enumerate() {
        let term = v * BigRational::from_integer(binom.clone());
        if (n - j) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        binom = binom * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    Ok(acc / BigRational::from_integer(factorial(n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(k: i64) -> GaussRational {
        Complex::new(BigRational::from_integer(BigInt::from(k)), BigRational::zero())
    }

    fn int(v: &ExactValue) -> BigRational {
        let r = v.as_rational().unwrap();
        assert!(r.im.is_zero());
        r.re.clone()
    }

    fn r(k: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(k))
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(int(&t_recurrence(0, 7, &q(3)).unwrap()), r(1));
        for z in -3..5 {
            assert_eq!(int(&t_recurrence(1, 9, &q(z)).unwrap()), r(2 * z - 9 + 1));
        }
        assert_eq!(int(&t_recurrence(2, 4, &q(0)).unwrap()), r(6));
        assert!(t_recurrence(4, 4, &q(0)).is_err());
    }

    #[test]
    fn difference_and_hahn_examples() {
        assert_eq!(int(&t_difference(0, 5, &q(2)).unwrap()), r(1));
        assert_eq!(int(&t_difference(2, 4, &q(0)).unwrap()), r(6));
        assert_eq!(int(&t_hahn(0, 5, &q(2)).unwrap()), r(1));
        assert_eq!(int(&t_hahn(1, 4, &q(0)).unwrap()), r(-3));
        assert_eq!(int(&t_hahn(2, 4, &q(0)).unwrap()), r(6));
    }

    #[test]
    fn hahn_with_nodes_parameter_is_rejected() {
        assert_eq!(
            t_hahn_with(2, 6, &q(3), HahnLowerParam::Nodes),
            Err(Error::HahnMismatch { n: 2, nodes: 6 })
        );
    }

    #[test]
    fn rational_points_agree() {
        let third = Complex::new(BigRational::new(BigInt::from(1), BigInt::from(3)), BigRational::zero());
        let mixed = Complex::new(BigRational::new(BigInt::from(7), BigInt::from(2)), BigRational::new(BigInt::from(-2), BigInt::from(5)));
        for x in [third, mixed] {
            for (n, nodes) in [(3, 5), (6, 11), (9, 10)] {
                let a = t_recurrence(n, nodes, &x).unwrap();
                assert_eq!(a, t_difference(n, nodes, &x).unwrap());
                assert_eq!(a, t_hahn(n, nodes, &x).unwrap());
            }
        }
    }

    #[test]
    fn monic_examples() {
        assert_eq!(int(&monic_pi(0, 4, &q(1)).unwrap()), r(1));
        let v = monic_pi(1, 6, &q(4)).unwrap();
        assert_eq!(int(&v), r(4) - BigRational::new(BigInt::from(5), BigInt::from(2)));
        assert_eq!(int(&monic_pi(2, 4, &q(0)).unwrap()), r(1));
        for n in 0..8 {
            assert_eq!(leading_coefficient(n, 12).unwrap(), r(1));
        }
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm_check(0, 0, 9).unwrap(), r(9));
        assert_eq!(norm_check(1, 1, 4).unwrap(), r(20));
        assert_eq!(norm_closed_form(1, 1, 4).unwrap(), r(20));
        assert_eq!(norm_check(0, 1, 4).unwrap(), r(0));
    }

    #[test]
    fn binary_points_are_exact() {
        let p = ExactPoint::from_f64(Complex64::new(0.3, -0.4)).unwrap();
        let ratio = p.to_ratio();
        assert_eq!(crate::mp::ratio_to_f64(&ratio.re), 0.3);
        assert_eq!(crate::mp::ratio_to_f64(&ratio.im), -0.4);
        let x = ExactPoint::from_f64(Complex64::new(2.5, 0.0)).unwrap().lattice_variable(10);
        assert_eq!(x.to_ratio(), q(0) + Complex::new(BigRational::new(BigInt::from(49), BigInt::from(2)), BigRational::zero()));
    }

    #[test]
    fn float_oracle_matches_exact() {
        let z = Complex64::new(0.3, 0.4);
        let e = monic_at_scaled_point(60, 120, z, Oracle::Exact).unwrap();
        let f = monic_at_scaled_point(60, 120, z, Oracle::Float { bits: 256 }).unwrap();
        assert!(rel_diff(f, e).unwrap() < 1e-13);
    }

    #[test]
    fn float_oracle_reports_cancellation() {
        // lattice node inside the saturated region: the recurrence cancels
        let z = Complex64::new(3.5 / 200.0, 0.0);
        let r = monic_at_scaled_point(100, 200, z, Oracle::Float { bits: 64 });
        assert!(matches!(r, Err(Error::OraclePrecision { bits: 64, .. })));
        assert!(monic_at_scaled_point(100, 200, z, Oracle::Float { bits: 128 }).is_ok());
    }

    #[test]
    fn symmetry_about_the_centre() {
        for (n, nodes) in [(5, 9), (8, 20)] {
            for k in 0..nodes as i64 {
                let a = int(&t_recurrence(n, nodes, &q(k)).unwrap());
                let b = int(&t_recurrence(n, nodes, &q(nodes as i64 - 1 - k)).unwrap());
                assert_eq!(a, if n % 2 == 0 { b } else { -b });
            }
        }
    }

    #[test]
    fn params_validation() {
        assert!(ChebParams::new(0, 10).is_err());
        assert!(ChebParams::new(10, 10).is_err());
        let p = ChebParams::new(100, 200).unwrap();
        assert_eq!(p.x0, 0.5);
        assert!((p.a + p.b - 1.0).abs() < 1e-15);
        assert!(p.with_x0(0.01).is_err());
        assert_eq!(ChebParams::from_ratio(50, 0.5).unwrap().nodes, 100);
    }
}
