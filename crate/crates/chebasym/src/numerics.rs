//! Log-scaled complex numbers, precision policy and the branch-cut primitives
//! shared by every formula in the crate.

use alloc::format;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Imaginary displacement used to realise one-sided limits on the real axis.
///
/// Small enough that every first-order term stays exact in binary64, large
/// enough that nothing underflows before it is squared.
pub const AXIS_OFFSET: f64 = 3.054936363499605e-151; // 2^-500

/// Which side of the real axis a boundary value is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Upper,
    Lower,
}

impl Side {
    /// The half-plane of `z`, falling back to `default` on the real axis.
    pub fn of(z: Complex64, default: Side) -> Side {
        if z.im > 0.0 {
            Side::Upper
        } else if z.im < 0.0 {
            Side::Lower
        } else {
            default
        }
    }

    /// +1 above the axis, -1 below.
    pub fn sign(self) -> f64 {
        match self {
            Side::Upper => 1.0,
            Side::Lower => -1.0,
        }
    }

    pub fn flip(self) -> Side {
        match self {
            Side::Upper => Side::Lower,
            Side::Lower => Side::Upper,
        }
    }
}

/// Moves a real point an infinitesimal step off the axis towards `side`.
/// Points with a nonzero imaginary part are returned unchanged.
pub fn displaced(z: Complex64, side: Side) -> Complex64 {
    if z.im == 0.0 {
        Complex64::new(z.re, side.sign() * AXIS_OFFSET)
    } else {
        z
    }
}

/// Working precision and acceptance tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionCtx {
    pub bits: u32,
    pub tol: f64,
}

impl PrecisionCtx {
    pub fn new(bits: u32) -> Result<Self> {
        if bits < 64 {
            return Err(Error::InvalidParams(format!("precision {bits} bits is below 64")));
        }
        Ok(PrecisionCtx { bits, tol: 2f64.powi(-(bits as i32) / 2) })
    }

    pub fn with_tol(self, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::InvalidParams(format!("tolerance {tol} must be positive")));
        }
        Ok(PrecisionCtx { tol, ..self })
    }
}

impl Default for PrecisionCtx {
    fn default() -> Self {
        PrecisionCtx { bits: 64, tol: 2f64.powi(-32) }
    }
}

/// Reduces an angle into (-pi, pi].
pub fn normalize_phase(p: f64) -> f64 {
    if !p.is_finite() {
        return p;
    }
    let mut r = libm::remainder(p, TAU);
    if r <= -PI {
        r += TAU;
    } else if r > PI {
        r -= TAU;
    }
    r
}

/// A complex number stored as natural log of its modulus and a phase.
///
/// Zero is `log_mod = -inf`, `phase = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogComplex {
    pub log_mod: f64,
    pub phase: f64,
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex { log_mod: f64::NEG_INFINITY, phase: 0.0 };
    pub const ONE: LogComplex = LogComplex { log_mod: 0.0, phase: 0.0 };

    pub fn new(log_mod: f64, phase: f64) -> Self {
        if log_mod == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        LogComplex { log_mod, phase: normalize_phase(phase) }
    }

    pub fn from_complex(w: Complex64) -> Self {
        if w.re == 0.0 && w.im == 0.0 {
            return Self::ZERO;
        }
        // scale before hypot so subnormal parts keep their digits
        let m = w.re.abs().max(w.im.abs());
        let log_mod = m.ln() + (w.re / m).hypot(w.im / m).ln();
        LogComplex { log_mod, phase: w.im.atan2(w.re) }
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    /// `exp(w)` without forming it.
    pub fn exp_of(w: Complex64) -> Self {
        Self::new(w.re, w.im)
    }

    pub fn is_zero(&self) -> bool {
        self.log_mod == f64::NEG_INFINITY
    }

    pub fn is_finite(&self) -> bool {
        self.is_zero() || (self.log_mod.is_finite() && self.phase.is_finite())
    }

    /// Ordinary complex value; overflows to infinity for huge moduli.
    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let r = self.log_mod.exp();
        Complex64::new(r * self.phase.cos(), r * self.phase.sin())
    }

    pub fn log10_abs(&self) -> f64 {
        self.log_mod / core::f64::consts::LN_10
    }

    pub fn mul(self, o: LogComplex) -> LogComplex {
        if self.is_zero() || o.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.log_mod + o.log_mod, self.phase + o.phase)
    }

    pub fn mul_complex(self, w: Complex64) -> LogComplex {
        self.mul(Self::from_complex(w))
    }

    pub fn div(self, o: LogComplex) -> Result<LogComplex> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::ZERO);
        }
        Ok(Self::new(self.log_mod - o.log_mod, self.phase - o.phase))
    }

    pub fn recip(self) -> Result<LogComplex> {
        Self::ONE.div(self)
    }

    /// Principal real power, `|w|^r e^{i r arg w}`.
    pub fn pow_real(self, r: f64) -> Result<LogComplex> {
        if self.is_zero() {
            return if r > 0.0 { Ok(Self::ZERO) } else { Err(Error::ZeroPower) };
        }
        Ok(Self::new(self.log_mod * r, self.phase * r))
    }

    pub fn neg(self) -> LogComplex {
        if self.is_zero() {
            return self;
        }
        Self::new(self.log_mod, self.phase + PI)
    }

    pub fn conj(self) -> LogComplex {
        if self.is_zero() {
            return self;
        }
        Self::new(self.log_mod, -self.phase)
    }

    pub fn add(self, o: LogComplex) -> LogComplex {
        sum_list(&[self, o])
    }

    pub fn sub(self, o: LogComplex) -> LogComplex {
        sum_list(&[self, o.neg()])
    }
}

/// Sum of log-scaled terms: the largest modulus is factored out, the rescaled
/// residuals are summed as ordinary complex numbers and the result renormalised.
///
/// A residual at rounding level relative to the summed moduli is returned as
/// zero. Panics on an empty slice.
pub fn sum_list(terms: &[LogComplex]) -> LogComplex {
    assert!(!terms.is_empty(), "sum_list needs at least one term");
    let top = terms.iter().map(|t| t.log_mod).fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return LogComplex::ZERO;
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for t in terms.iter().filter(|t| !t.is_zero()) {
        let r = (t.log_mod - top).exp();
        acc += Complex64::from_polar(r, t.phase);
        mass += r;
    }
    if acc.norm() <= 4.0 * f64::EPSILON * mass {
        return LogComplex::ZERO;
    }
    let s = LogComplex::from_complex(acc);
    LogComplex::new(s.log_mod + top, s.phase)
}

/// `|a/b - 1|`, evaluated from the log difference so no large exponential is
/// ever formed.
pub fn rel_diff(a: LogComplex, b: LogComplex) -> Result<f64> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if a.is_zero() {
        return Ok(1.0);
    }
    let x = a.log_mod - b.log_mod;
    let y = normalize_phase(a.phase - b.phase);
    if x > 700.0 {
        return Ok(f64::INFINITY);
    }
    // e^{x+iy} - 1 split so that small x and y keep full relative accuracy
    let s = (0.5 * y).sin();
    let re = x.exp_m1() * y.cos() - 2.0 * s * s;
    let im = x.exp() * y.sin();
    Ok(re.hypot(im))
}

fn check_cut(a: f64, b: f64) -> Result<()> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParams(format!("cut endpoints must satisfy a < b, got [{a}, {b}]")));
    }
    Ok(())
}

/// `((z-a)(z-b))^{1/2}` on the plane cut along [a, b], positive for real z > b.
///
/// Real points inside (a, b) need a side; elsewhere the side is ignored.
pub fn branch_sqrt_ab(z: Complex64, a: f64, b: f64, side: Option<Side>) -> Result<Complex64> {
    check_cut(a, b)?;
    if z.im == 0.0 {
        let x = z.re;
        if x > a && x < b {
            let side = side.ok_or(Error::NeedsSide { re: z.re, im: z.im })?;
            let m = ((x - a) * (b - x)).sqrt();
            return Ok(Complex64::new(0.0, side.sign() * m));
        }
        let m = ((x - a) * (x - b)).sqrt();
        return Ok(Complex64::new(if x >= b { m } else { -m }, 0.0));
    }
    Ok(csqrt(z - a) * csqrt(z - b))
}

/// `((z-b)/(z-a))^{1/4}`, or its reciprocal when `inverse` is set, cut along
/// [a, b] and tending to 1 at infinity.
pub fn branch_quart_ratio(
    z: Complex64,
    a: f64,
    b: f64,
    inverse: bool,
    side: Option<Side>,
) -> Result<Complex64> {
    check_cut(a, b)?;
    if z.im == 0.0 {
        let x = z.re;
        if x == a || x == b {
            let vanishes = (x == b) != inverse;
            if vanishes {
                return Ok(Complex64::new(0.0, 0.0));
            }
            return Err(Error::Domain(format!("quartic ratio has a pole at {x}")));
        }
        if x > a && x < b {
            let side = side.ok_or(Error::NeedsSide { re: z.re, im: z.im })?;
            let m = ((b - x) / (x - a)).powf(0.25);
            // upper side: the ratio approaches the negative axis from above
            let ph = side.sign() * PI / 4.0;
            let w = Complex64::from_polar(m, ph);
            return Ok(if inverse { w.inv() } else { w });
        }
        let r = ((x - b) / (x - a)).powf(0.25);
        return Ok(Complex64::new(if inverse { 1.0 / r } else { r }, 0.0));
    }
    let ratio = if inverse { (z - a) / (z - b) } else { (z - b) / (z - a) };
    Ok(csqrt(csqrt(ratio)))
}

/// Principal square root that keeps small components exact (no polar round
/// trip) and honours the sign of a zero imaginary part.
pub fn csqrt(w: Complex64) -> Complex64 {
    if w.re == 0.0 && w.im == 0.0 {
        return Complex64::new(0.0, w.im);
    }
    let t = ((w.re.abs() + w.norm()) * 0.5).sqrt();
    if w.re >= 0.0 {
        Complex64::new(t, w.im / (2.0 * t))
    } else {
        Complex64::new(w.im.abs() / (2.0 * t), t.copysign(w.im))
    }
}

/// Principal log that honours the sign of a zero imaginary part.
pub(crate) fn cln(w: Complex64) -> Complex64 {
    Complex64::new(w.norm().ln(), w.im.atan2(w.re))
}
