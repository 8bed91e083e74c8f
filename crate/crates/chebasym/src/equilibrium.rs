//! The constrained equilibrium measure of the node density: turning points,
//! density, log potential `g`, its derivative and the multiplier `l`.

use alloc::format;
use core::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{cln, csqrt, displaced, Side};

fn check_ratio(c: f64) -> Result<()> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::InvalidParams(format!("ratio c = {c} must lie in (0, 1)")));
    }
    Ok(())
}

/// Turning points `(a, b)` for the ratio `c`.
pub fn endpoints(c: f64) -> Result<(f64, f64)> {
    check_ratio(c)?;
    let s = (1.0 - c * c).sqrt();
    let a = c * c / (2.0 * (1.0 + s));
    Ok((a, 1.0 - a))
}

/// Equilibrium density on [0, 1]; saturated at `1/c` outside (a, b).
pub fn density(x: f64, c: f64) -> Result<f64> {
    check_ratio(c)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("density is supported on [0, 1], got {x}")));
    }
    let (a, b) = endpoints(c)?;
    if x <= a || x >= b {
        return Ok(1.0 / c);
    }
    let arg = (c / (2.0 * (x - x * x).sqrt())).min(1.0);
    Ok(2.0 / (PI * c) * arg.asin())
}

fn on_cut(z: Complex64, right_end: f64) -> bool {
    z.im == 0.0 && z.re <= right_end
}

/// Closed form of the log potential at a point already moved off the axis.
fn g_closed(z: Complex64, c: f64, a: f64, b: f64) -> Complex64 {
    let sa = csqrt(z - a);
    let sb = csqrt(z - b);
    let rho = sa * sb;
    let ic = 1.0 / c;
    let mut g = Complex64::new(-1.0 - 2.0 * LN_2, 0.0);
    g += (z - 1.0) * cln(z - 1.0) * ic;
    g -= z * cln(z) * ic;
    g += (2.0 - 2.0 * ic) * cln(sa + sb);
    g += 2.0 * ic * z * cln(z + rho + c / 2.0);
    g += 2.0 * ic * (1.0 - z) * cln(z - 1.0 + rho - c / 2.0);
    g
}

fn g_prime_closed(z: Complex64, c: f64, a: f64, b: f64) -> Complex64 {
    let rho = csqrt(z - a) * csqrt(z - b);
    let ic = 1.0 / c;
    2.0 * ic * cln((z + rho + c / 2.0) / (z - 1.0 + rho - c / 2.0)) + ic * cln((z - 1.0) / z)
}

/// `g(z) = \int_0^1 log(z - s) mu(s) ds` from its closed form.
///
/// Real points `x <= 1` lie on the cut and need a side; the boundary value is
/// the one-sided limit.
pub fn g_eval(z: Complex64, c: f64, side: Option<Side>) -> Result<Complex64> {
    let (a, b) = endpoints(c)?;
    let zd = if on_cut(z, 1.0) {
        displaced(z, side.ok_or(Error::NeedsSide { re: z.re, im: z.im })?)
    } else {
        displaced(z, Side::Upper)
    };
    let g = g_closed(zd, c, a, b);
    Ok(if z.im == 0.0 && z.re > 1.0 { Complex64::new(g.re, 0.0) } else { g })
}

/// `g'(z)`. Real points in (-inf, 1] need a side.
pub fn g_prime(z: Complex64, c: f64, side: Option<Side>) -> Result<Complex64> {
    let (a, b) = endpoints(c)?;
    let zd = if on_cut(z, 1.0) {
        displaced(z, side.ok_or(Error::NeedsSide { re: z.re, im: z.im })?)
    } else {
        displaced(z, Side::Upper)
    };
    let d = g_prime_closed(zd, c, a, b);
    Ok(if z.im == 0.0 && z.re > 1.0 { Complex64::new(d.re, 0.0) } else { d })
}

/// Lagrange multiplier `l = 2 Re g_+(x)`, constant on (a, b); sampled at the midpoint.
pub fn lagrange_l(c: f64) -> Result<f64> {
    Ok(2.0 * g_eval(Complex64::new(0.5, 0.0), c, Some(Side::Upper))?.re)
}

/// Everything about the equilibrium problem that depends on `c` only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumData {
    pub c: f64,
    pub a: f64,
    pub b: f64,
    pub l: f64,
}

impl EquilibriumData {
    pub fn new(c: f64) -> Result<Self> {
        let (a, b) = endpoints(c)?;
        Ok(EquilibriumData { c, a, b, l: lagrange_l(c)? })
    }

    /// Local constant of the turning-point expansions,
    /// `phi_tilde(z) ~ -K (a - z)^{3/2}` near `a`.
    pub fn turning_constant(&self) -> f64 {
        8.0 / (3.0 * self.c * self.c) * (1.0 - self.c * self.c).powf(0.25)
    }

    pub(crate) fn g_at(&self, zd: Complex64) -> Complex64 {
        g_closed(zd, self.c, self.a, self.b)
    }

    pub(crate) fn g_prime_at(&self, zd: Complex64) -> Complex64 {
        g_prime_closed(zd, self.c, self.a, self.b)
    }
}
