//! Phase functions `phi = l/2 - g`, the endpoint-adapted shifts `phi_star`
//! (anchored at b) and `phi_tilde` (anchored at a), and the maps that turn
//! them into Airy arguments.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::equilibrium::EquilibriumData;
use crate::error::{Error, Result};
use crate::numerics::{displaced, Side};
use crate::quad;

/// Coherent values of the three phase functions at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseBundle {
    pub phi: Complex64,
    pub phi_star: Complex64,
    pub phi_tilde: Complex64,
    /// Half-plane whose formulas were used.
    pub side: Side,
    /// True when the point was real and the values are one-sided limits.
    pub on_axis: bool,
}

/// Which turning point a map is anchored at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapKind {
    /// Anchored at `a`, used left of the dispatch line.
    Tilde,
    /// Anchored at `b`, used right of it.
    Star,
}

/// `f = (-(3/2) n phi)^{2/3}` with the argument it was built from, so that
/// fractional powers of `f` can be taken on the same branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapValue {
    pub value: Complex64,
    pub modulus: f64,
    pub arg: f64,
}

impl MapValue {
    /// `f^r` on the tracked branch.
    pub fn pow(&self, r: f64) -> Complex64 {
        Complex64::from_polar(self.modulus.powf(r), self.arg * r)
    }
}

/// Radius around a turning point inside which the phase is integrated from
/// the turning point instead of taken from the closed form of `g`.
fn local_radius(eq: &EquilibriumData) -> f64 {
    0.3 * eq.a.min(eq.b - eq.a)
}

/// `d/dz phi_tilde = d/dz phi_star` at a point already off the axis.
fn shifted_derivative(eq: &EquilibriumData, zd: Complex64, side: Side) -> Complex64 {
    -eq.g_prime_at(zd) - Complex64::new(0.0, side.sign() * PI / eq.c)
}

/// `\int_t^z` of the shifted derivative along the straight segment, with the
/// substitution `s = t + (z - t) u^2` that removes the square-root behaviour
/// at the turning point `t`.
fn integrate_from_turning_point(eq: &EquilibriumData, t: f64, z: Complex64, side: Side) -> Complex64 {
    let (nodes, weights) = quad::rule();
    let dz = z - t;
    let mut acc = Complex64::new(0.0, 0.0);
    for (u, w) in nodes.iter().zip(weights) {
        let s = displaced(t + dz * (u * u), side);
        acc += shifted_derivative(eq, s, side) * (2.0 * u * w);
    }
    acc * dz
}

/// The phase functions at `z`. Real points need a side.
pub fn phase_functions(z: Complex64, c: f64, side: Option<Side>) -> Result<PhaseBundle> {
    let eq = EquilibriumData::new(c)?;
    phase_bundle(&eq, z, side)
}

/// As [`phase_functions`] with the equilibrium data supplied.
pub fn phase_bundle(eq: &EquilibriumData, z: Complex64, side: Option<Side>) -> Result<PhaseBundle> {
    let on_axis = z.im == 0.0;
    let side = if on_axis {
        side.ok_or(Error::NeedsSide { re: z.re, im: z.im })?
    } else {
        Side::of(z, Side::Upper)
    };
    let zd = displaced(z, side);
    let s = side.sign();
    let ic = 1.0 / eq.c;
    // phi_star - phi and phi_tilde - phi on this side
    let star_shift = Complex64::new(0.0, s * PI * ic) * (1.0 - zd);
    let tilde_shift = Complex64::new(0.0, s * PI) * (1.0 - zd * ic);
    let r = local_radius(eq);

    let (phi, mut phi_star, mut phi_tilde);
    if (z - eq.a).norm() < r {
        phi_tilde = integrate_from_turning_point(eq, eq.a, z, side);
        phi = phi_tilde - tilde_shift;
        phi_star = phi + star_shift;
    } else if (z - eq.b).norm() < r {
        phi_star = integrate_from_turning_point(eq, eq.b, z, side);
        phi = phi_star - star_shift;
        phi_tilde = phi + tilde_shift;
    } else {
        phi = Complex64::new(eq.l / 2.0, 0.0) - eq.g_at(zd);
        phi_star = phi + star_shift;
        phi_tilde = phi + tilde_shift;
    }
    if on_axis {
        if z.re > 0.0 && z.re < eq.a {
            phi_tilde.im = 0.0;
        }
        if z.re > eq.b && z.re < 1.0 {
            phi_star.im = 0.0;
        }
        if z.re == eq.a {
            phi_tilde = Complex64::new(0.0, 0.0);
        }
        if z.re == eq.b {
            phi_star = Complex64::new(0.0, 0.0);
        }
    }
    Ok(PhaseBundle { phi, phi_star, phi_tilde, side, on_axis })
}

/// Derivative of `phi_tilde` (equivalently `phi_star`) at `z`.
pub fn shifted_phase_derivative(eq: &EquilibriumData, z: Complex64, side: Option<Side>) -> Result<Complex64> {
    let side = if z.im == 0.0 {
        side.ok_or(Error::NeedsSide { re: z.re, im: z.im })?
    } else {
        Side::of(z, Side::Upper)
    };
    let d = shifted_derivative(eq, displaced(z, side), side);
    let real_segment = z.im == 0.0 && ((z.re > 0.0 && z.re < eq.a) || (z.re > eq.b && z.re < 1.0));
    Ok(if real_segment { Complex64::new(d.re, 0.0) } else { d })
}

/// Builds the Airy argument from a phase value, choosing the 2/3-power branch
/// whose argument is nearest to `(3/2)` times the argument of the local
/// coordinate (`a - z` for the tilde map, `z - b` for the star map).
fn map_from_phase(phase: Complex64, n: f64, local: Complex64) -> MapValue {
    let w = phase * (-1.5 * n);
    if w.re == 0.0 && w.im == 0.0 {
        return MapValue { value: Complex64::new(0.0, 0.0), modulus: 0.0, arg: local.im.atan2(local.re) };
    }
    let reference = 1.5 * local.im.atan2(local.re);
    let mut theta = w.im.atan2(w.re);
    theta += 2.0 * PI * ((reference - theta) / (2.0 * PI)).round();
    let modulus = w.norm().powf(2.0 / 3.0);
    let arg = theta * 2.0 / 3.0;
    MapValue { value: Complex64::from_polar(modulus, arg), modulus, arg }
}

/// The conformal map `f_tilde` or `f_star` at `z` for degree `n`.
pub fn f_maps(z: Complex64, n: usize, c: f64, which: MapKind, side: Option<Side>) -> Result<MapValue> {
    let eq = EquilibriumData::new(c)?;
    let pb = phase_bundle(&eq, z, side)?;
    Ok(map_value(&eq, &pb, z, n, which))
}

/// As [`f_maps`] from an already computed phase bundle.
pub fn map_value(eq: &EquilibriumData, pb: &PhaseBundle, z: Complex64, n: usize, which: MapKind) -> MapValue {
    let zd = if pb.on_axis { displaced(z, pb.side) } else { z };
    match which {
        MapKind::Tilde => map_from_phase(pb.phi_tilde, n as f64, eq.a - zd),
        MapKind::Star => map_from_phase(pb.phi_star, n as f64, zd - eq.b),
    }
}
