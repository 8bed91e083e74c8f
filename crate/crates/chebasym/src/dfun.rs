//! Gamma-ratio factors `D(z) = e^{Nz} Gamma(Nz + 1/2) / (sqrt(2 pi) (Nz)^{Nz})`
//! and their relatives, which carry the pole structure of the node lattice.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use spin::Once;

use crate::error::{Error, Result};
use crate::mp::bernoulli_even_f64;
use crate::numerics::{cln, displaced, LogComplex, PrecisionCtx, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DSelector {
    D,
    Dtilde,
    /// `D(1 - z)`
    Dstar,
    /// `Dtilde(1 - z)`
    DtildeStar,
}

const STIRLING_TERMS: usize = 16;
/// Below this modulus the Stirling sum is not used directly.
const STIRLING_FLOOR: f64 = 16.0;

static EVEN_BERNOULLI: Once<Vec<f64>> = Once::new();

fn even_bernoulli() -> &'static [f64] {
    EVEN_BERNOULLI.call_once(|| bernoulli_even_f64(STIRLING_TERMS + 1))
}

fn half_ln_two_pi() -> f64 {
    0.5 * (2.0 * PI).ln()
}

/// `ln sin(pi z)` modulo 2 pi i, without overflow for large |Im z|.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let w = z * PI;
    let i = Complex64::new(0.0, 1.0);
    if w.im > 1.0 {
        // sin w = (e^{-iw}/(2i)) (e^{2iw} - 1)
        -i * w + cln(Complex64::new(-1.0, 0.0) + (i * w * 2.0).exp()) - cln(i * 2.0)
    } else if w.im < -1.0 {
        // sin w = (e^{iw}/(2i)) (1 - e^{-2iw})
        i * w + cln(Complex64::new(1.0, 0.0) - (-i * w * 2.0).exp()) - cln(i * 2.0)
    } else {
        cln(w.sin())
    }
}

/// Complex log-gamma, correct modulo 2 pi i (exponentiates to Gamma).
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        return Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let mut w = z;
    let mut prod = Complex64::new(1.0, 0.0);
    while w.norm() < STIRLING_FLOOR {
        prod *= w;
        w += 1.0;
    }
    let shift = cln(prod);
    let mut s = (w - 0.5) * cln(w) - w + half_ln_two_pi();
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut pw = inv;
    for (k, b) in even_bernoulli().iter().enumerate().take(STIRLING_TERMS) {
        let k = (k + 1) as f64;
        s += pw * (b / (2.0 * k * (2.0 * k - 1.0)));
        pw *= inv2;
    }
    s - shift
}

/// `ln D` as a function of `w = Nz`, modulo 2 pi i.
fn ln_d_scaled(w: Complex64) -> Complex64 {
    if w.re == 0.0 && w.im == 0.0 {
        return Complex64::new(-0.5 * 2f64.ln(), 0.0);
    }
    if w.re >= 0.0 && w.norm() >= 2.0 * STIRLING_FLOOR {
        // ln D ~ sum_{j even} B_j(1/2) / ((j-1) j w^{j-1}), B_j(1/2) = (2^{1-j} - 1) B_j
        let inv = w.inv();
        let inv2 = inv * inv;
        let mut pw = inv;
        let mut s = Complex64::new(0.0, 0.0);
        for (k, b) in even_bernoulli().iter().enumerate().take(STIRLING_TERMS) {
            let j = 2.0 * (k + 1) as f64;
            let bh = (2f64.powf(1.0 - j) - 1.0) * b;
            s += pw * (bh / ((j - 1.0) * j));
            pw *= inv2;
        }
        return s;
    }
    w + ln_gamma(w + 0.5) - half_ln_two_pi() - w * cln(w)
}

fn check_sector(u: Complex64, what: &str) -> Result<()> {
    if u.im == 0.0 && u.re < 0.0 {
        return Err(Error::Domain(format!("{what} needs |arg| < pi, got {u}")));
    }
    Ok(())
}

fn nodes_f64(nodes: usize) -> Result<f64> {
    if nodes == 0 {
        return Err(Error::InvalidParams(format!("node count must be positive")));
    }
    Ok(nodes as f64)
}

/// The selected D-function at `z` for `nodes` lattice points.
///
/// `ctx` is accepted for interface uniformity; the evaluation runs in binary64,
/// which already exceeds the accuracy the asymptotic formulas can use.
pub fn d_eval(z: Complex64, nodes: usize, which: DSelector, _ctx: &PrecisionCtx) -> Result<LogComplex> {
    let n = nodes_f64(nodes)?;
    let one = Complex64::new(1.0, 0.0);
    let (u, tilde) = match which {
        DSelector::D => (z, false),
        DSelector::Dtilde => (z, true),
        DSelector::Dstar => (one - z, false),
        DSelector::DtildeStar => (one - z, true),
    };
    if tilde {
        check_sector(-u, "Dtilde")?;
        // Dtilde(u) = 1 / D(-u)
        Ok(LogComplex::exp_of(-ln_d_scaled(-u * n)))
    } else {
        check_sector(u, "D")?;
        Ok(LogComplex::exp_of(ln_d_scaled(u * n)))
    }
}

/// Boundary value of a D-function on its cut, taken from `side`.
pub fn d_eval_side(z: Complex64, nodes: usize, which: DSelector, side: Side) -> Result<LogComplex> {
    let zd = displaced(z, side);
    d_eval(zd, nodes, which, &PrecisionCtx::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rel_diff, sum_list};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn log_gamma_reference_values() {
        let g = ln_gamma(c(0.5, 0.0));
        assert!((g.re - 0.5 * PI.ln()).abs() < 1e-14);
        let g = ln_gamma(c(10.0, 0.0)).exp();
        assert!((g.re / 362880.0 - 1.0).abs() < 1e-14);
        // Gamma(1+i) = 0.4980156681183560 - 0.1549498283018107 i
        let g = ln_gamma(c(1.0, 1.0)).exp();
        assert!((g - c(0.4980156681183560, -0.1549498283018107)).norm() < 1e-14);
        let g = ln_gamma(c(-2.5, 0.0)).exp();
        assert!((g.re + 0.9453087204829419).abs() < 1e-14);
        assert!(ln_gamma(c(-3.0, 400.0)).re.is_finite());
    }

    #[test]
    fn limit_at_origin() {
        let d = d_eval(c(0.0, 0.0), 50, DSelector::D, &PrecisionCtx::default()).unwrap();
        assert!((d.to_complex() - c(0.5f64.sqrt(), 0.0)).norm() < 1e-15);
        let ds = d_eval(c(1.0, 0.0), 50, DSelector::Dstar, &PrecisionCtx::default()).unwrap();
        assert!((ds.to_complex().re - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn reflection_identity() {
        let k = PrecisionCtx::default();
        for &z in &[c(0.3, 0.2), c(0.3, -0.2), c(-0.4, 0.7), c(1.6, -0.05)] {
            let d = d_eval(z, 40, DSelector::D, &k).unwrap();
            let dt = d_eval(z, 40, DSelector::Dtilde, &k).unwrap();
            let s = if z.im > 0.0 { 1.0 } else { -1.0 };
            let w = z * 40.0 * PI;
            let i = c(0.0, 1.0);
            let e_plus = LogComplex::exp_of(i * w);
            let e_minus = LogComplex::exp_of(-i * w);
            // 2 cos(w) e^{+-iw} = 1 + e^{+-2iw}
            let twice = if s > 0.0 { e_plus.mul(e_plus) } else { e_minus.mul(e_minus) };
            let factor = sum_list(&[LogComplex::ONE, twice]);
            assert!(rel_diff(factor.mul(d), dt).unwrap() < 1e-10, "{z}");
        }
    }

    #[test]
    fn close_to_one_away_from_origin() {
        let k = PrecisionCtx::default();
        let n = 50;
        let nodes = 100;
        for i in 0..20 {
            let r = 0.1 + 1.9 * i as f64 / 19.0;
            for j in 0..7 {
                let th = -0.75 * PI + 1.5 * PI * j as f64 / 6.0;
                let z = Complex64::from_polar(r, th);
                let d = d_eval(z, nodes, DSelector::D, &k).unwrap().to_complex();
                assert!((d - 1.0).norm() < 1.0 / n as f64, "{z}");
            }
        }
    }

    #[test]
    fn sector_is_enforced() {
        let k = PrecisionCtx::default();
        assert!(d_eval(c(-0.5, 0.0), 10, DSelector::D, &k).is_err());
        assert!(d_eval(c(0.5, 0.0), 10, DSelector::Dtilde, &k).is_err());
        assert!(d_eval(c(1.5, 0.0), 10, DSelector::Dstar, &k).is_err());
        assert!(d_eval_side(c(-0.5, 0.0), 10, DSelector::D, Side::Upper).is_ok());
    }

    #[test]
    fn large_lattices_do_not_overflow() {
        let k = PrecisionCtx::default();
        for &z in &[c(10.0, 0.0), c(-10.0, 1e-3), c(0.0, 10.0), c(3.0, -7.0)] {
            let d = d_eval(z, 1_000_000, DSelector::D, &k).unwrap();
            assert!(d.is_finite());
        }
    }
}
