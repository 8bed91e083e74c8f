//! Airy functions `Ai, Ai', Bi, Bi'` of complex argument in log scale.
//!
//! Small arguments use the Maclaurin series in multiprecision (the series
//! cancels badly off the negative axis, so guard bits grow like |z|^{3/2}).
//! Large arguments use the asymptotic expansion of `Ai` in |arg z| <= 2pi/3
//! and the connection formulas everywhere else.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use core::f64::consts::{LOG2_E, PI};

use astro_float::{BigFloat, Consts};
use num_complex::Complex64;
use spin::RwLock;

use crate::mp::{bf_u64, ln_gamma_real, MpComplex, RM};
use crate::numerics::{sum_list, LogComplex, PrecisionCtx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AirySelector {
    Ai,
    AiPrime,
    Bi,
    BiPrime,
}

/// e^{2 pi i / 3}
pub const OMEGA: Complex64 = Complex64 { re: -0.5, im: 0.8660254037844386 };
/// e^{-2 pi i / 3}
pub const OMEGA2: Complex64 = Complex64 { re: -0.5, im: -0.8660254037844386 };

const SECTOR: f64 = 2.0 * PI / 3.0;

/// Radius below which the Maclaurin series is used.
pub fn switch_radius(ctx: &PrecisionCtx) -> f64 {
    (ctx.bits as f64 / 10.0).max(8.0)
}

struct SeriesConstants {
    ai0: BigFloat,
    neg_ai0_prime: BigFloat,
    sqrt3: BigFloat,
}

static CONSTANTS: RwLock<BTreeMap<usize, Arc<SeriesConstants>>> = RwLock::new(BTreeMap::new());

fn series_constants(p: usize) -> Arc<SeriesConstants> {
    if let Some(k) = CONSTANTS.read().get(&p) {
        return k.clone();
    }
    let mut cache = CONSTANTS.write();
    if let Some(k) = cache.get(&p) {
        return k.clone();
    }
    let wp = p + 64;
    let mut cc = Consts::new().expect("constant cache allocation");
    let three = BigFloat::from_f64(3.0, wp);
    let third = BigFloat::from_f64(1.0, wp).div(&three, wp, RM);
    let gamma_third = ln_gamma_real(&third, wp, &mut cc).exp(wp, RM, &mut cc);
    let cbrt3 = three.cbrt(wp, RM);
    let two_pi = cc.pi(wp, RM).mul(&BigFloat::from_f64(2.0, wp), wp, RM);
    // Ai(0) = 3^{-2/3}/Gamma(2/3) = 3^{-1/6} Gamma(1/3) / (2 pi)
    let ai0 = gamma_third.div(&cbrt3.sqrt(wp, RM), wp, RM).div(&two_pi, wp, RM);
    // -Ai'(0) = 3^{-1/3}/Gamma(1/3)
    let neg_ai0_prime = BigFloat::from_f64(1.0, wp).div(&cbrt3.mul(&gamma_third, wp, RM), wp, RM);
    let sqrt3 = three.sqrt(wp, RM);
    let k = Arc::new(SeriesConstants { ai0, neg_ai0_prime, sqrt3 });
    cache.insert(p, k.clone());
    k
}

/// `[Ai, Ai', Bi, Bi']` at `z` from the Maclaurin series, accurate to about
/// `bits` bits relative to each value.
pub fn airy_series(z: Complex64, bits: u32) -> [LogComplex; 4] {
    let (v, _) = series_values(z, bits);
    [v[0].to_log(), v[1].to_log(), v[2].to_log(), v[3].to_log()]
}

/// `Ai Bi' - Ai' Bi` formed at the series' working precision, so the
/// cancellation between the two products costs no accuracy.
pub fn series_wronskian(z: Complex64, bits: u32) -> LogComplex {
    let ([ai, aip, bi, bip], wp) = series_values(z, bits);
    ai.mul(&bip, wp).sub(&aip.mul(&bi, wp), wp).to_log()
}

fn series_values(z: Complex64, bits: u32) -> ([MpComplex; 4], usize) {
    let r = z.norm();
    let zeta_bits = (2.0 / 3.0 * r.powf(1.5) * LOG2_E).ceil() as usize;
    let wp = ((bits as usize + 2 * zeta_bits + 64 + 63) / 64) * 64;
    let k = series_constants(wp);
    let zz = MpComplex::from_f64(z.re, z.im, wp);
    let z2 = zz.mul(&zz, wp);
    let z3 = z2.mul(&zz, wp);

    // f = sum 3^k (1/3)_k z^{3k}/(3k)!, g = sum 3^k (2/3)_k z^{3k+1}/(3k+1)!
    let mut tf = MpComplex::from_f64(1.0, 0.0, wp);
    let mut tg = zz.clone();
    let mut tfp = z2.div_real(&BigFloat::from_f64(2.0, wp), wp);
    let mut tgp = MpComplex::from_f64(1.0, 0.0, wp);
    let (mut f, mut g, mut fp, mut gp) = (tf.clone(), tg.clone(), tfp.clone(), tgp.clone());
    let cutoff = -((bits as usize + zeta_bits + 24) as f64);
    let mut m = 0u64;
    loop {
        let d = |a: u64, b: u64| bf_u64(a * b, wp);
        tf = tf.mul(&z3, wp).div_real(&d(3 * m + 2, 3 * m + 3), wp);
        tg = tg.mul(&z3, wp).div_real(&d(3 * m + 3, 3 * m + 4), wp);
        tfp = tfp.mul(&z3, wp).div_real(&d(3 * m + 3, 3 * m + 5), wp);
        tgp = tgp.mul(&z3, wp).div_real(&d(3 * m + 1, 3 * m + 3), wp);
        f = f.add(&tf, wp);
        g = g.add(&tg, wp);
        fp = fp.add(&tfp, wp);
        gp = gp.add(&tgp, wp);
        m += 1;
        let biggest = tf.log2_mag().max(tg.log2_mag()).max(tfp.log2_mag()).max(tgp.log2_mag());
        if biggest < cutoff || m > 100_000 {
            break;
        }
    }
    let comb = |u: &MpComplex, v: &MpComplex, plus: bool| {
        let a = u.scale(&k.ai0, wp);
        let b = v.scale(&k.neg_ai0_prime, wp);
        if plus {
            a.add(&b, wp).scale(&k.sqrt3, wp)
        } else {
            a.sub(&b, wp)
        }
    };
    (
        [comb(&f, &g, false), comb(&fp, &gp, false), comb(&f, &g, true), comb(&fp, &gp, true)],
        wp,
    )
}

/// Result of the asymptotic expansion of `Ai` and `Ai'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticAi {
    pub ai: LogComplex,
    pub ai_prime: LogComplex,
    /// Magnitude of the smallest term reached, relative to the leading term.
    pub error_bound: f64,
}

/// Asymptotic expansion of `Ai` and `Ai'` for large |z|, |arg z| <= 2pi/3,
/// truncated adaptively at the smallest term.
pub fn airy_asymptotic(z: Complex64) -> AsymptoticAi {
    let lnz = crate::numerics::cln(z);
    let zeta = (lnz * 1.5).exp() * (2.0 / 3.0);
    let inv = zeta.inv();
    let mut su = Complex64::new(1.0, 0.0);
    let mut sv = Complex64::new(1.0, 0.0);
    let mut u = 1.0f64;
    let mut pw = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    let mut bound = 1.0;
    for k in 1..400u32 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        pw *= -inv;
        let size = u * pw.norm();
        if size > last {
            break;
        }
        su += pw * u;
        sv += pw * v;
        last = size;
        bound = size;
        if size < 1e-17 {
            break;
        }
    }
    let ln_norm = (2.0 * PI.sqrt()).ln();
    let head = -zeta - lnz * 0.25;
    let ai = LogComplex::exp_of(head - ln_norm).mul_complex(su);
    let head_p = -zeta + lnz * 0.25;
    let ai_prime = LogComplex::exp_of(head_p - ln_norm).mul_complex(sv).neg();
    AsymptoticAi { ai, ai_prime, error_bound: bound }
}

/// `(Ai, Ai')` at `z`.
pub fn ai_pair(z: Complex64, ctx: &PrecisionCtx) -> (LogComplex, LogComplex) {
    if z.norm() <= switch_radius(ctx) {
        let s = airy_series(z, ctx.bits);
        return (s[0], s[1]);
    }
    if z.im.atan2(z.re).abs() <= SECTOR + 1e-12 {
        let r = airy_asymptotic(z);
        return (r.ai, r.ai_prime);
    }
    // Ai(z) = -w Ai(wz) - w^2 Ai(w^2 z), Ai'(z) = -w^2 Ai'(wz) - w Ai'(w^2 z)
    let a1 = airy_asymptotic(OMEGA * z);
    let a2 = airy_asymptotic(OMEGA2 * z);
    let lw = LogComplex::from_complex(OMEGA);
    let lw2 = LogComplex::from_complex(OMEGA2);
    let ai = sum_list(&[a1.ai.mul(lw).neg(), a2.ai.mul(lw2).neg()]);
    let aip = sum_list(&[a1.ai_prime.mul(lw2).neg(), a2.ai_prime.mul(lw).neg()]);
    (ai, aip)
}

/// `(Bi, Bi')` at `z`.
pub fn bi_pair(z: Complex64, ctx: &PrecisionCtx) -> (LogComplex, LogComplex) {
    if z.norm() <= switch_radius(ctx) {
        let s = airy_series(z, ctx.bits);
        return (s[2], s[3]);
    }
    // Bi(z) = e^{i pi/6} Ai(wz) + e^{-i pi/6} Ai(w^2 z)
    let (a1, a1p) = ai_pair(OMEGA * z, ctx);
    let (a2, a2p) = ai_pair(OMEGA2 * z, ctx);
    let e_plus = LogComplex::new(0.0, PI / 6.0);
    let e_minus = LogComplex::new(0.0, -PI / 6.0);
    let lw = LogComplex::from_complex(OMEGA);
    let lw2 = LogComplex::from_complex(OMEGA2);
    let bi = sum_list(&[a1.mul(e_plus), a2.mul(e_minus)]);
    let bip = sum_list(&[a1p.mul(e_plus).mul(lw), a2p.mul(e_minus).mul(lw2)]);
    (bi, bip)
}

/// One Airy function at `z`.
pub fn airy_eval(z: Complex64, which: AirySelector, ctx: &PrecisionCtx) -> LogComplex {
    match which {
        AirySelector::Ai => ai_pair(z, ctx).0,
        AirySelector::AiPrime => ai_pair(z, ctx).1,
        AirySelector::Bi => bi_pair(z, ctx).0,
        AirySelector::BiPrime => bi_pair(z, ctx).1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rel_diff;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::default()
    }

    #[test]
    fn values_at_origin() {
        let k = ctx();
        let ai = airy_eval(c(0.0, 0.0), AirySelector::Ai, &k).to_complex();
        let bi = airy_eval(c(0.0, 0.0), AirySelector::Bi, &k).to_complex();
        assert!((ai.re - 0.355028053887817239).abs() < 1e-16);
        assert!((bi.re - 0.614926627446000736).abs() < 1e-15);
        let aip = airy_eval(c(0.0, 0.0), AirySelector::AiPrime, &k).to_complex();
        assert!((aip.re + 0.258819403792806798).abs() < 1e-16);
    }

    #[test]
    fn series_and_expansion_near_five() {
        let s = airy_series(c(5.0, 0.0), 64)[0];
        assert!((s.to_complex().re / 1.0834442813607441e-4 - 1.0).abs() < 1e-14);
        let a = airy_asymptotic(c(5.0, 0.0));
        let d = rel_diff(a.ai, s).unwrap();
        assert!(d < 2.0 * a.error_bound, "{d} vs bound {}", a.error_bound);
    }

    #[test]
    fn series_and_expansion_at_switch_radius() {
        for &z in &[c(8.0, 0.0), c(-4.0, 6.9), c(0.0, -8.0), c(5.7, 5.7)] {
            let s = airy_series(z, 64);
            let a = airy_asymptotic(z);
            assert!(rel_diff(a.ai, s[0]).unwrap() < 1e-10, "{z}");
            assert!(rel_diff(a.ai_prime, s[1]).unwrap() < 1e-10, "{z}");
        }
    }

    #[test]
    fn rotation_identity() {
        let k = ctx();
        for &z in &[c(1.0, 1.0), c(-3.0, 2.0), c(12.0, -7.0), c(-20.0, 0.5)] {
            let t0 = airy_eval(z, AirySelector::Ai, &k);
            let t1 = airy_eval(OMEGA * z, AirySelector::Ai, &k).mul_complex(OMEGA);
            let t2 = airy_eval(OMEGA2 * z, AirySelector::Ai, &k).mul_complex(OMEGA2);
            let scale = t0.log_mod.max(t1.log_mod).max(t2.log_mod);
            let resid = sum_list(&[t0, t1, t2]);
            assert!(resid.is_zero() || resid.log_mod - scale < (k.tol).ln(), "{z}");
        }
    }

    #[test]
    fn wronskian() {
        let want = LogComplex::from_real(1.0 / PI);
        for &z in &[c(0.5, 0.1), c(-6.0, 3.0), c(15.0, 2.0), c(-10.0, -10.0), c(3.0, 9.5), c(-20.0, 0.0)] {
            assert!(rel_diff(series_wronskian(z, 256), want).unwrap() < 1e-10, "{z}");
        }
        // binary64 products: the residual is judged against the size of the products
        let k = ctx();
        for &z in &[c(0.5, 0.1), c(-6.0, 3.0), c(15.0, 2.0), c(30.0, -30.0)] {
            let (ai, aip) = ai_pair(z, &k);
            let (bi, bip) = bi_pair(z, &k);
            let (p, q) = (ai.mul(bip), aip.mul(bi));
            let resid = sum_list(&[p, q.neg(), want.neg()]);
            let scale = p.log_mod.max(q.log_mod).max(want.log_mod);
            assert!(resid.is_zero() || resid.log_mod - scale < (1e-12f64).ln(), "{z}");
        }
    }

    #[test]
    fn huge_arguments_stay_finite() {
        let k = ctx();
        for &z in &[c(1e4, 0.0), c(-1e4, 0.0), c(0.0, 1e4), c(-7e3, 7e3)] {
            for which in [AirySelector::Ai, AirySelector::AiPrime, AirySelector::Bi, AirySelector::BiPrime] {
                let v = airy_eval(z, which, &k);
                assert!(v.is_finite() && !v.is_zero(), "{z} {which:?}");
            }
        }
    }
}
