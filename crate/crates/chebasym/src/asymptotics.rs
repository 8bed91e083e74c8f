//! Global Airy-type evaluation of `pi_{N,n}(N z - 1/2)`, the simplified
//! real-line forms, fixed-x comparators, and error measurement against the
//! exact oracle.
//!
//! The global formulas are assembled in the form
//! `cos(N pi z) D(z) [dominant Airy pair] + e^{+-i N pi z} D(z)^{-1} [recessive pair]`,
//! where the dominant pair is the rotated Airy combination that equals
//! `sin Ai + cos D Bi` after the connection formula is applied. This keeps
//! every term well conditioned off the real axis. Left of the real origin
//! (or right of 1) the products `cos D` and `1/D` are rewritten through the
//! reflection identity so no pole of `D` is ever evaluated.

use alloc::format;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::airy::{ai_pair, OMEGA, OMEGA2};
use crate::dfun::{d_eval, DSelector};
use crate::exact::{monic_at_scaled_point, monic_factor, ChebParams, Oracle};
use crate::error::{Error, Result};
use crate::mp::ratio_to_f64;
use crate::numerics::{branch_quart_ratio, csqrt, displaced, rel_diff, sum_list, LogComplex, PrecisionCtx, Side};
use crate::phase::{map_value, phase_bundle, MapKind, MapValue};

/// How far past the dispatch line each global formula is still accepted.
pub const OVERLAP_MARGIN: f64 = 0.1;
/// Inner range of the simplified form ends at `a - DELTA_FRACTION (b - a)`.
pub const DELTA_FRACTION: f64 = 0.05;
/// Relative size below which an exact value counts as a structural zero.
pub const ZERO_FLAG_EPS: f64 = 0.05;

/// Which asymptotic form produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormulaKind {
    /// Global form anchored at `a`.
    Left,
    /// Global form anchored at `b`.
    Right,
    /// Simplified form on `(0, a - delta]`.
    SimpleInner,
    /// Simplified form on the negative axis.
    SimpleNegative,
    PanWongPos,
    PanWongNeg,
    FixedXPos,
    FixedXNeg,
    /// `Left` or `Right` by the dispatch line.
    Auto,
}

impl FormulaKind {
    pub const ALL: [FormulaKind; 9] = [
        FormulaKind::Left,
        FormulaKind::Right,
        FormulaKind::SimpleInner,
        FormulaKind::SimpleNegative,
        FormulaKind::PanWongPos,
        FormulaKind::PanWongNeg,
        FormulaKind::FixedXPos,
        FormulaKind::FixedXNeg,
        FormulaKind::Auto,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormulaKind::Left => "left",
            FormulaKind::Right => "right",
            FormulaKind::SimpleInner => "simple-inner",
            FormulaKind::SimpleNegative => "simple-negative",
            FormulaKind::PanWongPos => "pan-wong-pos",
            FormulaKind::PanWongNeg => "pan-wong-neg",
            FormulaKind::FixedXPos => "fixed-x-pos",
            FormulaKind::FixedXNeg => "fixed-x-neg",
            FormulaKind::Auto => "auto",
        }
    }

    pub fn parse(s: &str) -> Option<FormulaKind> {
        FormulaKind::ALL.iter().copied().find(|k| k.name() == s)
    }

    fn fixed_x(self) -> Option<FixedXForm> {
        match self {
            FormulaKind::PanWongPos => Some(FixedXForm::PanWongPos),
            FormulaKind::PanWongNeg => Some(FixedXForm::PanWongNeg),
            FormulaKind::FixedXPos => Some(FixedXForm::FixedXPos),
            FormulaKind::FixedXNeg => Some(FixedXForm::FixedXNeg),
            _ => None,
        }
    }
}

impl core::fmt::Display for FormulaKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// An asymptotic value with the size of its largest constituent term, the
/// natural yardstick near zeros of the polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: LogComplex,
    /// Natural log of the largest term's modulus.
    pub log_scale: f64,
}

fn ln_sqrt_pi() -> f64 {
    0.5 * PI.ln()
}

fn lc(w: Complex64) -> LogComplex {
    LogComplex::from_complex(w)
}

/// `cos(N pi z)` and `e^{s i N pi z}` in log scale, `s` the side sign.
fn trig_parts(z: Complex64, nodes: usize, side: Side) -> (LogComplex, LogComplex) {
    let w = Complex64::new(0.0, PI * nodes as f64) * z;
    let e_plus = LogComplex::exp_of(w);
    let e_minus = LogComplex::exp_of(-w);
    let cos = sum_list(&[e_plus, e_minus]).mul(LogComplex::from_real(0.5));
    (cos, if side == Side::Upper { e_plus } else { e_minus })
}

/// `cos(N pi z) D(u)` and `1/D(u)` where `u` is `z` or `1 - z`.
///
/// For `Re u < 0` both come from `Dtilde(u) = 1/D(-u)`:
/// `cos D = Dtilde / (2E)` and `1/D = 2 cos E / Dtilde`.
fn d_parts(u: Complex64, nodes: usize, cos: LogComplex, e: LogComplex) -> Result<(LogComplex, LogComplex)> {
    let ctx = PrecisionCtx::default();
    if u.re < 0.0 {
        let dt = d_eval(u, nodes, DSelector::Dtilde, &ctx)?;
        let two_e = e.mul(LogComplex::from_real(2.0));
        Ok((dt.div(two_e)?, cos.mul(two_e).div(dt)?))
    } else {
        let d = d_eval(u, nodes, DSelector::D, &ctx)?;
        Ok((cos.mul(d), d.recip()?))
    }
}

/// `[rotated Airy pair]` and `[plain Airy pair]` combined into the final
/// bracket. `rot_side` picks the rotation `omega` (upper) or `omega^2` (lower).
fn airy_bracket(
    f: &MapValue,
    amp: LogComplex,
    rot_side: Side,
    cos_d: LogComplex,
    inv_d: LogComplex,
    e: LogComplex,
    ctx: &PrecisionCtx,
) -> Result<Evaluation> {
    let inv_amp = amp.recip()?;
    let (rot, dom_coef, rec_coef) = match rot_side {
        Side::Upper => (OMEGA, Complex64::new(0.0, -2.0) * OMEGA, Complex64::new(0.0, -1.0)),
        Side::Lower => (OMEGA2, Complex64::new(0.0, 2.0) * OMEGA2, Complex64::new(0.0, 1.0)),
    };
    let (ai_r, aip_r) = ai_pair(rot * f.value, ctx);
    let dominant = sum_list(&[ai_r.mul(amp), aip_r.mul(lc(rot)).mul(inv_amp)]);
    let (ai, aip) = ai_pair(f.value, ctx);
    let recessive = sum_list(&[ai.mul(amp), aip.mul(inv_amp)]);
    let t1 = cos_d.mul(lc(dom_coef)).mul(dominant);
    let t2 = inv_d.mul(e).mul(lc(rec_coef)).mul(recessive);
    Ok(Evaluation { value: sum_list(&[t1, t2]), log_scale: t1.log_mod.max(t2.log_mod) })
}

/// `(b - a)^{1/4} ((3/2) n K)^{1/6}`, the amplitude at the anchoring turning point.
fn turning_amplitude(p: &ChebParams) -> LogComplex {
    let k = p.equilibrium().turning_constant();
    let v = (p.b - p.a) * (1.5 * p.n as f64 * k).powf(2.0 / 3.0);
    LogComplex::new(0.25 * v.ln(), 0.0)
}

fn amplitude(f: &MapValue, q: Complex64) -> LogComplex {
    LogComplex::new(0.25 * f.modulus.ln(), 0.25 * f.arg).mul_complex(q)
}

fn side_for(z: Complex64, side: Option<Side>) -> Side {
    Side::of(z, side.unwrap_or(Side::Upper))
}

/// Global form anchored at `a`, valid for `Re z <= x0 + OVERLAP_MARGIN`.
/// Real points use the upper boundary values.
pub fn eval_left(z: Complex64, p: &ChebParams, ctx: &PrecisionCtx) -> Result<LogComplex> {
    Ok(eval_left_side(z, p, ctx, None)?.value)
}

/// As [`eval_left`], with the side used on the real axis.
pub fn eval_left_side(z: Complex64, p: &ChebParams, ctx: &PrecisionCtx, side: Option<Side>) -> Result<Evaluation> {
    if !(z.re <= p.x0 + OVERLAP_MARGIN) {
        return Err(Error::Domain(format!("left form needs Re z <= {}, got {z}", p.x0 + OVERLAP_MARGIN)));
    }
    let side = side_for(z, side);
    let eq = p.equilibrium();
    let pb = phase_bundle(&eq, z, Some(side))?;
    let f = map_value(&eq, &pb, z, p.n, MapKind::Tilde);
    let amp = if z.im == 0.0 && z.re == p.a {
        turning_amplitude(p)
    } else {
        amplitude(&f, branch_quart_ratio(z, p.a, p.b, false, Some(side))?)
    };
    let (cos, e) = trig_parts(z, p.nodes, side);
    let (cos_d, inv_d) = d_parts(z, p.nodes, cos, e)?;
    let body = airy_bracket(&f, amp, side, cos_d, inv_d, e, ctx)?;
    let n = p.n as f64;
    let pre = LogComplex::new(n * (p.nodes as f64).ln() + ln_sqrt_pi() + n * p.l / 2.0, n * PI);
    Ok(Evaluation { value: body.value.mul(pre), log_scale: body.log_scale + pre.log_mod })
}

/// Global form anchored at `b`, valid for `Re z >= x0 - OVERLAP_MARGIN`.
pub fn eval_right(z: Complex64, p: &ChebParams, ctx: &PrecisionCtx) -> Result<LogComplex> {
    Ok(eval_right_side(z, p, ctx, None)?.value)
}

/// As [`eval_right`], with the side used on the real axis.
pub fn eval_right_side(z: Complex64, p: &ChebParams, ctx: &PrecisionCtx, side: Option<Side>) -> Result<Evaluation> {
    if !(z.re >= p.x0 - OVERLAP_MARGIN) {
        return Err(Error::Domain(format!("right form needs Re z >= {}, got {z}", p.x0 - OVERLAP_MARGIN)));
    }
    let side = side_for(z, side);
    let eq = p.equilibrium();
    let pb = phase_bundle(&eq, z, Some(side))?;
    let f = map_value(&eq, &pb, z, p.n, MapKind::Star);
    let amp = if z.im == 0.0 && z.re == p.b {
        turning_amplitude(p)
    } else {
        amplitude(&f, branch_quart_ratio(z, p.a, p.b, true, Some(side))?)
    };
    let (cos, e) = trig_parts(z, p.nodes, side);
    let u = Complex64::new(1.0, 0.0) - z;
    let (cos_d, inv_d) = d_parts(u, p.nodes, cos, e)?;
    let body = airy_bracket(&f, amp, side.flip(), cos_d, inv_d, e, ctx)?;
    let n = p.n as f64;
    let pre = LogComplex::new(n * (p.nodes as f64).ln() + ln_sqrt_pi() + n * p.l / 2.0, p.nodes as f64 * PI);
    Ok(Evaluation { value: body.value.mul(pre), log_scale: body.log_scale + pre.log_mod })
}

/// The global form selected by the dispatch line `Re z = x0`; ties go left.
pub fn eval_auto(z: Complex64, p: &ChebParams, ctx: &PrecisionCtx) -> Result<(LogComplex, FormulaKind)> {
    let (e, k) = eval_auto_side(z, p, ctx, None)?;
    Ok((e.value, k))
}

pub fn eval_auto_side(
    z: Complex64,
    p: &ChebParams,
    ctx: &PrecisionCtx,
    side: Option<Side>,
) -> Result<(Evaluation, FormulaKind)> {
    if z.re <= p.x0 {
        Ok((eval_left_side(z, p, ctx, side)?, FormulaKind::Left))
    } else {
        Ok((eval_right_side(z, p, ctx, side)?, FormulaKind::Right))
    }
}

/// Simplified real-line forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SimpleBranch {
    /// `0 < x <= a - delta`
    Inner,
    /// `x < 0`
    Negative,
}

/// `(sqrt(z-a) + sqrt(z-b)) / ((z-a)^{1/4} (z-b)^{1/4})` as an upper limit.
fn endpoint_bracket(x: f64, a: f64, b: f64) -> Complex64 {
    let z = displaced(Complex64::new(x, 0.0), Side::Upper);
    let (sa, sb) = (csqrt(z - a), csqrt(z - b));
    (sa + sb) / (csqrt(sa) * csqrt(sb))
}

/// Leading-order simplified form at a real point. The inner form vanishes at
/// the zeros of `cos(N pi x)`, where the polynomial does not.
pub fn eval_simple(x: f64, p: &ChebParams, ctx: &PrecisionCtx, branch: SimpleBranch) -> Result<LogComplex> {
    Ok(eval_simple_parts(x, p, ctx, branch)?.value)
}

fn eval_simple_parts(x: f64, p: &ChebParams, _ctx: &PrecisionCtx, branch: SimpleBranch) -> Result<Evaluation> {
    let delta = DELTA_FRACTION * (p.b - p.a);
    let eq = p.equilibrium();
    let z = Complex64::new(x, 0.0);
    let n = p.n as f64;
    let ln_nodes = (p.nodes as f64).ln();
    let bracket = lc(endpoint_bracket(x, p.a, p.b));
    let pb = phase_bundle(&eq, z, Some(Side::Upper))?;
    let k = PrecisionCtx::default();
    match branch {
        SimpleBranch::Inner => {
            if !(x > 0.0 && x <= p.a - delta) {
                return Err(Error::Domain(format!("inner form needs 0 < x <= {}, got {x}", p.a - delta)));
            }
            let (cos, _) = trig_parts(z, p.nodes, Side::Upper);
            let d = d_eval(z, p.nodes, DSelector::D, &k)?;
            let body = LogComplex::new(n * ln_nodes + n * p.l / 2.0, n * PI)
                .mul(LogComplex::exp_of(-pb.phi_tilde * n))
                .mul(d)
                .mul(bracket);
            Ok(Evaluation { value: body.mul(cos), log_scale: body.log_mod })
        }
        SimpleBranch::Negative => {
            if !(x < 0.0) {
                return Err(Error::Domain(format!("negative form needs x < 0, got {x}")));
            }
            let dt = d_eval(z, p.nodes, DSelector::Dtilde, &k)?;
            let v = LogComplex::new(n * ln_nodes + n * p.l / 2.0 - core::f64::consts::LN_2, 0.0)
                .mul(LogComplex::exp_of(-pb.phi * n))
                .mul(dt)
                .mul(bracket);
            Ok(Evaluation { value: v, log_scale: v.log_mod })
        }
    }
}

/// Fixed-x comparators for `t_n(x, N)` (not monic).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixedXForm {
    PanWongPos,
    PanWongNeg,
    FixedXPos,
    FixedXNeg,
}

/// `ln|Gamma(x)|` and its sign; `None` at a pole.
fn ln_gamma_signed(x: f64) -> Option<(f64, f64)> {
    if x <= 0.0 && x == x.floor() {
        return None;
    }
    let (v, s) = libm::lgamma_r(x);
    Some((v, if s < 0 { PI } else { 0.0 }))
}

/// `1/Gamma(x)` in log scale, zero at the poles of Gamma.
fn recip_gamma(x: f64) -> LogComplex {
    match ln_gamma_signed(x) {
        Some((v, ph)) => LogComplex::new(-v, -ph),
        None => LogComplex::ZERO,
    }
}

fn sin_pi(x: f64) -> LogComplex {
    LogComplex::from_real(libm::sin(PI * libm::remainder(x, 2.0)))
}

/// Leading-order fixed-x value of `t_n(x, N)` in one of the four comparator forms.
pub fn pan_wong(x: f64, n: usize, nodes: usize, which: FixedXForm) -> Result<LogComplex> {
    if n == 0 || n >= nodes || !x.is_finite() {
        return Err(Error::InvalidParams(format!("need finite x and 1 <= n < N, got x = {x}, n = {n}, N = {nodes}")));
    }
    let nf = n as f64;
    let big = nodes as f64;
    let c = nf / big;
    let ln_n = nf.ln();
    let sign_n = nf * PI;
    // Gamma(x + 1) sin(pi x) / pi, shared by the positive forms
    let pos_core = || -> Result<LogComplex> {
        let (g, ph) = ln_gamma_signed(x + 1.0).ok_or_else(|| Error::Domain(format!("Gamma(x + 1) has a pole at x = {x}")))?;
        Ok(LogComplex::new(g - PI.ln(), ph).mul(sin_pi(x)))
    };
    let lg = |t: f64| libm::lgamma(t);
    let v = match which {
        FixedXForm::PanWongPos => LogComplex::new(
            lg(nf + big + 1.0) + x * (big - 1.0).ln() - (2.0 * x + 2.0) * ln_n - lg(big),
            sign_n + PI,
        )
        .mul(pos_core()?),
        FixedXForm::PanWongNeg => LogComplex::new(
            lg(nf + big + 1.0) + x * (big - 1.0).ln() - (2.0 * x + 2.0) * ln_n - lg(big),
            sign_n,
        )
        .mul(recip_gamma(-x)),
        FixedXForm::FixedXPos => LogComplex::new(
            -(2.0 * x + 2.0) * ln_n + (nf + x + 1.0) * big.ln() + (nf + big + 0.5) * c.ln_1p() - nf,
            sign_n + PI,
        )
        .mul(pos_core()?),
        FixedXForm::FixedXNeg => LogComplex::new(
            nf * big.ln() - (2.0 * x + 2.0) * ln_n + (nf + big + 0.5) * c.ln_1p() + (x + 1.0) * big.ln() - nf,
            sign_n,
        )
        .mul(recip_gamma(-x)),
    };
    Ok(v)
}

/// One grid point's comparison between an asymptotic form and the oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRecord {
    pub z: Complex64,
    pub n: usize,
    pub nodes: usize,
    /// The form actually used (`Auto` is resolved).
    pub formula: FormulaKind,
    pub exact: LogComplex,
    pub asym: LogComplex,
    pub rel_err: f64,
    /// The exact value is below `ZERO_FLAG_EPS` times the asymptotic scale;
    /// `rel_err` is then measured against that floor instead.
    pub flagged_zero: bool,
}

/// The asymptotic value of `pi_{N,n}(N z - 1/2)` by the requested form.
pub fn eval_formula(z: Complex64, p: &ChebParams, ctx: &PrecisionCtx, formula: FormulaKind) -> Result<(Evaluation, FormulaKind)> {
    match formula {
        FormulaKind::Auto => eval_auto_side(z, p, ctx, None),
        FormulaKind::Left => Ok((eval_left_side(z, p, ctx, None)?, formula)),
        FormulaKind::Right => Ok((eval_right_side(z, p, ctx, None)?, formula)),
        FormulaKind::SimpleInner | FormulaKind::SimpleNegative => {
            if z.im != 0.0 {
                return Err(Error::Domain(format!("simplified forms need a real point, got {z}")));
            }
            let branch = if formula == FormulaKind::SimpleInner { SimpleBranch::Inner } else { SimpleBranch::Negative };
            Ok((eval_simple_parts(z.re, p, ctx, branch)?, formula))
        }
        _ => {
            if z.im != 0.0 {
                return Err(Error::Domain(format!("fixed-x forms need a real point, got {z}")));
            }
            let which = formula.fixed_x().expect("fixed-x selector");
            let x = p.nodes as f64 * z.re - 0.5;
            let monic = LogComplex::new(ratio_to_f64(&monic_factor(p.n)).ln(), 0.0);
            let monic = if monic.log_mod.is_finite() { monic } else { LogComplex::new(ln_monic_factor(p.n), 0.0) };
            let v = pan_wong(x, p.n, p.nodes, which)?.mul(monic);
            Ok((Evaluation { value: v, log_scale: v.log_mod }, formula))
        }
    }
}

fn ln_monic_factor(n: usize) -> f64 {
    2.0 * libm::lgamma(n as f64 + 1.0) - libm::lgamma(2.0 * n as f64 + 1.0)
}

/// Compares `formula` with the exact rational oracle at `z`.
pub fn error_record(z: Complex64, p: &ChebParams, ctx: &PrecisionCtx, formula: FormulaKind) -> Result<ErrorRecord> {
    error_record_with(z, p, ctx, formula, Oracle::Exact)
}

/// As [`error_record`] with an explicit oracle.
pub fn error_record_with(
    z: Complex64,
    p: &ChebParams,
    ctx: &PrecisionCtx,
    formula: FormulaKind,
    oracle: Oracle,
) -> Result<ErrorRecord> {
    let (ev, used) = eval_formula(z, p, ctx, formula)?;
    let exact = monic_at_scaled_point(p.n, p.nodes, z, oracle)?;
    let floor = ev.log_scale + ZERO_FLAG_EPS.ln();
    let flagged_zero = exact.log_mod < floor;
    let rel_err = if flagged_zero {
        let diff = sum_list(&[ev.value, exact.neg()]);
        (diff.log_mod - floor).exp()
    } else {
        rel_diff(ev.value, exact)?
    };
    Ok(ErrorRecord { z, n: p.n, nodes: p.nodes, formula: used, exact, asym: ev.value, rel_err, flagged_zero })
}
