//! The invariant suite: identities and properties of every library layer,
//! checked at a ratio `c` with seeded random sampling.

use std::f64::consts::PI;

use chebasym::airy::{ai_pair, series_wronskian, OMEGA, OMEGA2};
use chebasym::asymptotics::{error_record, eval_auto, eval_formula, eval_left, eval_right, FormulaKind};
use chebasym::dfun::{d_eval, DSelector};
use chebasym::equilibrium::{density, g_eval, g_prime, EquilibriumData};
use chebasym::exact::{norm_check, norm_closed_form, t_difference, t_hahn, t_recurrence, ChebParams, GaussRational};
use chebasym::numerics::{branch_quart_ratio, branch_sqrt_ab, rel_diff, sum_list};
use chebasym::phase::{phase_bundle, shifted_phase_derivative};
use chebasym::{LogComplex, PrecisionCtx, Side};
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::output::{CheckRow, InvariantReport};

/// Degree used by the checks that need a polynomial instance.
pub const SUITE_DEGREE: usize = 100;
/// Ratios at or above this count as near-degenerate: the turning points
/// nearly merge and the documented looser tolerances apply.
pub const NEAR_DEGENERATE: f64 = 0.95;

/// What the worst observed value must satisfy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    AtMost(f64),
    Below(f64),
    Above(f64),
}

impl Bound {
    fn holds(self, worst: f64) -> bool {
        match self {
            Bound::AtMost(t) => worst <= t,
            Bound::Below(t) => worst < t,
            Bound::Above(t) => worst > t,
        }
    }

    fn limit(self) -> f64 {
        match self {
            Bound::AtMost(t) | Bound::Below(t) | Bound::Above(t) => t,
        }
    }
}

type Outcome = chebasym::Result<(f64, String)>;

struct Suite {
    degenerate: bool,
    rows: Vec<CheckRow>,
}

impl Suite {
    /// Records one check. `relaxed` applies only to near-degenerate ratios
    /// and only when the strict bound is missed.
    fn check(&mut self, module: &str, name: &str, strict: Bound, relaxed: Option<Bound>, run: impl FnOnce() -> Outcome) {
        let (worst, detail) = match run() {
            Ok(v) => v,
            Err(e) => (f64::NAN, format!("error: {e}")),
        };
        let mut row = CheckRow {
            name: name.to_string(),
            module: module.to_string(),
            passed: strict.holds(worst),
            worst,
            tolerance: strict.limit(),
            relaxed: false,
            detail,
        };
        if let (false, true, Some(loose)) = (row.passed, self.degenerate, relaxed) {
            row.relaxed = true;
            row.passed = loose.holds(worst);
            row.tolerance = loose.limit();
        }
        self.rows.push(row);
    }
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn real(q: BigRational) -> GaussRational {
    Complex::new(q, BigRational::zero())
}

fn max(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

/// Runs every check at ratio `c`. `bits` is the working precision of the
/// multiprecision layers.
pub fn run_suite(c: f64, seed: u64, bits: u32) -> chebasym::Result<InvariantReport> {
    let eq = EquilibriumData::new(c)?;
    let ctx = PrecisionCtx::new(bits)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = Suite { degenerate: c >= NEAR_DEGENERATE, rows: Vec::new() };
    numerics_checks(&mut s, &eq, &mut rng);
    exact_checks(&mut s, &mut rng);
    equilibrium_checks(&mut s, &eq, &mut rng);
    phase_checks(&mut s, &eq);
    airy_checks(&mut s, bits, &mut rng);
    let params = ChebParams::from_ratio(SUITE_DEGREE, c)?;
    dfun_checks(&mut s, params.nodes, &mut rng);
    asymptotics_checks(&mut s, &params, &ctx, &mut rng);
    let passed = s.rows.iter().all(|r| r.passed);
    Ok(InvariantReport { c, seed, passed, checks: s.rows })
}

fn numerics_checks(s: &mut Suite, eq: &EquilibriumData, rng: &mut ChaCha8Rng) {
    let m = "numerics";
    let ws: Vec<Complex64> =
        (0..200).map(|_| Complex64::from_polar(10f64.powf(rng.gen_range(-8.0..8.0)), rng.gen_range(-PI..PI))).collect();
    s.check(m, "log_round_trip", Bound::AtMost(1e-13), None, || {
        let worst = max(ws.iter().map(|&w| (LogComplex::from_complex(w).to_complex() - w).norm() / w.norm()));
        Ok((worst, format!("{} points", ws.len())))
    });
    let lc: Vec<LogComplex> =
        (0..600).map(|_| LogComplex::new(rng.gen_range(-50.0..50.0), rng.gen_range(-PI..PI))).collect();
    s.check(m, "mul_associativity", Bound::AtMost(1e-13), None, || {
        let mut worst = 0.0f64;
        for t in lc.chunks(3) {
            worst = worst.max(rel_diff(t[0].mul(t[1]).mul(t[2]), t[0].mul(t[1].mul(t[2])))?);
        }
        Ok((worst, format!("{} triples", lc.len() / 3)))
    });
    let mut lists: Vec<Vec<LogComplex>> = lc.chunks(8).map(|c| c.to_vec()).collect();
    s.check(m, "sum_permutation", Bound::AtMost(1e-13), None, || {
        let mut worst = 0.0f64;
        for terms in lists.iter_mut() {
            let scale = max(terms.iter().map(|t| t.log_mod));
            let first = sum_list(terms);
            terms.shuffle(rng);
            let d = sum_list(&[first, sum_list(terms).neg()]);
            if !d.is_zero() {
                worst = worst.max((d.log_mod - scale).exp());
            }
        }
        Ok((worst, format!("{} lists of 8 terms, relative to the largest term", lists.len())))
    });
    let (a, b) = (eq.a, eq.b);
    let zs: Vec<Complex64> = (0..200)
        .map(|_| {
            let im: f64 = rng.gen_range(0.01..2.0);
            c64(rng.gen_range(-2.0..3.0), if rng.gen::<bool>() { im } else { -im })
        })
        .collect();
    s.check(m, "branch_sqrt_square", Bound::AtMost(1e-13), None, || {
        let mut worst = 0.0f64;
        for &z in &zs {
            let r = branch_sqrt_ab(z, a, b, None)?;
            let want = (z - a) * (z - b);
            worst = worst.max((r * r - want).norm() / want.norm());
        }
        Ok((worst, format!("{} points off the cut", zs.len())))
    });
    s.check(m, "quart_ratio_power", Bound::AtMost(1e-13), None, || {
        let mut worst = 0.0f64;
        for &z in &zs {
            let q = branch_quart_ratio(z, a, b, false, None)?;
            let qi = branch_quart_ratio(z, a, b, true, None)?;
            let want = (z - b) / (z - a);
            worst = worst.max((q.powi(4) - want).norm() / want.norm()).max((q * qi - 1.0).norm());
        }
        Ok((worst, "fourth power and product with the inverse".into()))
    });
}

fn exact_checks(s: &mut Suite, rng: &mut ChaCha8Rng) {
    let m = "exact";
    s.check(m, "triple_agreement", Bound::AtMost(0.0), None, || {
        let (mut total, mut bad) = (0usize, 0usize);
        for nodes in [3usize, 8, 14, 20] {
            let mut xs: Vec<BigRational> = (0..nodes as i64).map(|k| rat(k, 1)).collect();
            xs.extend([rat(1, 3), rat(-1, 3), rat(7, 2)]);
            for n in 0..nodes.min(13) {
                for x in &xs {
                    let x = real(x.clone());
                    let r = t_recurrence(n, nodes, &x)?;
                    total += 1;
                    if r != t_difference(n, nodes, &x)? || r != t_hahn(n, nodes, &x)? {
                        bad += 1;
                    }
                }
            }
        }
        Ok((bad as f64, format!("{} of {total} values agree exactly", total - bad)))
    });
    s.check(m, "orthogonality", Bound::AtMost(0.0), None, || {
        let (mut total, mut equal) = (0usize, 0usize);
        for nodes in [1usize, 4, 9, 14] {
            for n in 0..nodes {
                for k in 0..nodes {
                    total += 1;
                    if norm_check(n, k, nodes)? == norm_closed_form(n, k, nodes)? {
                        equal += 1;
                    }
                }
            }
        }
        Ok(((total - equal) as f64, format!("exact equalities: {equal} of {total} pairs")))
    });
    let cases: Vec<(usize, usize, BigRational, BigRational)> = (0..40)
        .map(|_| {
            let n = rng.gen_range(0..25usize);
            let nodes = n + rng.gen_range(1..20usize);
            (n, nodes, rat(rng.gen_range(-200..200), rng.gen_range(1..13)), rat(rng.gen_range(-20..20), rng.gen_range(1..7)))
        })
        .collect();
    s.check(m, "reflection_parity", Bound::AtMost(0.0), None, || {
        let mut bad = 0usize;
        for (n, nodes, re, im) in &cases {
            let x = Complex::new(re.clone(), im.clone());
            let mirror = Complex::new(rat(*nodes as i64 - 1, 1) - re, -im.clone());
            let u = t_recurrence(*n, *nodes, &x)?.as_rational().cloned().expect("rational");
            let v = t_recurrence(*n, *nodes, &mirror)?.as_rational().cloned().expect("rational");
            let v = if n % 2 == 0 { v } else { -v };
            if u != v {
                bad += 1;
            }
        }
        Ok((bad as f64, format!("{} of {} random rational points", cases.len() - bad, cases.len())))
    });
}

/// Double-exponential quadrature of `f` over `[lo, hi]`.
fn quad(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    quadrature::integrate(f, lo, hi, 1e-15).integral
}

/// `\int_0^1 f(s) mu(s) ds`, split at the turning points where `mu` has
/// square-root corners.
fn against_density(eq: &EquilibriumData, f: impl Fn(f64) -> f64) -> f64 {
    let c = eq.c;
    let w = |s: f64| f(s) * density(s.clamp(0.0, 1.0), c).unwrap_or(f64::NAN);
    quad(&w, 0.0, eq.a) + quad(&w, eq.a, eq.b) + quad(&w, eq.b, 1.0)
}

fn equilibrium_checks(s: &mut Suite, eq: &EquilibriumData, rng: &mut ChaCha8Rng) {
    let m = "equilibrium";
    let c = eq.c;
    s.check(m, "density_integral", Bound::AtMost(1e-12), None, || {
        let total = against_density(eq, |_| 1.0);
        Ok(((total - 1.0).abs(), format!("integral {total}")))
    });
    let xs: Vec<f64> = (0..100).map(|_| rng.gen_range(0.0..1.0)).collect();
    s.check(m, "density_symmetry", Bound::AtMost(1e-12), None, || {
        let mut worst = 0.0f64;
        for &x in &xs {
            worst = worst.max((density(x, c)? - density(1.0 - x, c)?).abs() * c);
        }
        Ok((worst, "relative to 1/c at 100 random points".into()))
    });
    s.check(m, "density_bounds", Bound::AtMost(4.0 * f64::EPSILON), None, || {
        let mut worst = 0.0f64;
        for &x in &xs {
            let mu = density(x, c)? * c;
            worst = worst.max(-mu).max(mu - 1.0);
            if x <= eq.a || x >= eq.b {
                worst = worst.max((mu - 1.0).abs());
            }
        }
        Ok((worst, "0 <= c mu <= 1, with equality on the saturated parts".into()))
    });
    let pts = [c64(0.3, 0.4), c64(0.8, -0.2), c64(-0.5, 0.1), c64(1.4, 0.05), c64(0.5, 2.0)];
    s.check(m, "g_vs_quadrature", Bound::AtMost(1e-10), None, || {
        let mut worst = 0.0f64;
        for &z in &pts {
            let re = against_density(eq, |t| (z - t).norm().ln());
            let im = against_density(eq, |t| (z - t).arg());
            worst = worst.max((g_eval(z, c, None)? - c64(re, im)).norm());
        }
        Ok((worst, format!("{} points off the cut", pts.len())))
    });
    s.check(m, "g_prime_vs_differences", Bound::AtMost(1e-8), None, || {
        let h = 1e-5;
        let mut worst = 0.0f64;
        for &z in &pts {
            let fd = (g_eval(z + h, c, None)? - g_eval(z - h, c, None)?) / (2.0 * h);
            let d = g_prime(z, c, None)?;
            worst = worst.max((fd - d).norm() / d.norm());
        }
        Ok((worst, format!("central differences, h = {h}")))
    });
    s.check(m, "l_constancy", Bound::AtMost(1e-10), None, || {
        let mut worst = 0.0f64;
        for t in [0.1, 0.37, 0.9] {
            let x = eq.a + t * (eq.b - eq.a);
            worst = worst.max((2.0 * g_eval(c64(x, 0.0), c, Some(Side::Upper))?.re - eq.l).abs());
        }
        Ok((worst, format!("l = {}", eq.l)))
    });
    s.check(m, "l_vs_quadrature", Bound::AtMost(1e-8), None, || {
        let q = 2.0 * against_density(eq, |t| (eq.b - t).abs().ln());
        Ok(((q - eq.l).abs(), format!("2 int log|b - s| mu(s) ds = {q}")))
    });
    s.check(m, "schwarz_boundary_values", Bound::AtMost(1e-12), None, || {
        let mut worst = 0.0f64;
        for &x in xs.iter().take(50) {
            let up = g_eval(c64(x, 0.0), c, Some(Side::Upper))?;
            let down = g_eval(c64(x, 0.0), c, Some(Side::Lower))?;
            worst = worst.max((up.re - down.re).abs()).max((up.im + down.im).abs());
        }
        Ok((worst, "Re g+ = Re g-, Im g+ = -Im g- at 50 points of (0, 1)".into()))
    });
}

/// `count` points spread over the interior of `(lo, hi)`.
fn interior(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| lo + (hi - lo) * (k as f64 + 0.5) / count as f64).collect()
}

/// Growth of the `O(delta^2)` remainder as delta shrinks from 1e-2 to 1e-3:
/// `K(1e-3) / K(1e-2)` with `K = |remainder| / delta^2`. It stays near 1
/// for a genuine second-order remainder and would be near 10 if a
/// first-order term survived.
fn delta_growth(remainder: impl Fn(f64) -> chebasym::Result<f64>) -> chebasym::Result<f64> {
    let k = |d: f64| remainder(d).map(|r| r.abs() / (d * d));
    let (coarse, fine) = (k(1e-2)?, k(1e-3)?);
    Ok(fine / coarse.max(1e-8))
}

fn phase_checks(s: &mut Suite, eq: &EquilibriumData) {
    let m = "phase";
    let pb = |x: f64, im: f64, side: Side| phase_bundle(eq, c64(x, im), Some(side));
    let band = interior(eq.a, eq.b, 50);
    let left = interior(0.0, eq.a, 50);
    let right = interior(eq.b, 1.0, 50);
    s.check(m, "star_boundary_values_cancel", Bound::AtMost(1e-10), None, || {
        let mut worst = 0.0f64;
        for &x in &band {
            worst = worst.max((pb(x, 0.0, Side::Upper)?.phi_star + pb(x, 0.0, Side::Lower)?.phi_star).norm());
        }
        Ok((worst, "phi_star+ + phi_star- on (a, b)".into()))
    });
    s.check(m, "tilde_boundary_values_cancel", Bound::AtMost(1e-10), None, || {
        let mut worst = 0.0f64;
        for &x in &band {
            worst = worst.max((pb(x, 0.0, Side::Upper)?.phi_tilde + pb(x, 0.0, Side::Lower)?.phi_tilde).norm());
        }
        Ok((worst, "phi_tilde+ + phi_tilde- on (a, b)".into()))
    });
    s.check(m, "star_negative_right", Bound::Below(0.0), None, || {
        let mut worst = f64::NEG_INFINITY;
        for &x in &right {
            worst = worst.max(pb(x, 0.0, Side::Upper)?.phi_star.re);
        }
        Ok((worst, "largest phi_star on (b, 1)".into()))
    });
    s.check(m, "tilde_negative_left", Bound::Below(0.0), None, || {
        let mut worst = f64::NEG_INFINITY;
        for &x in &left {
            worst = worst.max(pb(x, 0.0, Side::Upper)?.phi_tilde.re);
        }
        Ok((worst, "largest phi_tilde on (0, a)".into()))
    });
    s.check(m, "star_decreasing_right", Bound::Below(0.0), None, || {
        let mut worst = f64::NEG_INFINITY;
        for &x in &right {
            worst = worst.max(shifted_phase_derivative(eq, c64(x, 0.0), Some(Side::Upper))?.re);
        }
        for w in right.windows(2) {
            worst = worst.max(pb(w[1], 0.0, Side::Upper)?.phi_star.re - pb(w[0], 0.0, Side::Upper)?.phi_star.re);
        }
        Ok((worst, "largest derivative or forward difference on (b, 1)".into()))
    });
    s.check(m, "tilde_increasing_left", Bound::Above(0.0), None, || {
        let mut worst = f64::INFINITY;
        for &x in &left {
            worst = worst.min(shifted_phase_derivative(eq, c64(x, 0.0), Some(Side::Upper))?.re);
        }
        for w in left.windows(2) {
            worst = worst.min(pb(w[1], 0.0, Side::Upper)?.phi_tilde.re - pb(w[0], 0.0, Side::Upper)?.phi_tilde.re);
        }
        Ok((worst, "smallest derivative or forward difference on (0, a)".into()))
    });
    let slope = PI / eq.c;
    let right_inner = interior(eq.b + 0.25 * (1.0 - eq.b), 1.0 - 0.25 * (1.0 - eq.b), 10);
    s.check(m, "star_delta_law", Bound::AtMost(2.0), None, || {
        let mut worst = 0.0f64;
        for &x in &right_inner {
            let on = pb(x, 0.0, Side::Upper)?.phi_star.re;
            for side in [Side::Upper, Side::Lower] {
                let shifted = |d: f64| pb(x, side.sign() * d, side);
                worst = worst.max(delta_growth(|d| Ok(shifted(d)?.phi_star.re - on))?);
                worst = worst.max(delta_growth(|d| Ok(shifted(d)?.phi.re - (on - slope * d)))?);
            }
        }
        Ok((worst, "largest K(1e-3)/K(1e-2) on (b, 1), K = remainder / delta^2".into()))
    });
    let left_inner = interior(0.25 * eq.a, 0.75 * eq.a, 10);
    s.check(m, "tilde_delta_law", Bound::AtMost(2.0), None, || {
        let mut worst = 0.0f64;
        for &x in &left_inner {
            let on = pb(x, 0.0, Side::Upper)?.phi_tilde.re;
            for side in [Side::Upper, Side::Lower] {
                let shifted = |d: f64| pb(x, side.sign() * d, side);
                worst = worst.max(delta_growth(|d| Ok(shifted(d)?.phi_tilde.re - on))?);
                worst = worst.max(delta_growth(|d| Ok(shifted(d)?.phi.re - (on - slope * d)))?);
            }
        }
        Ok((worst, "largest K(1e-3)/K(1e-2) on (0, a), K = remainder / delta^2".into()))
    });
    s.check(m, "tilde_positive_on_dispatch_line", Bound::Above(0.0), None, || {
        let x0 = 0.5;
        let mut worst = f64::INFINITY;
        for k in 0..10 {
            let h = 0.05 + 1.95 * k as f64 / 9.0;
            for im in [h, -h] {
                worst = worst.min(phase_bundle(eq, c64(x0, im), None)?.phi_tilde.re);
            }
        }
        Ok((worst, "smallest Re phi_tilde at 20 points of Re z = 1/2".into()))
    });
}

fn airy_checks(s: &mut Suite, bits: u32, rng: &mut ChaCha8Rng) {
    let m = "airy";
    let zs: Vec<Complex64> =
        (0..30).map(|_| Complex64::from_polar(rng.gen_range(0.0..20.0), rng.gen_range(-PI..PI))).collect();
    s.check(m, "rotation_identity", Bound::AtMost(1e-10), None, || {
        let k = PrecisionCtx::new(bits.max(128))?;
        let mut worst = 0.0f64;
        for &z in &zs {
            let t0 = ai_pair(z, &k).0;
            let t1 = ai_pair(OMEGA * z, &k).0.mul_complex(OMEGA);
            let t2 = ai_pair(OMEGA2 * z, &k).0.mul_complex(OMEGA2);
            let scale = t0.log_mod.max(t1.log_mod).max(t2.log_mod);
            let r = sum_list(&[t0, t1, t2]);
            if !r.is_zero() {
                worst = worst.max((r.log_mod - scale).exp());
            }
        }
        Ok((worst, format!("{} random points, |z| < 20, relative to the largest term", zs.len())))
    });
    s.check(m, "wronskian", Bound::AtMost(1e-10), None, || {
        let want = LogComplex::from_real(1.0 / PI);
        let mut worst = 0.0f64;
        for &z in &zs {
            worst = worst.max(rel_diff(series_wronskian(z, bits.max(256)), want)?);
        }
        Ok((worst, format!("{} random points, |z| < 20", zs.len())))
    });
}

fn dfun_checks(s: &mut Suite, nodes: usize, rng: &mut ChaCha8Rng) {
    let m = "dfun";
    let k = PrecisionCtx::default();
    let zs: Vec<Complex64> = (0..100)
        .map(|_| {
            let im: f64 = rng.gen_range(0.01..1.0);
            c64(rng.gen_range(-2.0..2.0), if rng.gen::<bool>() { im } else { -im })
        })
        .collect();
    s.check(m, "reflection_identity", Bound::AtMost(1e-10), None, || {
        let mut worst = 0.0f64;
        for &z in &zs {
            let d = d_eval(z, nodes, DSelector::D, &k)?;
            let dt = d_eval(z, nodes, DSelector::Dtilde, &k)?;
            let sgn = if z.im > 0.0 { 1.0 } else { -1.0 };
            // 2 cos(N pi z) e^{+-i N pi z} = 1 + e^{+-2 i N pi z}
            let twice = LogComplex::exp_of(c64(0.0, 2.0 * sgn * PI * nodes as f64) * z);
            worst = worst.max(rel_diff(sum_list(&[LogComplex::ONE, twice]).mul(d), dt)?);
        }
        Ok((worst, format!("{} random points, N = {nodes}", zs.len())))
    });
    s.check(m, "origin_limit", Bound::AtMost(1e-12), None, || {
        let d = d_eval(c64(0.0, 0.0), nodes, DSelector::D, &k)?.to_complex();
        Ok(((d - 0.5f64.sqrt()).norm(), format!("D(0+) = {}", d.re)))
    });
}

fn asymptotics_checks(s: &mut Suite, p: &ChebParams, ctx: &PrecisionCtx, rng: &mut ChaCha8Rng) {
    let m = "asymptotics";
    let inv_n = 1.0 / p.n as f64;
    // O(1/n) constants grow like 1/(b - a) as the turning points merge
    let widen = 1.0 / (p.b - p.a);
    let zs: Vec<Complex64> = (0..20).map(|_| c64(rng.gen_range(-0.5..1.5), rng.gen_range(0.05..1.0))).collect();
    s.check(m, "schwarz_symmetry", Bound::AtMost(1e-10), None, || {
        let mut worst = 0.0f64;
        for &z in &zs {
            let up = eval_auto(z, p, ctx)?.0;
            let down = eval_auto(z.conj(), p, ctx)?.0;
            worst = worst.max(rel_diff(up.conj(), down)?);
        }
        Ok((worst, format!("{} random points", zs.len())))
    });
    let strip: Vec<Complex64> = (0..20)
        .map(|_| {
            let im: f64 = rng.gen_range(0.05..1.0);
            c64(p.x0 + rng.gen_range(-0.05..0.05), if rng.gen::<bool>() { im } else { -im })
        })
        .collect();
    s.check(m, "overlap", Bound::AtMost(5.0 * inv_n), Some(Bound::AtMost(5.0 * inv_n * widen)), || {
        let mut worst = 0.0f64;
        for &z in &strip {
            worst = worst.max(rel_diff(eval_left(z, p, ctx)?, eval_right(z, p, ctx)?)?);
        }
        Ok((worst, format!("left vs right at 20 points of the strip, n = {}", p.n)))
    });
    s.check(m, "realness", Bound::AtMost(inv_n), Some(Bound::AtMost(inv_n * widen)), || {
        let mut worst = 0.0f64;
        for x in interior(-0.5, 1.5, 24) {
            let (ev, _) = eval_formula(c64(x, 0.0), p, ctx, FormulaKind::Auto)?;
            // the O(1/n) error is relative to the largest term, not to the
            // oscillating value
            let im = ev.value.log_mod + ev.value.phase.sin().abs().ln();
            worst = worst.max((im - ev.value.log_mod.max(ev.log_scale)).exp());
        }
        Ok((worst, "imaginary part over the largest term at 24 real points".into()))
    });
    let (lo, hi) = if p.a < 0.4 && p.b > 0.6 { (0.4, 0.6) } else { (p.a + 0.25 * (p.b - p.a), p.b - 0.25 * (p.b - p.a)) };
    let moved: Vec<Complex64> = (0..10)
        .map(|_| {
            let im: f64 = rng.gen_range(0.05..1.0);
            c64(rng.gen_range(lo..hi), if rng.gen::<bool>() { im } else { -im })
        })
        .collect();
    s.check(m, "dispatch_line_independence", Bound::AtMost(5.0 * inv_n), Some(Bound::AtMost(5.0 * inv_n * widen)), || {
        let pl = p.with_x0(lo)?;
        let ph = p.with_x0(hi)?;
        let mut worst = 0.0f64;
        for &z in &moved {
            worst = worst.max(rel_diff(eval_auto(z, &pl, ctx)?.0, eval_auto(z, &ph, ctx)?.0)?);
        }
        Ok((worst, format!("x0 moved from {lo} to {hi} at 10 points")))
    });
    s.check(m, "oracle_agreement", Bound::AtMost(0.05), None, || {
        let r = error_record(c64(0.3, 0.4), p, ctx, FormulaKind::Auto)?;
        Ok((r.rel_err, format!("rel_err at 0.3+0.4i, n = {}, N = {}", p.n, p.nodes)))
    });
}
