//! Acceptance run: prints PASS or FAIL for each of the ten criteria and
//! exits nonzero when any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use chebasym::airy::{ai_pair, series_wronskian, OMEGA, OMEGA2};
use chebasym::asymptotics::{
    error_record, eval_left, eval_right, eval_simple, pan_wong, FixedXForm, FormulaKind, SimpleBranch,
    DELTA_FRACTION,
};
use chebasym::dfun::{d_eval, DSelector};
use chebasym::exact::{norm_check, norm_closed_form, t_difference, t_hahn, t_recurrence, ChebParams};
use chebasym::numerics::{rel_diff, sum_list};
use chebasym::{LogComplex, PrecisionCtx};
use chebasym_cli::commands::{error_map_rows, log_log_slope};
use chebasym_cli::config::{GridSpec, PartialConfig};
use chebasym_cli::invariants::run_suite;
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Verdict = Result<(bool, String), String>;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `|u / v - 1|`
fn ratio_gap(u: LogComplex, v: LogComplex) -> f64 {
    (u.div(v).map(|q| q.to_complex()).unwrap_or(c64(f64::INFINITY, 0.0)) - 1.0).norm()
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn within(t: Instant, limit: Duration) -> bool {
    t.elapsed() <= limit
}

fn triple_agreement() -> Verdict {
    let t = Instant::now();
    let per_n: Vec<Result<(usize, usize), String>> = (1..=40usize)
        .into_par_iter()
        .map(|nodes| {
            let (mut total, mut bad) = (0, 0);
            for n in 0..nodes.min(21) {
                for k in 0..nodes as i64 {
                    let x = Complex::new(BigRational::from_integer(BigInt::from(k)), BigRational::zero());
                    let r = t_recurrence(n, nodes, &x).map_err(err)?;
                    total += 1;
                    if r != t_difference(n, nodes, &x).map_err(err)? || r != t_hahn(n, nodes, &x).map_err(err)? {
                        bad += 1;
                    }
                }
            }
            Ok((total, bad))
        })
        .collect();
    let (mut total, mut bad) = (0, 0);
    for r in per_n {
        let (a, b) = r?;
        total += a;
        bad += b;
    }
    let fast = within(t, Duration::from_secs(60));
    Ok((bad == 0 && fast, format!("{} of {total} values agree exactly", total - bad)))
}

fn orthogonality() -> Verdict {
    let t = Instant::now();
    let per_n: Vec<Result<(usize, usize), String>> = (1..=30usize)
        .into_par_iter()
        .map(|nodes| {
            let (mut total, mut equal) = (0, 0);
            for n in 0..nodes {
                for m in 0..nodes {
                    total += 1;
                    if norm_check(n, m, nodes).map_err(err)? == norm_closed_form(n, m, nodes).map_err(err)? {
                        equal += 1;
                    }
                }
            }
            Ok((total, equal))
        })
        .collect();
    let (mut total, mut equal) = (0, 0);
    for r in per_n {
        let (a, b) = r?;
        total += a;
        equal += b;
    }
    let hand = norm_check(1, 1, 4).map_err(err)? == BigRational::from_integer(BigInt::from(20));
    let fast = within(t, Duration::from_secs(60));
    Ok((equal == total && hand && fast, format!("{equal} of {total} pairs equal, N = 4, n = 1 gives 20: {hand}")))
}

fn global_accuracy() -> Verdict {
    let t = Instant::now();
    let mut cfg = PartialConfig { n: Some(100), nodes: Some(200), ..Default::default() }.resolve().map_err(err)?;
    cfg.grid = Some(GridSpec { re_min: -0.5, re_max: 1.5, im_min: -1.0, im_max: 1.0, rows: 20, cols: 20 });
    let rows = error_map_rows(&cfg).map_err(err)?;
    let mut kept: Vec<f64> = rows.iter().filter(|r| !r.flagged_zero).map(|r| r.rel_err).collect();
    kept.sort_by(f64::total_cmp);
    let good = kept.iter().filter(|&&e| e < 0.1).count();
    let median = kept[kept.len() / 2];
    let share = good as f64 / kept.len() as f64;
    let ok = share >= 0.95 && median < 0.03 && within(t, Duration::from_secs(300));
    Ok((
        ok,
        format!(
            "{good} of {} unflagged points below 0.1, median {median:.2e}, max {:.2e}, {} flagged",
            kept.len(),
            kept.last().unwrap(),
            rows.len() - kept.len()
        ),
    ))
}

/// Two points in each of the four regions and one on each saturated segment.
const RATE_POINTS: [(f64, f64); 10] = [
    (0.3, 0.4),
    (0.2, -0.6),
    (0.8, 0.4),
    (0.7, -0.5),
    (-0.3, 0.5),
    (-0.2, -0.3),
    (1.3, 0.3),
    (1.2, -0.6),
    (0.03, 0.0),
    (0.97, 0.0),
];

fn convergence_order() -> Verdict {
    let degrees = [50usize, 100, 200, 400];
    let ctx = PrecisionCtx::default();
    let slopes: Vec<Result<f64, String>> = RATE_POINTS
        .par_iter()
        .map(|&(re, im)| {
            let pts = degrees
                .iter()
                .map(|&n| {
                    let p = ChebParams::new(n, 2 * n).map_err(err)?;
                    let r = error_record(c64(re, im), &p, &ctx, FormulaKind::Auto).map_err(err)?;
                    Ok((n as f64, r.rel_err))
                })
                .collect::<Result<Vec<_>, String>>()?;
            Ok(log_log_slope(&pts).unwrap())
        })
        .collect();
    let slopes = slopes.into_iter().collect::<Result<Vec<_>, _>>()?;
    let ok = slopes.iter().all(|s| (-1.35..=-0.65).contains(s));
    let shown: Vec<String> = slopes.iter().map(|s| format!("{s:.3}")).collect();
    Ok((ok, format!("slopes [{}]", shown.join(", "))))
}

fn overlap() -> Verdict {
    let ctx = PrecisionCtx::default();
    let mut notes = Vec::new();
    let mut ok = true;
    for n in [100usize, 200] {
        let p = ChebParams::new(n, 2 * n).map_err(err)?;
        let mut worst = 0.0f64;
        for dx in [-0.05, -0.025, 0.0, 0.025, 0.05] {
            for im in [0.05, 0.4, -0.7, -1.0] {
                let z = c64(p.x0 + dx, im);
                let l = eval_left(z, &p, &ctx).map_err(err)?;
                let r = eval_right(z, &p, &ctx).map_err(err)?;
                worst = worst.max(ratio_gap(l, r));
            }
        }
        ok &= worst <= 5.0 / n as f64;
        notes.push(format!("n = {n}: n * worst = {:.3}", worst * n as f64));
    }
    Ok((ok, notes.join(", ")))
}

fn simplified_forms() -> Verdict {
    let ctx = PrecisionCtx::default();
    let n = 200;
    let p = ChebParams::new(n, 2 * n).map_err(err)?;
    let end = p.a - DELTA_FRACTION * (p.b - p.a);
    let mut worst = 0.0f64;
    for k in 0..20 {
        let x = end * (k as f64 + 0.5) / 20.0;
        let simple = eval_simple(x, &p, &ctx, SimpleBranch::Inner).map_err(err)?;
        let left = eval_left(c64(x, 0.0), &p, &ctx).map_err(err)?;
        worst = worst.max(rel_diff(simple, left).map_err(err)?);
    }
    let inner_ok = worst <= 10.0 / n as f64;
    let mut neg = Vec::new();
    for x in [-0.1, -0.2, -0.5] {
        neg.push(error_record(c64(x, 0.0), &p, &ctx, FormulaKind::SimpleNegative).map_err(err)?.rel_err);
    }
    let neg_ok = neg.iter().all(|&e| e < 0.05);
    let shown: Vec<String> = neg.iter().map(|e| format!("{e:.2e}")).collect();
    Ok((
        inner_ok && neg_ok,
        format!(
            "inner vs left n * worst = {:.3}, negative rel_err [{}]",
            worst * n as f64,
            shown.join(", ")
        ),
    ))
}

fn fixed_x_agreement() -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    for (fixed, pan, label) in
        [(FixedXForm::FixedXPos, FixedXForm::PanWongPos, "pos"), (FixedXForm::FixedXNeg, FixedXForm::PanWongNeg, "neg")]
    {
        for x in [0.25, -0.25] {
            let gaps = [100usize, 200, 400]
                .iter()
                .map(|&n| Ok(ratio_gap(pan_wong(x, n, 2 * n, fixed)?, pan_wong(x, n, 2 * n, pan)?)))
                .collect::<chebasym::Result<Vec<f64>>>()
                .map_err(err)?;
            ok &= gaps[2] <= 0.1 && gaps[0] > gaps[1] && gaps[1] > gaps[2];
            notes.push(format!("{label} x = {x}: {:.1e}/{:.1e}/{:.1e}", gaps[0], gaps[1], gaps[2]));
        }
    }
    Ok((ok, format!("|ratio - 1| at n = 100/200/400: {}", notes.join("; "))))
}

fn phase_suite() -> Verdict {
    let t = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for c in [0.3, 0.5, 0.7] {
        let report = run_suite(c, 42, 256).map_err(err)?;
        let phase: Vec<_> = report.checks.iter().filter(|r| r.module == "phase").collect();
        let failed: Vec<&str> = phase.iter().filter(|r| !r.passed || r.relaxed).map(|r| r.name.as_str()).collect();
        let identities = phase.iter().filter(|r| r.name.ends_with("_cancel")).all(|r| r.tolerance <= 1e-10);
        ok &= failed.is_empty() && identities;
        notes.push(format!("c = {c}: {} of {} checks", phase.len() - failed.len(), phase.len()));
    }
    ok &= within(t, Duration::from_secs(30));
    Ok((ok, notes.join(", ")))
}

fn special_functions() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let k = PrecisionCtx::new(128).map_err(err)?;
    let mut rotation = 0.0f64;
    for _ in 0..100 {
        let z = Complex64::from_polar(rng.gen_range(0.0..20.0), rng.gen_range(-PI..PI));
        let t0 = ai_pair(z, &k).0;
        let t1 = ai_pair(OMEGA * z, &k).0.mul_complex(OMEGA);
        let t2 = ai_pair(OMEGA2 * z, &k).0.mul_complex(OMEGA2);
        let scale = t0.log_mod.max(t1.log_mod).max(t2.log_mod);
        let r = sum_list(&[t0, t1, t2]);
        if !r.is_zero() {
            rotation = rotation.max((r.log_mod - scale).exp());
        }
    }
    let inv_pi = LogComplex::from_real(1.0 / PI);
    let mut wronskian = 0.0f64;
    for _ in 0..200 {
        let z = Complex64::from_polar(rng.gen_range(0.0..20.0), rng.gen_range(-PI..PI));
        wronskian = wronskian.max(rel_diff(series_wronskian(z, 256), inv_pi).map_err(err)?);
    }
    let nodes = 200;
    let d64 = PrecisionCtx::default();
    let mut reflection = 0.0f64;
    for _ in 0..100 {
        let im: f64 = rng.gen_range(0.01..1.0);
        let z = c64(rng.gen_range(-2.0..2.0), if rng.gen::<bool>() { im } else { -im });
        let d = d_eval(z, nodes, DSelector::D, &d64).map_err(err)?;
        let dt = d_eval(z, nodes, DSelector::Dtilde, &d64).map_err(err)?;
        let s = if z.im > 0.0 { 1.0 } else { -1.0 };
        let twice = LogComplex::exp_of(c64(0.0, 2.0 * s * PI * nodes as f64) * z);
        reflection = reflection.max(rel_diff(sum_list(&[LogComplex::ONE, twice]).mul(d), dt).map_err(err)?);
    }
    let origin = (d_eval(c64(0.0, 0.0), nodes, DSelector::D, &d64).map_err(err)?.to_complex() - 0.5f64.sqrt()).norm();
    let ok = rotation < 1e-10 && wronskian < 1e-10 && reflection < 1e-10 && origin < 1e-12;
    Ok((
        ok,
        format!(
            "rotation {rotation:.1e}, Wronskian {wronskian:.1e}, D reflection {reflection:.1e}, |D(0+) - 1/sqrt 2| {origin:.1e}"
        ),
    ))
}

fn equilibrium_layer() -> Verdict {
    let report = run_suite(0.5, 42, 64).map_err(err)?;
    let wanted = [
        ("density_integral", 1e-12),
        ("g_vs_quadrature", 1e-10),
        ("g_prime_vs_differences", 1e-8),
        ("l_constancy", 1e-10),
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, tol) in wanted {
        let row = report.checks.iter().find(|r| r.name == name).ok_or_else(|| format!("missing check {name}"))?;
        ok &= row.passed && row.tolerance <= tol;
        notes.push(format!("{name} {:.1e}", row.worst));
    }
    Ok((ok, notes.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("exact oracles agree", triple_agreement),
        ("orthogonality identity", orthogonality),
        ("global accuracy", global_accuracy),
        ("convergence order", convergence_order),
        ("overlap consistency", overlap),
        ("simplified real-line forms", simplified_forms),
        ("fixed-x comparators", fixed_x_agreement),
        ("phase-function suite", phase_suite),
        ("special-function layer", special_functions),
        ("equilibrium layer", equilibrium_layer),
    ];
    let mut failures = 0;
    for (k, (title, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (passed, detail) = match run() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        let secs = t.elapsed().as_secs_f64();
        println!("{} criterion {}: {title} ({secs:.2} s) {detail}", if passed { "PASS" } else { "FAIL" }, k + 1);
        if !passed {
            failures += 1;
        }
    }
    if failures == 0 {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}
