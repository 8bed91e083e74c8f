//! The `eval`, `error-map` and `converge` commands.

use std::io::Write;

use chebasym::asymptotics::{error_record_with, ErrorRecord};
use chebasym::exact::{t_recurrence, ChebParams, Oracle};
use chebasym::PrecisionCtx;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::config::{OracleKind, RunConfig};
use crate::error::{CliError, CliResult};
use crate::literal::{format_rational, parse_exact};
use crate::output::{self, ConvergeRow, ConvergeTable, ExactRow, Row};

fn oracle(cfg: &RunConfig) -> Oracle {
    match cfg.oracle {
        OracleKind::Exact => Oracle::Exact,
        OracleKind::Float => Oracle::Float { bits: cfg.precision },
    }
}

fn ctx(cfg: &RunConfig) -> CliResult<PrecisionCtx> {
    Ok(PrecisionCtx::new(cfg.precision)?)
}

fn record(z: Complex64, p: &ChebParams, cfg: &RunConfig) -> CliResult<ErrorRecord> {
    Ok(error_record_with(z, p, &ctx(cfg)?, cfg.formula, oracle(cfg))?)
}

fn reject_grid(cfg: &RunConfig, cmd: &str) -> CliResult<()> {
    if cfg.grid.is_some() {
        return Err(CliError::Usage(format!("{cmd} takes a single point, not a grid")));
    }
    Ok(())
}

/// Asymptotic value and oracle at one point, as a single error-map row.
pub fn eval_row(cfg: &RunConfig) -> CliResult<Row> {
    reject_grid(cfg, "eval")?;
    let p = cfg.params()?;
    let z = cfg.point(p.nodes)?;
    Ok(Row::from(&record(z, &p, cfg)?))
}

/// Exact `t_n(x, N)` with the point read as the lattice variable `x` itself.
pub fn eval_exact(cfg: &RunConfig) -> CliResult<ExactRow> {
    reject_grid(cfg, "eval")?;
    let n = cfg.n.ok_or_else(|| CliError::Usage("--n is required".into()))?;
    let nodes = cfg.nodes.ok_or_else(|| CliError::Usage("--exact-only needs --N".into()))?;
    let x: Complex<BigRational> = match (&cfg.z, cfg.x) {
        (Some(_), Some(_)) => return Err(CliError::Usage("give either --z or --x, not both".into())),
        (Some(z), None) => parse_exact(z)?,
        (None, Some(x)) => Complex::new(
            BigRational::from_float(x).ok_or_else(|| CliError::Usage(format!("--x must be finite, got {x}")))?,
            BigRational::zero(),
        ),
        (None, None) => return Err(CliError::Usage("a point is required: --z or --x".into())),
    };
    let v = t_recurrence(n, nodes, &x)?;
    let q = v.as_rational().expect("rational input gives a rational value");
    let log = v.to_log();
    Ok(ExactRow {
        n,
        nodes,
        x: format_complex(&x),
        value: format_complex(q),
        log10_abs: log.log10_abs(),
        phase: log.phase,
    })
}

fn format_complex(q: &Complex<BigRational>) -> String {
    if q.im.is_zero() {
        return format_rational(&q.re);
    }
    let im = format_rational(&q.im);
    let sign = if q.im < BigRational::zero() { "" } else { "+" };
    if q.re.is_zero() {
        format!("{im}i")
    } else {
        format!("{}{sign}{im}i", format_rational(&q.re))
    }
}

pub fn cmd_eval(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    if cfg.exact_only {
        output::write_exact(&eval_exact(cfg)?, cfg.format, out)
    } else {
        output::write_rows(&[eval_row(cfg)?], cfg.format, out)
    }
}

/// Rows of the grid in row-major order (imaginary part ascending, then real).
pub fn error_map_rows(cfg: &RunConfig) -> CliResult<Vec<Row>> {
    let grid = cfg.grid.ok_or_else(|| CliError::Usage("error-map needs a grid".into()))?;
    if cfg.z.is_some() || cfg.x.is_some() {
        return Err(CliError::Usage("error-map takes a grid, not a point".into()));
    }
    let p = cfg.params()?;
    ctx(cfg)?;
    (0..grid.rows * grid.cols)
        .into_par_iter()
        .map(|k| {
            let z = grid.point(k / grid.cols, k % grid.cols);
            record(z, &p, cfg).map(|r| Row::from(&r))
        })
        .collect()
}

pub fn cmd_error_map(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    output::write_rows(&error_map_rows(cfg)?, cfg.format, out)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let k = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    Some(sxy / sxx)
}

/// Error at a fixed point for each degree in the list, `N = round(n / c)`.
pub fn converge_table(cfg: &RunConfig) -> CliResult<ConvergeTable> {
    reject_grid(cfg, "converge")?;
    let list = cfg.n_list.as_ref().ok_or_else(|| CliError::Usage("converge needs --n-list".into()))?;
    if list.is_empty() || list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage("--n-list must be non-empty and strictly increasing".into()));
    }
    if cfg.nodes.is_some() {
        return Err(CliError::Usage("converge derives N from --c; do not pass --N".into()));
    }
    let c = cfg.ratio()?;
    let mut rows: Vec<ConvergeRow> = Vec::with_capacity(list.len());
    for &n in list {
        let p = ChebParams::from_ratio(n, c)?.with_x0(cfg.x0)?;
        let z = cfg.point(p.nodes)?;
        let r = record(z, &p, cfg)?;
        let ratio = rows.last().map(|prev| r.rel_err / prev.rel_err);
        rows.push(ConvergeRow { n, nodes: p.nodes, formula: r.formula.name().to_string(), rel_err: r.rel_err, ratio });
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.rel_err)).collect();
    let slope = if list.len() >= 2 { log_log_slope(&pts) } else { None };
    Ok(ConvergeTable { rows, slope })
}

pub fn cmd_converge(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    output::write_converge(&converge_table(cfg)?, cfg.format, out)
}
