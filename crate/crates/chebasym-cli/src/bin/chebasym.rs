use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use chebasym_cli::commands::{cmd_converge, cmd_error_map, cmd_eval};
use chebasym_cli::config::{parse_n_list, PartialConfig, RunConfig};
use chebasym_cli::error::{CliError, CliResult, EXIT_OK, EXIT_USAGE};
use chebasym_cli::invariants::run_suite;
use chebasym_cli::output::write_invariants;
use clap::{Args, Parser, Subcommand};

/// Discrete Chebyshev polynomials of large degree: global Airy-type
/// asymptotics checked against exact oracles.
#[derive(Debug, Parser)]
#[command(name = "chebasym", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Working precision in bits (at least 64)
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Dispatch abscissa between the left and right forms, inside (a, b)
    #[arg(long, global = true)]
    x0: Option<f64>,
    /// Seed for random sampling
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (standard output when absent)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format: csv or json
    #[arg(long, global = true)]
    format: Option<String>,
    /// Flat `key = value` file; flags take precedence over it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Instance {
    /// Degree
    #[arg(long)]
    n: Option<usize>,
    /// Number of nodes
    #[arg(long = "N")]
    nodes: Option<usize>,
    /// Ratio n/N, used instead of --N
    #[arg(long)]
    c: Option<f64>,
    /// Formula: auto, left, right, simple-inner, simple-negative,
    /// pan-wong-pos, pan-wong-neg, fixed-x-pos, fixed-x-neg
    #[arg(long)]
    formula: Option<String>,
    /// Reference values: exact or float (float runs at --precision bits)
    #[arg(long)]
    oracle: Option<String>,
}

#[derive(Debug, Args)]
struct Point {
    /// Scaled point, written a+bi
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Lattice point, mapped by z = (x + 1/2)/N
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,
}

#[derive(Debug, Args)]
struct Grid {
    #[arg(long = "re-min", allow_hyphen_values = true)]
    re_min: Option<f64>,
    #[arg(long = "re-max", allow_hyphen_values = true)]
    re_max: Option<f64>,
    #[arg(long = "im-min", allow_hyphen_values = true)]
    im_min: Option<f64>,
    #[arg(long = "im-max", allow_hyphen_values = true)]
    im_max: Option<f64>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Asymptotic and exact values at one point
    Eval {
        #[command(flatten)]
        instance: Instance,
        #[command(flatten)]
        point: Point,
        /// Print only the exact t_n at the point, read as the lattice variable
        #[arg(long = "exact-only")]
        exact_only: bool,
    },
    /// Relative error over a rectangular grid, one row per point
    ErrorMap {
        #[command(flatten)]
        instance: Instance,
        #[command(flatten)]
        grid: Grid,
    },
    /// Relative error at a fixed point for increasing degrees
    Converge {
        #[command(flatten)]
        instance: Instance,
        #[command(flatten)]
        point: Point,
        /// Strictly increasing degrees, comma separated
        #[arg(long = "n-list")]
        n_list: Option<String>,
    },
    /// Runs the invariant suite of every layer
    Invariants {
        /// Ratio n/N
        #[arg(long)]
        c: Option<f64>,
    },
}

fn flags(cli: &Cli) -> CliResult<PartialConfig> {
    let g = &cli.global;
    let mut p = PartialConfig {
        precision: g.precision,
        x0: g.x0,
        seed: g.seed,
        out: g.out.clone(),
        format: g.format.clone(),
        ..Default::default()
    };
    let mut instance = |i: &Instance| {
        p.n = i.n;
        p.nodes = i.nodes;
        p.c = i.c;
        p.formula = i.formula.clone();
        p.oracle = i.oracle.clone();
    };
    match &cli.command {
        Command::Eval { instance: i, point, exact_only } => {
            instance(i);
            p.z = point.z.clone();
            p.x = point.x;
            p.exact_only = exact_only.then_some(true);
        }
        Command::ErrorMap { instance: i, grid } => {
            instance(i);
            p.re_min = grid.re_min;
            p.re_max = grid.re_max;
            p.im_min = grid.im_min;
            p.im_max = grid.im_max;
            p.rows = grid.rows;
            p.cols = grid.cols;
        }
        Command::Converge { instance: i, point, n_list } => {
            instance(i);
            p.z = point.z.clone();
            p.x = point.x;
            p.n_list = n_list.as_deref().map(parse_n_list).transpose()?;
        }
        Command::Invariants { c } => p.c = *c,
    }
    Ok(p)
}

fn run_invariants(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let report = run_suite(cfg.ratio()?, cfg.seed, cfg.precision)?;
    write_invariants(&report, cfg.format, out)?;
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(CliError::InvariantFailure { failed });
    }
    Ok(())
}

fn run(cli: &Cli) -> CliResult<()> {
    let file = match &cli.global.config {
        Some(path) => PartialConfig::from_file(path)?,
        None => PartialConfig::default(),
    };
    let cfg = flags(cli)?.over(file).resolve()?;
    let mut buf = Vec::new();
    let outcome = match cli.command {
        Command::Eval { .. } => cmd_eval(&cfg, &mut buf),
        Command::ErrorMap { .. } => cmd_error_map(&cfg, &mut buf),
        Command::Converge { .. } => cmd_converge(&cfg, &mut buf),
        Command::Invariants { .. } => run_invariants(&cfg, &mut buf),
    };
    // an invariant failure still delivers its report
    if outcome.is_ok() || matches!(outcome, Err(CliError::InvariantFailure { .. })) {
        match &cfg.out {
            Some(path) => std::fs::write(path, &buf)?,
            None => std::io::stdout().write_all(&buf)?,
        }
    }
    outcome
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::from(EXIT_OK as u8),
        Err(e) => {
            eprintln!("chebasym: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
