//! Run configuration: command-line flags over a flat `key = value` file over
//! built-in defaults.

use std::path::{Path, PathBuf};

use chebasym::asymptotics::FormulaKind;
use chebasym::exact::ChebParams;
use num_complex::Complex64;

use crate::error::{CliError, CliResult};
use crate::literal::parse_complex;

pub const DEFAULT_PRECISION: u32 = 64;
pub const DEFAULT_X0: f64 = 0.5;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_RATIO: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> CliResult<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Usage(format!("format must be csv or json, got `{s}`"))),
        }
    }
}

/// Source of the reference values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    /// Exact rational arithmetic on the binary value of each point.
    Exact,
    /// Floating recurrence at `--precision` bits with a doubled-precision check.
    Float,
}

impl OracleKind {
    pub fn parse(s: &str) -> CliResult<Self> {
        match s {
            "exact" => Ok(OracleKind::Exact),
            "float" => Ok(OracleKind::Float),
            _ => Err(CliError::Usage(format!("oracle must be exact or float, got `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub rows: usize,
    pub cols: usize,
}

impl GridSpec {
    /// Grid point at row `i` (imaginary axis, ascending) and column `j`.
    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        let lerp = |lo: f64, hi: f64, k: usize, n: usize| {
            if n == 1 {
                lo
            } else {
                // exact at both ends
                let t = k as f64 / (n - 1) as f64;
                lo * (1.0 - t) + hi * t
            }
        };
        Complex64::new(lerp(self.re_min, self.re_max, j, self.cols), lerp(self.im_min, self.im_max, i, self.rows))
    }
}

/// Every setting, each possibly absent. Flags and the config file both
/// produce one of these; the flag layer wins.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialConfig {
    pub n: Option<usize>,
    pub nodes: Option<usize>,
    pub c: Option<f64>,
    pub z: Option<String>,
    pub x: Option<f64>,
    pub formula: Option<String>,
    pub precision: Option<u32>,
    pub x0: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub oracle: Option<String>,
    pub re_min: Option<f64>,
    pub re_max: Option<f64>,
    pub im_min: Option<f64>,
    pub im_max: Option<f64>,
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    pub n_list: Option<Vec<usize>>,
    pub exact_only: Option<bool>,
}

fn value<T: std::str::FromStr>(key: &str, v: &str) -> CliResult<T> {
    v.parse().map_err(|_| CliError::Usage(format!("config key `{key}`: cannot read `{v}`")))
}

pub fn parse_n_list(v: &str) -> CliResult<Vec<usize>> {
    v.split(',').map(|t| value::<usize>("n-list", t.trim())).collect()
}

impl PartialConfig {
    /// Parses `key = value` lines; `#` starts a comment. Keys are the long
    /// flag names (`re-min` and `re_min` are both accepted).
    pub fn from_text(text: &str) -> CliResult<Self> {
        let mut p = PartialConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", lineno + 1)))?;
            let key = k.trim().replace('_', "-");
            let v = v.trim();
            match key.as_str() {
                "n" => p.n = Some(value(&key, v)?),
                "N" => p.nodes = Some(value(&key, v)?),
                "c" => p.c = Some(value(&key, v)?),
                "z" => p.z = Some(v.to_string()),
                "x" => p.x = Some(value(&key, v)?),
                "formula" => p.formula = Some(v.to_string()),
                "precision" => p.precision = Some(value(&key, v)?),
                "x0" => p.x0 = Some(value(&key, v)?),
                "seed" => p.seed = Some(value(&key, v)?),
                "out" => p.out = Some(PathBuf::from(v)),
                "format" => p.format = Some(v.to_string()),
                "oracle" => p.oracle = Some(v.to_string()),
                "re-min" => p.re_min = Some(value(&key, v)?),
                "re-max" => p.re_max = Some(value(&key, v)?),
                "im-min" => p.im_min = Some(value(&key, v)?),
                "im-max" => p.im_max = Some(value(&key, v)?),
                "rows" => p.rows = Some(value(&key, v)?),
                "cols" => p.cols = Some(value(&key, v)?),
                "n-list" => p.n_list = Some(parse_n_list(v)?),
                "exact-only" => p.exact_only = Some(value(&key, v)?),
                _ => return Err(CliError::Usage(format!("config line {}: unknown key `{k}`", lineno + 1))),
            }
        }
        Ok(p)
    }

    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config file {}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    /// Fills every unset field of `self` from `lower`.
    pub fn over(self, lower: PartialConfig) -> PartialConfig {
        PartialConfig {
            n: self.n.or(lower.n),
            nodes: self.nodes.or(lower.nodes),
            c: self.c.or(lower.c),
            z: self.z.or(lower.z),
            x: self.x.or(lower.x),
            formula: self.formula.or(lower.formula),
            precision: self.precision.or(lower.precision),
            x0: self.x0.or(lower.x0),
            seed: self.seed.or(lower.seed),
            out: self.out.or(lower.out),
            format: self.format.or(lower.format),
            oracle: self.oracle.or(lower.oracle),
            re_min: self.re_min.or(lower.re_min),
            re_max: self.re_max.or(lower.re_max),
            im_min: self.im_min.or(lower.im_min),
            im_max: self.im_max.or(lower.im_max),
            rows: self.rows.or(lower.rows),
            cols: self.cols.or(lower.cols),
            n_list: self.n_list.or(lower.n_list),
            exact_only: self.exact_only.or(lower.exact_only),
        }
    }

    /// Applies defaults and checks the settings every command shares.
    pub fn resolve(self) -> CliResult<RunConfig> {
        let precision = self.precision.unwrap_or(DEFAULT_PRECISION);
        if precision < 64 {
            return Err(CliError::Usage(format!("precision must be at least 64 bits, got {precision}")));
        }
        let formula = match &self.formula {
            None => FormulaKind::Auto,
            Some(s) => FormulaKind::parse(s).ok_or_else(|| {
                let names: Vec<_> = FormulaKind::ALL.iter().map(|k| k.name()).collect();
                CliError::Usage(format!("unknown formula `{s}`; expected one of {}", names.join(", ")))
            })?,
        };
        let grid = match (self.re_min, self.re_max, self.im_min, self.im_max, self.rows, self.cols) {
            (None, None, None, None, None, None) => None,
            (Some(re_min), Some(re_max), Some(im_min), Some(im_max), Some(rows), Some(cols)) => {
                if rows == 0 || cols == 0 {
                    return Err(CliError::Usage("grid needs at least one row and one column".into()));
                }
                if !(re_min <= re_max && im_min <= im_max) {
                    return Err(CliError::Usage("grid bounds must satisfy min <= max".into()));
                }
                Some(GridSpec { re_min, re_max, im_min, im_max, rows, cols })
            }
            _ => {
                return Err(CliError::Usage(
                    "a grid needs all of --re-min --re-max --im-min --im-max --rows --cols".into(),
                ))
            }
        };
        Ok(RunConfig {
            n: self.n,
            nodes: self.nodes,
            c: self.c,
            z: self.z,
            x: self.x,
            formula,
            precision,
            x0: self.x0.unwrap_or(DEFAULT_X0),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            out: self.out,
            format: Format::parse(self.format.as_deref().unwrap_or("csv"))?,
            oracle: OracleKind::parse(self.oracle.as_deref().unwrap_or("exact"))?,
            grid,
            n_list: self.n_list,
            exact_only: self.exact_only.unwrap_or(false),
        })
    }
}

/// Fully resolved settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: Option<usize>,
    pub nodes: Option<usize>,
    pub c: Option<f64>,
    /// Kept as text so it can also be read exactly.
    pub z: Option<String>,
    pub x: Option<f64>,
    pub formula: FormulaKind,
    pub precision: u32,
    pub x0: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub oracle: OracleKind,
    pub grid: Option<GridSpec>,
    pub n_list: Option<Vec<usize>>,
    pub exact_only: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        PartialConfig::default().resolve().expect("defaults are valid")
    }
}

impl RunConfig {
    /// `(n, N)` from `n` with either `N` or `c`.
    pub fn degree_and_nodes(&self) -> CliResult<(usize, usize)> {
        let n = self.n.ok_or_else(|| CliError::Usage("--n is required".into()))?;
        match (self.nodes, self.c) {
            (Some(_), Some(_)) => Err(CliError::Usage("give either --N or --c, not both".into())),
            (Some(nodes), None) => Ok((n, nodes)),
            (None, Some(c)) => {
                if !(c > 0.0 && c < 1.0) {
                    return Err(CliError::Usage(format!("--c must lie in (0, 1), got {c}")));
                }
                Ok((n, ((n as f64 / c).round() as usize).max(n + 1)))
            }
            (None, None) => Err(CliError::Usage("--N or --c is required".into())),
        }
    }

    /// Problem instance with the configured dispatch abscissa.
    pub fn params(&self) -> CliResult<ChebParams> {
        let (n, nodes) = self.degree_and_nodes()?;
        Ok(ChebParams::new(n, nodes)?.with_x0(self.x0)?)
    }

    /// The evaluation point in the scaled variable; `--x` maps by `z = (x + 1/2)/N`.
    pub fn point(&self, nodes: usize) -> CliResult<Complex64> {
        match (&self.z, self.x) {
            (Some(_), Some(_)) => Err(CliError::Usage("give either --z or --x, not both".into())),
            (Some(z), None) => parse_complex(z),
            (None, Some(x)) => Ok(Complex64::new((x + 0.5) / nodes as f64, 0.0)),
            (None, None) => Err(CliError::Usage("a point is required: --z or --x".into())),
        }
    }

    pub fn ratio(&self) -> CliResult<f64> {
        let c = self.c.unwrap_or(DEFAULT_RATIO);
        if !(c > 0.0 && c < 1.0) {
            return Err(CliError::Usage(format!("--c must lie in (0, 1), got {c}")));
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_beat_file_beat_defaults() {
        let file = PartialConfig::from_text("n = 80\nN=160 # nodes\nprecision = 128\nformat = json\n").unwrap();
        let flags = PartialConfig { n: Some(100), ..Default::default() };
        let cfg = flags.over(file).resolve().unwrap();
        assert_eq!(cfg.n, Some(100));
        assert_eq!(cfg.nodes, Some(160));
        assert_eq!(cfg.precision, 128);
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.seed, DEFAULT_SEED);
        assert_eq!(cfg.x0, DEFAULT_X0);
    }

    #[test]
    fn rejects_bad_settings() {
        assert!(PartialConfig::from_text("bogus = 1").is_err());
        assert!(PartialConfig::from_text("n 3").is_err());
        assert!(PartialConfig { precision: Some(32), ..Default::default() }.resolve().is_err());
        assert!(PartialConfig { rows: Some(3), ..Default::default() }.resolve().is_err());
        assert!(PartialConfig { formula: Some("nope".into()), ..Default::default() }.resolve().is_err());
        let both = RunConfig { n: Some(5), nodes: Some(10), c: Some(0.5), ..Default::default() };
        assert!(both.degree_and_nodes().is_err());
    }

    #[test]
    fn grid_points_are_row_major() {
        let g = GridSpec { re_min: -1.0, re_max: 1.0, im_min: 0.0, im_max: 2.0, rows: 3, cols: 5 };
        assert_eq!(g.point(0, 0), Complex64::new(-1.0, 0.0));
        assert_eq!(g.point(2, 4), Complex64::new(1.0, 2.0));
        let one = GridSpec { rows: 1, cols: 1, ..g };
        assert_eq!(one.point(0, 0), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn ratio_gives_nodes() {
        let cfg = RunConfig { n: Some(50), c: Some(0.5), ..Default::default() };
        assert_eq!(cfg.degree_and_nodes().unwrap(), (50, 100));
        let cfg = RunConfig { x: Some(4.5), ..Default::default() };
        assert_eq!(cfg.point(10).unwrap(), Complex64::new(0.5, 0.0));
    }
}
