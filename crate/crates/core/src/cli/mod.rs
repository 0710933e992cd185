//! `hcwalk` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 regime/domain error,
//! 3 validation failure.

pub mod table;
pub mod validate;

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{
    hellinger_product, hitting_times, mixing_threshold_scan, mixing_times, tv_bounds, tv_exact,
    zeno_scan,
};
use crate::dynamics::{gamma, probabilities, WalkParams};
use crate::error::WalkError;
use crate::oracle::{run_trajectories, TrajectoryConfig};

pub use table::{Cell, Format, Table};
pub use validate::{run_validation, ValidateOptions, ValidationReport};

/// Environment variable naming the directory for outputs when `--output` is absent.
pub const OUTPUT_DIR_ENV: &str = "HCWALK_OUTPUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

/// Parameter sets of the three reference figures: `(k, n, p)`.
pub const FIGURES: [(f64, usize, f64); 3] = [(1.0, 5, 0.0), (1.0, 5, 0.5), (1.0, 5, 9.0)];
pub const FIGURE_T_END: f64 = 30.0;
pub const FIGURE_POINTS: usize = 1000;

#[derive(Debug, Parser)]
#[command(name = "hcwalk", version, about = "Decohering continuous-time quantum walk on the hypercube")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// Key-value file (`key = value` per line) supplying defaults for the flags below.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Hypercube dimension.
    #[arg(short = 'n', long = "n", global = true)]
    pub n: Option<usize>,

    /// Total energy.
    #[arg(short = 'k', long = "k", global = true)]
    pub k: Option<f64>,

    /// Decoherence rate.
    #[arg(short = 'p', long = "p", global = true)]
    pub p: Option<f64>,

    #[arg(long, global = true)]
    pub t_start: Option<f64>,

    #[arg(long, global = true)]
    pub t_end: Option<f64>,

    /// Number of grid intervals; the grid has `steps + 1` points including both ends.
    #[arg(long, global = true)]
    pub steps: Option<usize>,

    /// Output file; defaults to `$HCWALK_OUTPUT_DIR/<command>.<ext>` or stdout.
    #[arg(short = 'o', long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,

    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// P[0], P[1] and γ over the time grid.
    Probabilities,
    /// Instantaneous mixing times (p < 4k).
    MixingTimes {
        #[arg(long, default_value_t = 3)]
        c_max: u32,
    },
    /// Instantaneous hitting times and hit probabilities (p < 4k).
    HittingTimes {
        #[arg(long, default_value_t = 3)]
        c_max: u32,
    },
    /// Total variation and Hellinger distance to uniform over the time grid.
    TvDistance,
    /// TV to uniform at t = d·n·ln n (p ≥ 4k).
    ThresholdScan {
        #[arg(long = "d", value_delimiter = ',', required = true)]
        d_values: Vec<f64>,
        #[arg(long = "n-values", value_delimiter = ',', required = true)]
        n_values: Vec<usize>,
    },
    /// γ at fixed t as the decoherence rate grows (p > 4k).
    ZenoScan {
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long = "p-values", value_delimiter = ',', required = true)]
        p_values: Vec<f64>,
    },
    /// Monte Carlo trajectory ensemble.
    Trajectories {
        #[arg(long, default_value_t = 10_000)]
        trajectories: u64,
        #[arg(long)]
        t: f64,
    },
    /// Cross-check closed forms against the brute-force oracles.
    Validate {
        /// Override the tolerance of every deterministic check.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 100_000)]
        trajectories: u64,
    },
    /// Data for the reference figures (all three when --id is omitted).
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        id: Option<u8>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Probabilities => "probabilities",
            Command::MixingTimes { .. } => "mixing-times",
            Command::HittingTimes { .. } => "hitting-times",
            Command::TvDistance => "tv-distance",
            Command::ThresholdScan { .. } => "threshold-scan",
            Command::ZenoScan { .. } => "zeno-scan",
            Command::Trajectories { .. } => "trajectories",
            Command::Validate { .. } => "validate",
            Command::Figure { .. } => "figure",
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(WalkError),
    Io(io::Error),
    ValidationFailed,
}

impl From<WalkError> for CliError {
    fn from(e: WalkError) -> Self {
        CliError::Domain(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::ValidationFailed => EXIT_VALIDATION,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "I/O error: {e}"),
            CliError::ValidationFailed => write!(f, "validation failed"),
        }
    }
}

/// Flags merged with the config file and defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: WalkParams,
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    /// Uniform grid with both endpoints.
    pub fn time_grid(&self) -> Vec<f64> {
        time_grid(self.t_start, self.t_end, self.steps)
    }
}

pub fn time_grid(start: f64, end: f64, steps: usize) -> Vec<f64> {
    let h = (end - start) / steps as f64;
    (0..=steps)
        .map(|i| if i == steps { end } else { start + i as f64 * h })
        .collect()
}

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_config_file(text: &str) -> Result<HashMap<String, String>, CliError> {
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim().replace('_', "-");
        const KNOWN: [&str; 9] = ["n", "k", "p", "t-start", "t-end", "steps", "output", "format", "seed"];
        if !KNOWN.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("config line {}: unknown key `{key}`", lineno + 1)));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn from_config<T: std::str::FromStr>(
    map: &HashMap<String, String>,
    key: &str,
) -> Result<Option<T>, CliError> {
    map.get(key)
        .map(|v| {
            v.parse()
                .map_err(|_| CliError::Usage(format!("config key `{key}`: cannot parse `{v}`")))
        })
        .transpose()
}

pub fn resolve(common: &CommonArgs) -> Result<RunConfig, CliError> {
    let file = match &common.config {
        Some(path) => parse_config_file(&fs::read_to_string(path)?)?,
        None => HashMap::new(),
    };
    let n = common.n.or(from_config(&file, "n")?).unwrap_or(5);
    let k = common.k.or(from_config(&file, "k")?).unwrap_or(1.0);
    let p = common.p.or(from_config(&file, "p")?).unwrap_or(0.0);
    let t_start = common.t_start.or(from_config(&file, "t-start")?).unwrap_or(0.0);
    let t_end = common.t_end.or(from_config(&file, "t-end")?).unwrap_or(30.0);
    let steps = common.steps.or(from_config(&file, "steps")?).unwrap_or(1000);
    let seed = common.seed.or(from_config(&file, "seed")?).unwrap_or(0);
    let output = common.output.clone().or(from_config::<PathBuf>(&file, "output")?);
    let format = match (common.format, file.get("format")) {
        (Some(f), _) => f,
        (None, Some(v)) => <Format as clap::ValueEnum>::from_str(v, true)
            .map_err(|_| CliError::Usage(format!("config key `format`: unknown format `{v}`")))?,
        (None, None) => Format::Csv,
    };

    let params = WalkParams::new(n, k, p)?;
    if !(t_start.is_finite() && t_end.is_finite() && t_start >= 0.0) {
        return Err(WalkError::InvalidParameter {
            field: "t-start",
            reason: "times must be finite and non-negative".into(),
        }
        .into());
    }
    if t_start > t_end {
        return Err(WalkError::InvalidParameter {
            field: "t-end",
            reason: format!("t-end ({t_end}) must not precede t-start ({t_start})"),
        }
        .into());
    }
    if steps == 0 {
        return Err(WalkError::InvalidParameter {
            field: "steps",
            reason: "need at least one step".into(),
        }
        .into());
    }
    Ok(RunConfig {
        params,
        t_start,
        t_end,
        steps,
        output,
        format,
        seed,
    })
}

pub fn probability_table(params: &WalkParams, grid: &[f64]) -> Table {
    let mut table = Table::new(&["t", "prob0", "prob1", "gamma", "regime"]);
    let regime = params.regime();
    for &t in grid {
        let (p0, p1) = probabilities(params, t);
        table.push(vec![t.into(), p0.into(), p1.into(), gamma(params, t).into(), regime.as_str().into()]);
    }
    table
}

/// Table for reference figure `id` (1-based).
pub fn figure_table(id: u8) -> Result<Table, CliError> {
    let &(k, n, p) = FIGURES
        .get((id as usize).wrapping_sub(1))
        .ok_or_else(|| CliError::Usage(format!("unknown figure id {id}; expected 1, 2 or 3")))?;
    let params = WalkParams::new(n, k, p)?;
    let mut table = probability_table(&params, &time_grid(0.0, FIGURE_T_END, FIGURE_POINTS - 1));
    table.comment(format!("figure {id}: k = {k}, n = {n}, p = {p}"));
    table.comment(format!("columns: {}", table.columns.join(" ")));
    Ok(table)
}

fn command_table(command: &Command, cfg: &RunConfig) -> Result<Table, CliError> {
    let params = &cfg.params;
    Ok(match command {
        Command::Probabilities => probability_table(params, &cfg.time_grid()),
        Command::MixingTimes { c_max } => {
            let mut table = Table::new(&["c", "t"]);
            for m in mixing_times(params, *c_max)? {
                table.push(vec![m.c.into(), m.t.into()]);
            }
            table
        }
        Command::HittingTimes { c_max } => {
            let mut table = Table::new(&["c", "t", "p_hit"]);
            for h in hitting_times(params, *c_max)? {
                table.push(vec![h.c.into(), h.t.into(), h.p_hit.into()]);
            }
            table
        }
        Command::TvDistance => {
            let mut table = Table::new(&["t", "gamma", "tv", "hellinger", "tv_lower", "tv_upper"]);
            for t in cfg.time_grid() {
                let g = gamma(params, t);
                let (lo, hi) = tv_bounds(g, params.n());
                table.push(vec![
                    t.into(),
                    g.into(),
                    tv_exact(g, params.n()).into(),
                    hellinger_product(g, params.n()).into(),
                    lo.into(),
                    hi.into(),
                ]);
            }
            table
        }
        Command::ThresholdScan { d_values, n_values } => {
            let scan = mixing_threshold_scan(params, d_values, n_values)?;
            let mut table = Table::new(&["d", "n", "t", "gamma", "tv", "threshold_d", "trend"]);
            for r in &scan.rows {
                table.push(vec![
                    r.d.into(),
                    r.n.into(),
                    r.t.into(),
                    r.gamma.into(),
                    r.tv.into(),
                    scan.threshold_d.into(),
                    format!("{:?}", scan.trend(r.d)).to_lowercase().into(),
                ]);
            }
            table
        }
        Command::ZenoScan { t, p_values } => {
            let mut table = Table::new(&["p", "gamma", "p_over_alpha", "mixing_bound"]);
            for r in zeno_scan(params.k(), params.n(), *t, p_values)? {
                table.push(vec![r.p.into(), r.gamma.into(), r.p_over_alpha.into(), r.mixing_bound.into()]);
            }
            table
        }
        Command::Trajectories { trajectories, t } => {
            let result = run_trajectories(&TrajectoryConfig {
                params: *params,
                t_final: *t,
                num_trajectories: *trajectories,
                seed: cfg.seed,
            })?;
            let mut table = Table::new(&["outcome", "bits", "count", "frequency", "std_error"]);
            let n = params.n();
            for (x, &count) in result.counts.iter().enumerate() {
                table.push(vec![
                    x.into(),
                    format!("{x:0n$b}").into(),
                    count.into(),
                    result.distribution.probability(x).into(),
                    result.standard_errors[x].into(),
                ]);
            }
            table
        }
        Command::Validate { .. } | Command::Figure { .. } => unreachable!("handled by run_command"),
    })
}

fn open_output(path: &Path) -> Result<Box<dyn Write>, CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    Ok(Box::new(BufWriter::new(File::create(path)?)))
}

fn default_output(name: &str, format: Format) -> Option<PathBuf> {
    std::env::var_os(OUTPUT_DIR_ENV).map(|dir| PathBuf::from(dir).join(format!("{name}.{}", format.extension())))
}

fn emit(table: &Table, cfg: &RunConfig, name: &str) -> Result<(), CliError> {
    let target = cfg.output.clone().or_else(|| default_output(name, cfg.format));
    match target {
        Some(path) => {
            let mut out = open_output(&path)?;
            table.write(cfg.format, &mut out)?;
            out.flush()?;
        }
        None => {
            let stdout = io::stdout();
            table.write(cfg.format, stdout.lock())?;
        }
    }
    Ok(())
}

pub fn run_command(cli: &Cli) -> Result<(), CliError> {
    let cfg = resolve(&cli.common)?;
    match &cli.command {
        Command::Validate { tol, trajectories } => {
            let report = run_validation(&ValidateOptions {
                seed: cfg.seed,
                tol: *tol,
                trajectories: *trajectories,
                ..ValidateOptions::default()
            })?;
            emit(&report.to_table(), &cfg, "validate")?;
            if report.all_passed() {
                Ok(())
            } else {
                Err(CliError::ValidationFailed)
            }
        }
        Command::Figure { id: Some(id) } => emit(&figure_table(*id)?, &cfg, &format!("figure{id}")),
        Command::Figure { id: None } => {
            let dir = cfg
                .output
                .clone()
                .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("."));
            fs::create_dir_all(&dir)?;
            for id in 1..=3u8 {
                let path = dir.join(format!("figure{id}.{}", cfg.format.extension()));
                let mut out = open_output(&path)?;
                figure_table(id)?.write(cfg.format, &mut out)?;
                out.flush()?;
            }
            Ok(())
        }
        command => emit(&command_table(command, &cfg)?, &cfg, command.name()),
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run_command(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("hcwalk: {e}");
            e.exit_code()
        }
    }
}

pub fn main_entry() -> i32 {
    run(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_endpoints() {
        let g = time_grid(0.0, 30.0, 999);
        assert_eq!(g.len(), 1000);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[999], 30.0);
        assert_eq!(time_grid(2.0, 2.0, 1), vec![2.0, 2.0]);
    }

    #[test]
    fn config_file_parsing() {
        let map = parse_config_file("# defaults\nn = 7\nt_end=12.5\n\nformat = json\n").unwrap();
        assert_eq!(map["n"], "7");
        assert_eq!(map["t-end"], "12.5");
        assert!(parse_config_file("bogus = 1").is_err());
        assert!(parse_config_file("n 7").is_err());
    }

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "n = 7\nk = 2\np = 0.25\nformat = json\nseed = 9\n").unwrap();
        let common = CommonArgs {
            config: Some(path),
            k: Some(3.0),
            ..Default::default()
        };
        let cfg = resolve(&common).unwrap();
        assert_eq!(cfg.params, WalkParams::new(7, 3.0, 0.25).unwrap());
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn invalid_values_name_the_field() {
        let err = resolve(&CommonArgs {
            k: Some(-1.0),
            ..Default::default()
        })
        .unwrap_err();
        assert!(err.to_string().contains("`k`"));
        assert_eq!(err.exit_code(), EXIT_DOMAIN);

        let err = resolve(&CommonArgs {
            t_start: Some(5.0),
            t_end: Some(1.0),
            ..Default::default()
        })
        .unwrap_err();
        assert!(err.to_string().contains("t-end"));
    }

    #[test]
    fn figure_parameter_sets() {
        for (id, want) in [(1u8, "p = 0"), (2, "p = 0.5"), (3, "p = 9")] {
            let t = figure_table(id).unwrap();
            assert_eq!(t.rows.len(), FIGURE_POINTS);
            assert!(t.comments[0].ends_with(want));
        }
        assert!(figure_table(4).is_err());
        assert!(figure_table(0).is_err());
    }
}
