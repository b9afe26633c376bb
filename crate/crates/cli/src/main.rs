//! `lrtfim`: effective-theory tables, bound-state scans, exact quenches and
//! quench spectroscopy from the command line.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 4 refusal to exceed the memory budget. `LRTFIM_THREADS` sets the number of
//! worker threads.

mod checkpoint;
mod commands;
mod config;
mod manifest;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{AlphaSpec, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(lrtfim::Error),
    Budget(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Budget(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
            CliError::Budget(m) => write!(f, "refused: {m}"),
        }
    }
}

impl From<lrtfim::Error> for CliError {
    fn from(e: lrtfim::Error) -> Self {
        match e {
            e if e.is_numerical() => CliError::Numerical(e),
            lrtfim::Error::LatticeTooLarge { .. } | lrtfim::Error::BasisTooLarge { .. } => {
                CliError::Budget(e.to_string())
            }
            e => CliError::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "lrtfim", version, about = "Long-range transverse-field Ising toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Diagonalize effective sector Hamiltonians and tabulate their gaps.
    Effective(Common),
    /// Classify the two-magnon eigenstates by IPR and mean separation.
    Boundstates(Common),
    /// Exact quench from the polarized state.
    Quench {
        #[command(flatten)]
        common: Common,
        /// Continue from the checkpoint in the output directory.
        #[arg(long)]
        resume: bool,
    },
    /// Windowed spectra of a quench time series, matched to a gap table.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Time-series CSV written by `quench`.
        #[arg(long)]
        series: PathBuf,
        /// Gap-table CSV written by `effective`.
        #[arg(long)]
        gaps: Option<PathBuf>,
    },
    /// Single-magnon band along X - M - Gamma - X - S.
    Dispersion(Common),
}

/// Options shared by every subcommand; each overrides the config file.
#[derive(Args, Clone, Default)]
struct Common {
    /// TOML run configuration.
    #[arg(short, long)]
    config: Option<PathBuf>,
    #[arg(short = 'L', long = "size")]
    l: Option<usize>,
    /// Decay exponent, or `inf` for nearest neighbors.
    #[arg(long)]
    alpha: Option<String>,
    #[arg(short = 'J', long = "coupling")]
    j: Option<f64>,
    #[arg(short, long)]
    g: Option<f64>,
    #[arg(long)]
    mode: Option<String>,
    /// Comma-separated magnon numbers.
    #[arg(long, value_delimiter = ',')]
    sectors: Option<Vec<usize>>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(short, long)]
    output_dir: Option<PathBuf>,
    /// Any config key, as `key=value` in TOML syntax.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Common {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if !self.set.is_empty() {
            c = apply_sets(&c, &self.set)?;
        }
        if let Some(v) = self.l {
            c.l = v;
        }
        if let Some(v) = &self.alpha {
            c.alpha = match v.parse::<f64>() {
                Ok(x) if x.is_finite() => AlphaSpec::Number(x),
                _ => AlphaSpec::Text(v.clone()),
            };
        }
        if let Some(v) = self.j {
            c.j = v;
        }
        if let Some(v) = self.g {
            c.g = v;
        }
        if let Some(v) = &self.mode {
            c.mode = v.clone();
        }
        if let Some(v) = &self.sectors {
            c.sectors = v.clone();
        }
        if let Some(v) = self.t_max {
            c.t_max = v;
        }
        if let Some(v) = self.dt {
            c.dt = v;
        }
        if let Some(v) = &self.output_dir {
            c.output_dir = v.clone();
        }
        c.validate()?;
        Ok(c)
    }
}

/// Applies `key=value` overrides by merging them into the TOML form of `c`.
fn apply_sets(c: &RunConfig, sets: &[String]) -> Result<RunConfig, CliError> {
    let mut table: toml::Table = toml::from_str(&c.to_toml()).expect("config round-trips");
    for s in sets {
        let (key, value) = s
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("--set expects key=value, got {s:?}")))?;
        let key = key.trim();
        let parsed: toml::Table = toml::from_str(&format!("v = {value}"))
            .unwrap_or_else(|_| toml::Table::from_iter([("v".to_string(), toml::Value::String(value.to_string()))]));
        table.insert(key.to_string(), parsed["v"].clone());
    }
    toml::Value::Table(table)
        .try_into()
        .map_err(|e| CliError::Config(format!("--set: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = lrtfim::par::init_threads_from_env();
    let result = match &cli.command {
        Command::Effective(c) => c.resolve().and_then(|cfg| commands::effective(&cfg, threads)),
        Command::Boundstates(c) => c.resolve().and_then(|cfg| commands::boundstates(&cfg, threads)),
        Command::Quench { common, resume } => {
            common.resolve().and_then(|cfg| commands::quench(&cfg, *resume, threads))
        }
        Command::Spectrum { common, series, gaps } => common
            .resolve()
            .and_then(|cfg| commands::spectrum(&cfg, series, gaps.as_deref(), threads)),
        Command::Dispersion(c) => c.resolve().and_then(|cfg| commands::dispersion(&cfg, threads)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lrtfim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
