//! Run configuration: a TOML file of flat keys, overridden from the command
//! line.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use lrtfim::boundstates::Thresholds;
use lrtfim::spectral::{DEFAULT_REL_THRESHOLD, DEFAULT_T_MIN};
use lrtfim::sw::Mode;
use lrtfim::Exponent;

use crate::CliError;

/// Memory the quench may use unless told otherwise; enough for 4 x 4.
pub const DEFAULT_BUDGET_MB: u64 = 256;

/// `alpha` as written in the file: a number or `"inf"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaSpec {
    Number(f64),
    Text(String),
}

impl AlphaSpec {
    pub fn parse(&self) -> Result<Exponent, CliError> {
        match self {
            AlphaSpec::Number(a) => a.to_string().parse(),
            AlphaSpec::Text(s) => s.parse(),
        }
        .map_err(|e| CliError::Config(format!("alpha: {e}")))
    }
}

impl From<Exponent> for AlphaSpec {
    fn from(a: Exponent) -> Self {
        match a {
            Exponent::Finite(x) => AlphaSpec::Number(x),
            Exponent::Infinite => AlphaSpec::Text("inf".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "L")]
    pub l: usize,
    pub alpha: AlphaSpec,
    #[serde(rename = "J")]
    pub j: f64,
    pub g: f64,
    /// `full`, `asymptotic` or `generic_sw`.
    pub mode: String,
    pub t_max: f64,
    pub dt: f64,
    pub sectors: Vec<usize>,
    /// Keep only three-magnon configurations containing a nearest-neighbor
    /// pair.
    pub filter_three: bool,
    /// Levels per sector entering the gap table; all when absent.
    pub max_levels: Option<usize>,
    /// Sectors whose internal level spacings join the gap table.
    pub intra_sectors: Vec<usize>,
    pub bound_ipr: f64,
    pub scattering_factor: f64,
    pub rel_threshold: f64,
    pub t_min: f64,
    /// Seed of the randomized start vector of the iterative eigensolver.
    pub seed: u64,
    pub krylov_dim: usize,
    pub krylov_tol: f64,
    pub budget_mb: u64,
    /// Records between quench checkpoints; 0 disables them.
    pub checkpoint_every: usize,
    /// Eigenstate indices whose density maps `boundstates` writes.
    pub density_maps: Vec<usize>,
    /// Also write the density map of every bound-labeled state.
    pub bound_maps: bool,
    /// Intervals per leg of the dispersion path.
    pub path_points: usize,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let th = Thresholds::default();
        Self {
            l: 3,
            alpha: AlphaSpec::Number(3.0),
            j: 1.0,
            g: 0.2,
            mode: Mode::Full.to_string(),
            t_max: 200.0,
            dt: lrtfim::exact::DEFAULT_DT_RECORD,
            sectors: vec![0, 1, 2],
            filter_three: true,
            max_levels: None,
            intra_sectors: vec![0, 1, 2],
            bound_ipr: th.bound_ipr,
            scattering_factor: th.scattering_factor,
            rel_threshold: DEFAULT_REL_THRESHOLD,
            t_min: DEFAULT_T_MIN,
            seed: 0,
            krylov_dim: lrtfim::exact::DEFAULT_KRYLOV_DIM,
            krylov_tol: lrtfim::exact::DEFAULT_TOL,
            budget_mb: DEFAULT_BUDGET_MB,
            checkpoint_every: 0,
            density_maps: Vec::new(),
            bound_maps: false,
            path_points: 64,
            output_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn exponent(&self) -> Result<Exponent, CliError> {
        self.alpha.parse()
    }

    pub fn mode(&self) -> Result<Mode, CliError> {
        self.mode
            .parse()
            .map_err(|e| CliError::Config(format!("mode: {e}")))
    }

    pub fn thresholds(&self) -> Thresholds {
        Thresholds {
            bound_ipr: self.bound_ipr,
            scattering_factor: self.scattering_factor,
        }
    }

    /// Checks every field, naming the first offending one.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |field: &str, why: String| Err(CliError::Config(format!("{field}: {why}")));
        if self.l < 2 {
            return bad("L", format!("must be at least 2, got {}", self.l));
        }
        self.exponent()?;
        self.mode()?;
        if !(self.j.is_finite() && self.j > 0.0) {
            return bad("J", format!("must be positive, got {}", self.j));
        }
        if !self.g.is_finite() {
            return bad("g", format!("must be finite, got {}", self.g));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return bad("dt", format!("must be positive, got {}", self.dt));
        }
        if !(self.t_max.is_finite() && self.t_max >= 0.0) {
            return bad("t_max", format!("must be non-negative, got {}", self.t_max));
        }
        if !(self.t_min.is_finite() && self.t_min >= 0.0) {
            return bad("t_min", format!("must be non-negative, got {}", self.t_min));
        }
        if self.sectors.iter().any(|&nu| nu > 3) {
            return bad("sectors", format!("supported magnon numbers are 0 to 3, got {:?}", self.sectors));
        }
        if !(self.rel_threshold > 0.0 && self.rel_threshold < 1.0) {
            return bad("rel_threshold", format!("must lie in (0, 1), got {}", self.rel_threshold));
        }
        if !(self.bound_ipr > 0.0 && self.bound_ipr <= 1.0) {
            return bad("bound_ipr", format!("must lie in (0, 1], got {}", self.bound_ipr));
        }
        if !(self.scattering_factor > 0.0) {
            return bad("scattering_factor", format!("must be positive, got {}", self.scattering_factor));
        }
        if self.krylov_dim < 2 {
            return bad("krylov_dim", format!("must be at least 2, got {}", self.krylov_dim));
        }
        if !(self.krylov_tol > 0.0) {
            return bad("krylov_tol", format!("must be positive, got {}", self.krylov_tol));
        }
        if self.path_points == 0 {
            return bad("path_points", "must be positive".into());
        }
        Ok(())
    }
}
