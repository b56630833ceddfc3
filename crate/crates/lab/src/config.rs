//! JSON experiment configuration. Every field has a default, and the
//! defaults reproduce the reference system.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use shub_core::{BumpKind, BumpProfile, IntMatrix2, ShubParams, TorusPoint};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: line {line}, column {column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Invalid { field: &'static str, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Validate,
    Periodic,
    Bowen,
    Lyapunov,
    Contracting,
    Growth,
    Equidist,
    Semiconj,
    Birkhoff,
    All,
}

impl Experiment {
    pub fn as_str(&self) -> &'static str {
        match self {
            Experiment::Validate => "validate",
            Experiment::Periodic => "periodic",
            Experiment::Bowen => "bowen",
            Experiment::Lyapunov => "lyapunov",
            Experiment::Contracting => "contracting",
            Experiment::Growth => "growth",
            Experiment::Equidist => "equidist",
            Experiment::Semiconj => "semiconj",
            Experiment::Birkhoff => "birkhoff",
            Experiment::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BumpShape {
    Smooth,
    Quintic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    /// Row-major.
    pub phi: [i64; 4],
    /// Row-major.
    pub l: [i64; 4],
    pub t: f64,
    pub rho: f64,
    pub q: [f64; 2],
    pub p: [f64; 2],
    pub theta0: [f64; 2],
    pub bump: BumpShape,
    pub integrator_steps: usize,
    pub step_check_tol: Option<f64>,
}

impl Default for SystemConfig {
    fn default() -> Self {
        SystemConfig {
            phi: [3, 2, 1, 1],
            l: [2, 1, 1, 1],
            t: 1.4,
            rho: 0.15,
            q: [0.0, 0.5],
            p: [0.0, 0.0],
            theta0: [0.0, 0.0],
            bump: BumpShape::Smooth,
            integrator_steps: 64,
            step_check_tol: None,
        }
    }
}

impl SystemConfig {
    pub fn to_params(&self) -> ShubParams {
        let kind = match self.bump {
            BumpShape::Smooth => BumpKind::Smooth,
            BumpShape::Quintic => BumpKind::Quintic,
        };
        ShubParams {
            phi: IntMatrix2::from_row_major(self.phi),
            l: IntMatrix2::from_row_major(self.l),
            t: self.t,
            q: TorusPoint::new(self.q[0], self.q[1]),
            p: TorusPoint::new(self.p[0], self.p[1]),
            theta0: TorusPoint::new(self.theta0[0], self.theta0[1]),
            bump: BumpProfile::with_kind(self.rho, kind),
            integrator_steps: self.integrator_steps,
            step_check_tol: self.step_check_tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PeriodicConfig {
    /// Inclusive.
    pub n_range: [u32; 2],
    pub cap: u128,
}

impl Default for PeriodicConfig {
    fn default() -> Self {
        PeriodicConfig {
            n_range: [1, 5],
            cap: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BowenConfig {
    pub epsilon: f64,
    pub max_n: u32,
    pub max_cluster: usize,
}

impl Default for BowenConfig {
    fn default() -> Self {
        BowenConfig {
            epsilon: 0.02,
            max_n: 4,
            max_cluster: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GrowthConfig {
    /// Rows with `n >= min_n` are checked against `h_top`.
    pub min_n: u32,
    pub tolerance: f64,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        GrowthConfig { min_n: 4, tolerance: 0.02 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LyapunovConfig {
    pub horizon: usize,
    pub starts: usize,
    pub tolerance: f64,
    pub agreement: f64,
}

impl Default for LyapunovConfig {
    fn default() -> Self {
        LyapunovConfig {
            horizon: 20_000,
            starts: 1,
            tolerance: 5e-3,
            agreement: 1e-2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContractingConfig {
    pub samples: usize,
    pub horizon: usize,
    pub threshold: f64,
}

impl Default for ContractingConfig {
    fn default() -> Self {
        ContractingConfig {
            samples: 500,
            horizon: 20_000,
            threshold: 0.95,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SemiconjConfig {
    pub depth: usize,
    pub samples: usize,
    pub sweep: Vec<usize>,
    pub residual_threshold: f64,
    /// Allowed relative deviation of the log-residual slope from `log lambda_s`.
    pub slope_tolerance: f64,
    pub collapse_tolerance: f64,
}

impl Default for SemiconjConfig {
    fn default() -> Self {
        SemiconjConfig {
            depth: 25,
            samples: 1000,
            sweep: vec![10, 15, 20, 25],
            residual_threshold: 1e-9,
            slope_tolerance: 0.5,
            collapse_tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EquidistConfig {
    /// Inclusive.
    pub n_range: [u32; 2],
    pub grid: usize,
    pub depth: usize,
}

impl Default for EquidistConfig {
    fn default() -> Self {
        EquidistConfig {
            n_range: [3, 5],
            grid: 4,
            depth: 25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BirkhoffConfig {
    pub starts: usize,
    pub horizon: usize,
    pub spread_threshold: f64,
}

impl Default for BirkhoffConfig {
    fn default() -> Self {
        BirkhoffConfig {
            starts: 20,
            horizon: 100_000,
            spread_threshold: 0.02,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub system: SystemConfig,
    pub periodic: PeriodicConfig,
    pub bowen: BowenConfig,
    pub growth: GrowthConfig,
    pub lyapunov: LyapunovConfig,
    pub contracting: ContractingConfig,
    pub semiconj: SemiconjConfig,
    pub equidist: EquidistConfig,
    pub birkhoff: BirkhoffConfig,
    pub master_seed: u64,
    pub output_dir: PathBuf,
    /// 0 lets the pool pick.
    pub thread_count: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: Experiment::All,
            system: SystemConfig::default(),
            periodic: PeriodicConfig::default(),
            bowen: BowenConfig::default(),
            growth: GrowthConfig::default(),
            lyapunov: LyapunovConfig::default(),
            contracting: ContractingConfig::default(),
            semiconj: SemiconjConfig::default(),
            equidist: EquidistConfig::default(),
            birkhoff: BirkhoffConfig::default(),
            master_seed: 1,
            output_dir: PathBuf::from("out"),
            thread_count: 0,
        }
    }
}

fn invalid(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field,
        message: message.into(),
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
            path: origin.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text, &path.display().to_string())
    }

    /// Range checks that the numerical layer does not make itself.
    pub fn check(&self) -> Result<(), ConfigError> {
        let [lo, hi] = self.periodic.n_range;
        if lo == 0 || lo > hi {
            return Err(invalid("periodic.n_range", format!("need 1 <= lo <= hi, got [{lo}, {hi}]")));
        }
        let [lo, hi] = self.equidist.n_range;
        if lo == 0 || lo > hi {
            return Err(invalid("equidist.n_range", format!("need 1 <= lo <= hi, got [{lo}, {hi}]")));
        }
        if self.equidist.grid == 0 {
            return Err(invalid("equidist.grid", "must be positive"));
        }
        if !(self.bowen.epsilon > 0.0) {
            return Err(invalid("bowen.epsilon", "must be positive"));
        }
        if self.semiconj.depth == 0 || self.equidist.depth == 0 {
            return Err(invalid("semiconj.depth", "depths must be positive"));
        }
        if self.semiconj.sweep.contains(&0) {
            return Err(invalid("semiconj.sweep", "depths must be positive"));
        }
        if self.semiconj.samples == 0 || self.contracting.samples == 0 {
            return Err(invalid("samples", "sample counts must be positive"));
        }
        if self.lyapunov.horizon == 0 || self.contracting.horizon == 0 || self.birkhoff.horizon == 0 {
            return Err(invalid("horizon", "horizons must be positive"));
        }
        if self.birkhoff.starts < 2 {
            return Err(invalid("birkhoff.starts", "need at least 2"));
        }
        Ok(())
    }
}
