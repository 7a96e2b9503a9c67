//! Resolved invocation record.

use dual_nopa::{AxisSpec, Engine, SweepVar};
use serde::{Deserialize, Serialize};

/// Everything a run resolved to before computing: replaying a manifest
/// reproduces the run byte for byte. Round-trips losslessly through JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Subcommand name.
    pub subcommand: String,
    /// Fully resolved parameter record (defaults and file values folded
    /// in, flag overrides applied).
    pub config: ResolvedConfig,
    /// Sweep axes; empty for non-sweep commands.
    pub axes: Vec<ManifestAxis>,
    /// Output path; none means standard output.
    pub out: Option<String>,
    /// Output format.
    pub format: Format,
    /// Evaluation engine.
    pub engine: ManifestEngine,
}

/// Raw record with every optional field pinned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub x: f64,
    pub y: f64,
    pub gamma_r: f64,
    pub kappa_scale: f64,
    pub kappa: f64,
    pub alpha: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl ResolvedConfig {
    pub fn from_validated(cfg: &dual_nopa::SystemConfig) -> Self {
        Self {
            x: cfg.x,
            y: cfg.y,
            gamma_r: cfg.gamma_r,
            kappa_scale: cfg.kappa_scale,
            kappa: cfg.kappa,
            alpha: cfg.alpha,
            theta1: cfg.theta1,
            theta2: cfg.theta2,
            phi1: cfg.phi1,
            phi2: cfg.phi2,
        }
    }

}

/// Serializable mirror of a sweep axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ManifestAxis {
    pub var: ManifestVar,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ManifestVar {
    M,
    N,
    Phi,
}

impl From<AxisSpec> for ManifestAxis {
    fn from(a: AxisSpec) -> Self {
        Self {
            var: match a.var {
                SweepVar::M => ManifestVar::M,
                SweepVar::N => ManifestVar::N,
                SweepVar::Phi => ManifestVar::Phi,
            },
            lo: a.lo,
            hi: a.hi,
            count: a.count,
        }
    }
}

impl From<ManifestAxis> for AxisSpec {
    fn from(a: ManifestAxis) -> Self {
        Self {
            var: match a.var {
                ManifestVar::M => SweepVar::M,
                ManifestVar::N => SweepVar::N,
                ManifestVar::Phi => SweepVar::Phi,
            },
            lo: a.lo,
            hi: a.hi,
            count: a.count,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ManifestEngine {
    ClosedForm,
    StateSpace,
}

impl From<ManifestEngine> for Engine {
    fn from(e: ManifestEngine) -> Self {
        match e {
            ManifestEngine::ClosedForm => Engine::ClosedForm,
            ManifestEngine::StateSpace => Engine::StateSpace,
        }
    }
}
