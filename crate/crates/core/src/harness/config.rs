use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::conditions::{ConditionId, PhiSpec, ZamfirescuConstants};
use crate::maps::SelfMapSpec;
use crate::metric::{BoxDomain, MetricSpec, Point};
use crate::sampling::SamplingMode;
use crate::solver::SolverConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default)]
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

/// Closed interval `[lo, hi]` an estimated constant must land in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range(pub f64, pub f64);

impl Range {
    pub fn contains(&self, v: f64) -> bool {
        self.0 <= v && v <= self.1
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateExpectation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<Range>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Range>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Range>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxPoint {
    pub point: Point,
    /// Largest allowed coordinate-wise absolute difference.
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    T2,
    T23,
    Th3,
    /// No theorem applies.
    None,
}

/// Claims an experiment is expected to reproduce. Only declared entries are
/// checked; the process exit status is their conjunction.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    /// Sample satisfies the metric axioms and the reverse triangle law.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axioms: Option<bool>,
    /// `T` maps every sample point back into the domain box.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maps_into_domain: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<Theorem>,
    /// Conditions with zero violating pairs.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conditions_hold: Vec<ConditionId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimate: Option<EstimateExpectation>,
    /// Every run converged.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    /// Runs agree across starts and the uniqueness probe passes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unique_fixed_point: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_point: Option<ApproxPoint>,
    /// Upper bound on `log d(z, Tz)` of every run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_at_most: Option<f64>,
    /// Converged traces respect the a-priori bound at the certified delta.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound_holds: Option<bool>,
    /// Converged traces are Cauchy over their final window.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cauchy: Option<bool>,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: String,
    pub metric: MetricSpec,
    pub map: SelfMapSpec,
    pub domain: BoxDomain,
    pub sample_size: usize,
    #[serde(default)]
    pub sampling: SamplingMode,
    #[serde(default)]
    pub seed: u64,
    pub solver: SolverConfig,
    /// Enforce the domain box on iterates.
    #[serde(default = "default_true")]
    pub confine_to_domain: bool,
    /// Declared constants; estimated from the sample when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<ZamfirescuConstants>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<PhiSpec>,
    #[serde(default)]
    pub strict_margin: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniqueness_candidates: Option<Vec<Point>>,
    #[serde(default)]
    pub expect: Expectations,
    #[serde(default)]
    pub outputs: Outputs,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let config: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| HarnessError::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let invalid = |field: &str, msg: String| {
            Err(HarnessError::Invalid {
                field: field.to_string(),
                message: msg,
            })
        };
        if self.sample_size < 2 {
            return invalid("sample_size", format!("{} < 2", self.sample_size));
        }
        if let Some(d) = self.map.dim() {
            if d != self.domain.dim() {
                return invalid(
                    "map",
                    format!("map dimension {d} vs domain {}", self.domain.dim()),
                );
            }
        }
        self.map.validate().map_err(|e| HarnessError::Invalid {
            field: "map".into(),
            message: e.to_string(),
        })?;
        if let Some(c) = &self.constants {
            c.validate().map_err(|e| HarnessError::Invalid {
                field: "constants".into(),
                message: e.to_string(),
            })?;
        }
        if let Some(phi) = &self.phi {
            phi.certify_boundary().map_err(|e| HarnessError::Invalid {
                field: "phi".into(),
                message: e.to_string(),
            })?;
        }
        if let Some(s) = self
            .solver
            .starts
            .iter()
            .find(|s| s.dim() != self.domain.dim())
        {
            return invalid(
                "solver.starts",
                format!("start {s} has the wrong dimension"),
            );
        }
        self.solver.validate().map_err(|e| HarnessError::Invalid {
            field: "solver".into(),
            message: e.to_string(),
        })?;
        if self.confine_to_domain {
            if let Some(s) = self.solver.starts.iter().find(|s| !self.domain.contains(s)) {
                return invalid("solver.starts", format!("start {s} is outside the domain"));
            }
        }
        Ok(())
    }

    /// Solver settings with the domain box applied when confinement is on.
    pub fn effective_solver(&self) -> SolverConfig {
        let mut solver = self.solver.clone();
        if self.confine_to_domain {
            solver.domain = Some(self.domain.clone());
        }
        solver
    }
}
