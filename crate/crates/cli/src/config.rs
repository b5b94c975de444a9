use std::path::{Path, PathBuf};

use holonomy::npc::{DEFAULT_QUADRATURE_TOLERANCE, DEFAULT_SAMPLES, DEFAULT_SUBGRID};
use holonomy::Tolerances;
use holonomy_acceptance::DEFAULT_SEED;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Settings shared by every subcommand. Loaded from `--config`, then
/// overridden by individual flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub tolerances: Tolerances,
    /// Samples per generated curve.
    pub samples: usize,
    /// Points of the verification subgrid.
    pub subgrid: usize,
    /// Bound on the quadrature error estimate of connection integrals.
    pub quadrature_tolerance: f64,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            samples: DEFAULT_SAMPLES,
            subgrid: DEFAULT_SUBGRID,
            quadrature_tolerance: DEFAULT_QUADRATURE_TOLERANCE,
            seed: DEFAULT_SEED,
            output: None,
        }
    }
}

/// Flag values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub subgrid: Option<usize>,
    pub tol_deg: Option<f64>,
    pub tol_npc: Option<f64>,
    pub tol_lead: Option<f64>,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>, over: &Overrides) -> Result<Self, CliError> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", p.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Usage(format!("bad config {}: {e}", p.display())))?
            }
            None => RunConfig::default(),
        };
        if let Some(v) = over.seed {
            cfg.seed = v;
        }
        if let Some(v) = over.samples {
            cfg.samples = v;
        }
        if let Some(v) = over.subgrid {
            cfg.subgrid = v;
        }
        if let Some(v) = over.tol_deg {
            cfg.tolerances.degeneracy = v;
        }
        if let Some(v) = over.tol_npc {
            cfg.tolerances.npc = v;
        }
        if let Some(v) = over.tol_lead {
            cfg.tolerances.leading = v;
        }
        if over.output.is_some() {
            cfg.output.clone_from(&over.output);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.tolerances.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        if !(self.quadrature_tolerance > 0.0 && self.quadrature_tolerance.is_finite()) {
            return Err(CliError::Usage("quadrature tolerance must be positive".into()));
        }
        if self.samples < 3 || self.subgrid < 3 {
            return Err(CliError::Usage(format!(
                "grid sizes must be at least 3 (samples {}, subgrid {})",
                self.samples, self.subgrid
            )));
        }
        Ok(())
    }
}
