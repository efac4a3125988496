//! Job configuration: a single JSON document with a versioned schema tag.
//! Unknown keys are rejected at every level.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::construct::Kind;
use crate::error::{Error, Result};
use crate::surface::SSurface;

pub const SCHEMA: &str = "elopt.job/1";

pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_FEASIBILITY_SAMPLES: usize = 1_000;
pub const DEFAULT_GRID: [usize; 2] = [16, 32];
pub const DEFAULT_SAMPLE_POINTS: usize = 21;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub schema: String,
    pub surface: SSurface,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Pair samples for the EL suite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Surface samples for the feasibility check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feasibility_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Restricts `construct`, `check` and `sample` to one construction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<Kind>,
    /// Serialized expression for `check` and `sample`, relative to the
    /// config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<PathBuf>,
    /// Grid points per axis for `sample`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_points: Option<usize>,
    /// Also write each grid LP in CPLEX LP format.
    #[serde(default)]
    pub lp_dump: bool,
}

impl JobConfig {
    pub fn new(surface: SSurface) -> Self {
        JobConfig {
            schema: SCHEMA.to_string(),
            surface,
            seed: None,
            samples: None,
            feasibility_samples: None,
            grid: None,
            out: None,
            construction: None,
            expr: None,
            sample_points: None,
            lp_dump: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: JobConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if cfg.schema != SCHEMA {
            return Err(Error::Config(format!(
                "unsupported schema {:?}, expected {SCHEMA:?}",
                cfg.schema
            )));
        }
        if let Some(grid) = &cfg.grid {
            if grid.is_empty() {
                return Err(Error::Config("grid list is empty".into()));
            }
        }
        if cfg.sample_points.is_some_and(|n| n < 2) {
            return Err(Error::Config("sample_points must be at least 2".into()));
        }
        Ok(cfg)
    }

    /// Reads a config; a relative `expr` path is resolved against the
    /// config file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_json(&text)?;
        if let (Some(expr), Some(dir)) = (&cfg.expr, path.parent()) {
            if expr.is_relative() {
                cfg.expr = Some(dir.join(expr));
            }
        }
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}
