use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tdirac_core::euler::GroupSpec;
use tdirac_core::exterior::FormJson;
use tdirac_core::transversal::TrigPoly;
use tdirac_core::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Relative gap below which eigenvalues are merged in spectra.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub merge: Option<f64>,
    /// Finite-difference step for mean curvature.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
}

/// One run of the workbench. Which fields are required depends on `command`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    /// Fourier truncation of lattice modes.
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Grid size or Fourier cutoff of the model.
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub big_n: Option<usize>,
    /// Dimension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grade: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twisted: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<TrigPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<TrigPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_mode: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_modes: Option<usize>,
    /// `warped`, `heisenberg` or `slope`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<String>,
    /// `L` or `Q`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub which: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<FormJson>,
    /// Preset torus action: `z4_rotation`, `negation` or `trivial`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    /// Integer matrices, one per group generator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<Vec<i64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lefschetz: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(t) = &self.tolerances {
            for (name, v) in [("merge", t.merge), ("step", t.step)] {
                if let Some(v) = v {
                    check_positive(name, v)?;
                }
            }
        }
        Ok(())
    }

    pub fn merge_tol(&self) -> Option<f64> {
        self.tolerances.as_ref().and_then(|t| t.merge)
    }

    pub fn step(&self) -> Option<f64> {
        self.tolerances.as_ref().and_then(|t| t.step)
    }

    /// Applies a command-line `--tol`, which overrides the merge tolerance.
    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        check_positive("tol", tol)?;
        self.tolerances.get_or_insert_with(Tolerances::default).merge = Some(tol);
        Ok(self)
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("tolerance `{name}` must be positive, got {v}")))
    }
}

pub(crate) fn require<T: Clone>(field: &Option<T>, name: &str, command: &str) -> Result<T> {
    field
        .clone()
        .ok_or_else(|| Error::InvalidArgument(format!("command `{command}` needs `{name}`")))
}
