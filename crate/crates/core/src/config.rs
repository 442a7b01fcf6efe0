//! Run configuration shared by the command-line subcommands.
//!
//! Values come from built-in defaults, optionally overridden by a TOML file,
//! then by command-line flags.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundsSetup, DEFAULT_ALPHA, DEFAULT_Z_SWEEP};
use crate::density::{DEFAULT_NODES, DEFAULT_R_MAX, DEFAULT_R_MIN};
use crate::error::{Error, Result};
use crate::numerics::RadialGrid;
use crate::spectrum::SpectrumOptions;
use crate::tf_energy::DEFAULT_NORM_TOLERANCE;
use crate::tf_model::{TfSolution, DEFAULT_TOLERANCE};

/// Environment variable that overrides the configured cache directory.
pub const CACHE_DIR_ENV: &str = "TFBOUND_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".tfbound-cache";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Scaled radial grid (`R = Z^{1/3} r`) for densities and energy integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub nodes: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            r_min: DEFAULT_R_MIN,
            r_max: DEFAULT_R_MAX,
            nodes: DEFAULT_NODES,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Local error target of the screening-function integration.
    pub ode: f64,
    /// Relative width at which eigenvalue bisection stops.
    pub eigen: f64,
    /// Normalization error tolerated before energy evaluation warns.
    pub quadrature: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            ode: DEFAULT_TOLERANCE,
            eigen: SpectrumOptions::default().energy_tolerance,
            quadrature: DEFAULT_NORM_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MinimizeConfig {
    pub step: f64,
    pub max_iter: usize,
}

impl Default for MinimizeConfig {
    fn default() -> Self {
        Self {
            step: 1.0,
            max_iter: 5000,
        }
    }
}

/// Eigensolver grid; the energy tolerance lives in [`Tolerances::eigen`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub r_min_scaled: f64,
    pub r_max: f64,
    pub log_step: f64,
    pub energy_ceiling: f64,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        let d = SpectrumOptions::default();
        Self {
            r_min_scaled: d.r_min_scaled,
            r_max: d.r_max,
            log_step: d.log_step,
            energy_ceiling: d.energy_ceiling,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridConfig,
    pub spectrum: SpectrumConfig,
    pub tolerances: Tolerances,
    pub minimize: MinimizeConfig,
    pub alpha: f64,
    pub z_list: Vec<u32>,
    pub cache_dir: Option<PathBuf>,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid: GridConfig::default(),
            spectrum: SpectrumConfig::default(),
            tolerances: Tolerances::default(),
            minimize: MinimizeConfig::default(),
            alpha: DEFAULT_ALPHA,
            z_list: DEFAULT_Z_SWEEP.to_vec(),
            cache_dir: None,
            format: OutputFormat::Csv,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        for (name, v) in [("ode", t.ode), ("eigen", t.eigen), ("quadrature", t.quadrature)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} tolerance must be positive, got {v}")));
            }
        }
        if self.z_list.is_empty() {
            return Err(Error::Config("Z list is empty".into()));
        }
        if self.z_list[0] == 0 || self.z_list.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config(format!(
                "Z list must be positive and strictly ascending, got {:?}",
                self.z_list
            )));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::Config(format!("alpha must be positive, got {}", self.alpha)));
        }
        let g = &self.grid;
        if !(g.r_min > 0.0 && g.r_max > g.r_min) || g.nodes < 5 || !(g.nodes - 1).is_multiple_of(4) {
            return Err(Error::Config(format!(
                "grid needs 0 < r_min < r_max and 4k+1 nodes, got {g:?}"
            )));
        }
        let s = &self.spectrum;
        if !(s.r_min_scaled > 0.0 && s.r_max > 0.0 && s.log_step > 0.0 && s.energy_ceiling < 0.0) {
            return Err(Error::Config(format!("invalid spectrum settings {s:?}")));
        }
        if !(self.minimize.step > 0.0 && self.minimize.step <= 1.0) {
            return Err(Error::Config(format!(
                "minimizer step must lie in (0, 1], got {}",
                self.minimize.step
            )));
        }
        Ok(())
    }

    pub fn scaled_grid(&self) -> Result<Arc<RadialGrid>> {
        let g = &self.grid;
        Ok(Arc::new(RadialGrid::log_uniform(g.r_min, g.r_max, g.nodes)?))
    }

    pub fn spectrum_options(&self) -> SpectrumOptions {
        let s = &self.spectrum;
        SpectrumOptions {
            r_min_scaled: s.r_min_scaled,
            r_max: s.r_max,
            log_step: s.log_step,
            energy_ceiling: s.energy_ceiling,
            energy_tolerance: self.tolerances.eigen,
        }
    }

    pub fn bounds_setup(&self, tf: Arc<TfSolution>) -> Result<BoundsSetup> {
        Ok(BoundsSetup {
            tf,
            scaled_grid: self.scaled_grid()?,
            spectrum: self.spectrum_options(),
        })
    }

    /// Effective cache directory: the environment override wins over the
    /// configured value.
    pub fn resolved_cache_dir(&self) -> PathBuf {
        std::env::var_os(CACHE_DIR_ENV)
            .map(PathBuf::from)
            .or_else(|| self.cache_dir.clone())
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid_and_round_trip() {
        let c = RunConfig::default();
        c.validate().unwrap();
        let text = c.to_toml_string().unwrap();
        assert_eq!(RunConfig::from_toml_str(&text).unwrap(), c);
    }

    #[test]
    fn partial_file_keeps_defaults() {
        let c = RunConfig::from_toml_str("alpha = 2.0\nz_list = [10, 20]\n[grid]\nnodes = 2001\n").unwrap();
        assert_eq!(c.alpha, 2.0);
        assert_eq!(c.z_list, vec![10, 20]);
        assert_eq!(c.grid.nodes, 2001);
        assert_eq!(c.grid.r_max, DEFAULT_R_MAX);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        assert!(RunConfig::from_toml_str("unknown = 1").is_err());
        let c = RunConfig {
            z_list: vec![400, 100],
            ..Default::default()
        };
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.tolerances.ode = 0.0;
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.grid.nodes = 4000;
        assert!(c.validate().is_err());
    }
}
