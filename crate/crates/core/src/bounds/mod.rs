//! Upper and lower bounds on the ground-state energy of a neutral atom and
//! the sweep over `Z` showing that both approach the Thomas–Fermi value.
//!
//! Energies are in Hartree; "scaled" values are multiplied by `Z^{-7/3}`.

mod exchange;
mod lower;
mod upper;

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::default_grid;
use crate::error::{Error, Result};
use crate::numerics::{fit_line, LineFit, RadialGrid};
use crate::spectrum::SpectrumOptions;
use crate::tf_model::TfSolution;

pub use exchange::{exchange_energy, gaunt_squared};
pub use lower::{lower_bound, regularized_density, LowerBoundBreakdown};
pub use upper::{direct_interaction_bound, upper_bound, UpperBoundBreakdown};

/// Shared inputs of every bound evaluation.
#[derive(Debug, Clone)]
pub struct BoundsSetup {
    pub tf: Arc<TfSolution>,
    /// Grid in the scaled variable `R = Z^{1/3} r` for the regularized density.
    pub scaled_grid: Arc<RadialGrid>,
    pub spectrum: SpectrumOptions,
}

impl BoundsSetup {
    pub fn new(tf: Arc<TfSolution>) -> Self {
        Self {
            tf,
            scaled_grid: default_grid(),
            spectrum: SpectrumOptions::default(),
        }
    }
}

pub const DEFAULT_ALPHA: f64 = 1.0;
pub const DEFAULT_Z_SWEEP: [u32; 4] = [100, 400, 1600, 6400];

/// `Z^{7/3}`, the energy scale of a neutral atom.
pub fn energy_scale(z: u32) -> f64 {
    f64::from(z).powf(7.0 / 3.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub z: u32,
    pub upper: UpperBoundBreakdown,
    pub lower: LowerBoundBreakdown,
    /// `upper.total − lower.total`.
    pub gap: f64,
}

impl BoundsRow {
    pub fn compute(z: u32, alpha: f64, setup: &BoundsSetup) -> Result<Self> {
        let (upper, lower) = rayon::join(
            || upper_bound(z, setup),
            || lower_bound(z, alpha, setup),
        );
        let (upper, lower) = (upper?, lower?);
        let gap = upper.total - lower.total;
        if gap < 0.0 {
            log::warn!("Z = {z}: lower bound exceeds upper bound by {}", -gap);
        }
        Ok(Self {
            z,
            upper,
            lower,
            gap,
        })
    }

    pub fn scaled_gap(&self) -> f64 {
        self.gap / energy_scale(self.z)
    }
}

/// Flat CSV record of a row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsRecord {
    #[serde(rename = "Z")]
    pub z: u32,
    pub upper_total: f64,
    pub lower_total: f64,
    pub upper_scaled: f64,
    pub lower_scaled: f64,
    pub gap: f64,
    pub correction_scaled: f64,
    pub occupied_deficit: usize,
}

impl From<&BoundsRow> for BoundsRecord {
    fn from(row: &BoundsRow) -> Self {
        Self {
            z: row.z,
            upper_total: row.upper.total,
            lower_total: row.lower.total,
            upper_scaled: row.upper.scaled,
            lower_scaled: row.lower.scaled,
            gap: row.gap,
            correction_scaled: row.lower.correction / energy_scale(row.z),
            occupied_deficit: row.upper.occupied_deficit,
        }
    }
}

/// Straight-line fits of the scaled bounds against `Z^{-1/3}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub upper_intercept: Option<f64>,
    pub lower_intercept: Option<f64>,
    pub upper_slope: Option<f64>,
    pub lower_slope: Option<f64>,
    pub residuals: FitResiduals,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResiduals {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    pub rows: Vec<BoundsRow>,
    pub fit: FitSummary,
}

/// `Z^{-1/3}`, the abscissa of the convergence fits.
pub fn fit_abscissa(z: u32) -> f64 {
    f64::from(z).powf(-1.0 / 3.0)
}

/// Evaluates both bounds for each `Z` (in parallel, joined in order) and fits
/// `scaled ≈ c₀ + c₁ Z^{-1/3}` for each bound. A single `Z` yields no fit.
pub fn convergence_table(z_list: &[u32], alpha: f64, setup: &BoundsSetup) -> Result<ConvergenceTable> {
    validate_z_list(z_list)?;
    let rows = z_list
        .par_iter()
        .map(|&z| BoundsRow::compute(z, alpha, setup).map_err(|e| e.at_charge(z)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTable::from_rows(rows))
}

/// Rejects an empty, non-positive or non-ascending list of charges.
pub fn validate_z_list(z_list: &[u32]) -> Result<()> {
    if z_list.is_empty() {
        return Err(Error::Argument("empty Z list".into()));
    }
    if z_list.windows(2).any(|w| w[1] <= w[0]) || z_list[0] == 0 {
        return Err(Error::Argument(format!(
            "Z list must be positive and strictly ascending, got {z_list:?}"
        )));
    }
    Ok(())
}

impl ConvergenceTable {
    /// Fits rows that were already computed (for instance, loaded from a cache).
    pub fn from_rows(rows: Vec<BoundsRow>) -> Self {
        let xs = rows.iter().map(|r| fit_abscissa(r.z)).collect::<Vec<_>>();
        let upper = fit_line(&xs, &rows.iter().map(|r| r.upper.scaled).collect::<Vec<_>>());
        let lower = fit_line(&xs, &rows.iter().map(|r| r.lower.scaled).collect::<Vec<_>>());
        ConvergenceTable {
            rows,
            fit: summarize(upper, lower),
        }
    }
}

fn summarize(upper: LineFit, lower: LineFit) -> FitSummary {
    FitSummary {
        upper_intercept: upper.intercept,
        lower_intercept: lower.intercept,
        upper_slope: upper.slope,
        lower_slope: lower.slope,
        residuals: FitResiduals {
            upper: upper.residuals,
            lower: lower.residuals,
        },
    }
}
