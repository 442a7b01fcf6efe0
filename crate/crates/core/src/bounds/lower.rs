//! Lower bound: the one-body operator `h′ = p²/2 − Z/r + v_H[ρ_Z]` filled
//! with `Z` electrons, minus the Hartree self-energy of `ρ_Z` and the
//! correction term of the electrostatic inequality.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::density::DensityProfile;
use crate::error::{Error, Result};
use crate::numerics::RadialGrid;
use crate::spectrum::{hartree_potential, lowest_states, occupations, RadialPotential};
use crate::tf_energy::coulomb_double_integral;
use crate::tf_model::TfSolution;

use super::{energy_scale, BoundsSetup};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundBreakdown {
    #[serde(rename = "Z")]
    pub z: u32,
    pub alpha: f64,
    /// Sum of the lowest `Z` one-body energies of `h′` (spin included).
    pub eigensum_part: f64,
    /// `½ D(ρ_Z, ρ_Z)`, subtracted.
    pub hartree_sub: f64,
    /// `(3/2) π^{1/3} Z^{2/3} (∫ρ_Z²)^{1/3}`, subtracted.
    pub correction: f64,
    pub total: f64,
    pub scaled: f64,
    pub occupied_count: usize,
    pub occupied_deficit: usize,
}

/// `ρ_Z(r) = Z² ρ_TF(R) √(1 − e^{−ZαR})`, `R = Z^{1/3} r`, sampled on
/// `scaled_grid` mapped to `r`.
///
/// The square-root factor softens the `R^{-3/2}` cusp to `R^{-1}` inside
/// `R ≲ 1/(Zα)`, which makes `∫ρ_Z²` finite.
pub fn regularized_density(
    z: u32,
    alpha: f64,
    tf: &TfSolution,
    scaled_grid: &RadialGrid,
) -> Result<DensityProfile> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    if z == 0 {
        return Err(Error::Argument("Z must be at least 1".into()));
    }
    let zf = f64::from(z);
    let s = zf.powf(1.0 / 3.0);
    let values = scaled_grid
        .nodes()
        .iter()
        .map(|&big_r| Ok(zf * zf * tf.rho_tf(big_r)? * regularization(zf * alpha * big_r)))
        .collect::<Result<Vec<_>>>()?;
    DensityProfile::new(Arc::new(scaled_grid.scaled(1.0 / s)), values, -1.0, -6.0)
}

/// `√(1 − e^{−x})`.
pub(crate) fn regularization(x: f64) -> f64 {
    (-(-x).exp_m1()).sqrt()
}

pub fn lower_bound(z: u32, alpha: f64, setup: &BoundsSetup) -> Result<LowerBoundBreakdown> {
    let zf = f64::from(z);
    let rho = regularized_density(z, alpha, &setup.tf, &setup.scaled_grid)?;
    let vh = hartree_potential(&rho)?;
    let potential = RadialPotential::screened_nucleus(format!("screened:{z}:{alpha}"), zf, vh);
    let spectrum = lowest_states(&potential, z as usize, &setup.spectrum)?;
    let occ = occupations(&spectrum, zf);
    let eigensum_part = occ
        .iter()
        .zip(&spectrum.levels)
        .map(|(o, l)| o * l.energy)
        .sum::<f64>();
    let occupied = occ.iter().sum::<f64>();
    let hartree_sub = 0.5 * coulomb_double_integral(&rho, &rho)?;
    let correction = 1.5 * PI.cbrt() * zf.powf(2.0 / 3.0) * rho.integrate_power(2.0)?.cbrt();
    let total = eigensum_part - hartree_sub - correction;
    Ok(LowerBoundBreakdown {
        z,
        alpha,
        eigensum_part,
        hartree_sub,
        correction,
        total,
        scaled: total / energy_scale(z),
        occupied_count: occupied.round() as usize,
        occupied_deficit: (zf - occupied).max(0.0).round() as usize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regularization_factor_values() {
        assert!((regularization(1.0) - 0.795_060_097_6).abs() < 1e-10);
        assert!((regularization(50.0) - 1.0).abs() < 1e-15);
        assert!((regularization(1e-12) - 1e-6).abs() < 1e-12);
    }
}
