//! Upper bound: the energy of the Slater determinant built from the lowest
//! orbitals of the Thomas–Fermi potential, with exchange dropped.

use serde::{Deserialize, Serialize};

use crate::density::DensityProfile;
use crate::error::Result;
use crate::spectrum::{full_spectrum, occupied_density, RadialPotential};
use crate::tf_energy::coulomb_double_integral;

use super::{energy_scale, BoundsSetup};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperBoundBreakdown {
    #[serde(rename = "Z")]
    pub z: u32,
    /// Spin-weighted sum of the occupied one-body energies.
    pub eigensum_part: f64,
    /// `−D(n, n_occ) + ½ D(n_occ, n_occ)`.
    pub f_z_bound: f64,
    pub total: f64,
    pub scaled: f64,
    pub occupied_count: usize,
    /// Electrons left without a bound level (counted at zero energy).
    pub occupied_deficit: usize,
    /// All negative-energy states of the potential, degeneracy included.
    pub n_negative: usize,
}

/// `−D(n, n_occ) + ½ D(n_occ, n_occ)`: the electron–electron energy of the
/// determinant without exchange, minus the Hartree energy already contained
/// in the one-body potential.
pub fn direct_interaction_bound(n: &DensityProfile, n_occ: &DensityProfile) -> Result<f64> {
    Ok(-coulomb_double_integral(n, n_occ)? + 0.5 * coulomb_double_integral(n_occ, n_occ)?)
}

pub fn upper_bound(z: u32, setup: &BoundsSetup) -> Result<UpperBoundBreakdown> {
    let zf = f64::from(z);
    let potential = RadialPotential::thomas_fermi(setup.tf.clone(), zf);
    let spectrum = full_spectrum(&potential, &setup.spectrum)?;
    let occ = occupied_density(&spectrum, zf)?;
    let grid = occ.density.grid().clone();
    let tf = &setup.tf;
    let n = DensityProfile::from_fn_checked(grid, |r| tf.density_unscaled(zf, r), -1.5, -6.0)?;
    let f_z_bound = direct_interaction_bound(&n, &occ.density)?;
    let eigensum_part = occ.occupied_eigensum;
    let total = eigensum_part + f_z_bound;
    Ok(UpperBoundBreakdown {
        z,
        eigensum_part,
        f_z_bound,
        total,
        scaled: total / energy_scale(z),
        occupied_count: occ.occupied.round() as usize,
        occupied_deficit: occ.deficit.round() as usize,
        n_negative: spectrum.n_negative,
    })
}
