//! Bound states of `h = p²/2 + V(r)` for spherical potentials: levels,
//! counts, spin-doubled eigensums and occupied densities.

mod channel;
mod hartree;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::DensityProfile;
use crate::error::{Error, Result};
use crate::numerics::RadialGrid;
use crate::tf_model::TfSolution;

use channel::Channel;
pub use hartree::{hartree_potential, HartreePotential};

/// A spherical one-body potential `V(r)`.
#[derive(Clone)]
pub struct RadialPotential {
    tag: String,
    coulomb_charge: f64,
    eval: Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>,
}

impl fmt::Debug for RadialPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialPotential")
            .field("tag", &self.tag)
            .field("coulomb_charge", &self.coulomb_charge)
            .finish_non_exhaustive()
    }
}

impl RadialPotential {
    /// `coulomb_charge` is `Z` in the `−Z/r` behavior at the origin (zero for
    /// regular potentials); it sets the inner grid edge and the energy floor.
    pub fn new(
        tag: impl Into<String>,
        coulomb_charge: f64,
        eval: impl Fn(f64) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            tag: tag.into(),
            coulomb_charge,
            eval: Arc::new(eval),
        }
    }

    pub fn coulomb(z: f64) -> Self {
        Self::new(format!("coulomb:{z}"), z, move |r| Ok(-z / r))
    }

    /// `−Z^{4/3} φ(Z^{1/3} r/b₀)/(Z^{1/3} r)`, the Thomas–Fermi potential.
    pub fn thomas_fermi(sol: Arc<TfSolution>, z: f64) -> Self {
        Self::new(format!("tf:{z}"), z, move |r| sol.potential_unscaled(z, r))
    }

    /// `−Z/r + v_H(r)`: a nucleus screened by a fixed charge cloud.
    pub fn screened_nucleus(tag: impl Into<String>, z: f64, hartree: HartreePotential) -> Self {
        Self::new(tag, z, move |r| Ok(-z / r + hartree.at(r)))
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn coulomb_charge(&self) -> f64 {
        self.coulomb_charge
    }

    pub fn at(&self, r: f64) -> Result<f64> {
        (self.eval)(r)
    }

    fn sample(&self, grid: &RadialGrid) -> Result<Vec<f64>> {
        let values = grid
            .nodes()
            .iter()
            .map(|&r| self.at(r))
            .collect::<Result<Vec<_>>>()?;
        if let Some(node) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Evaluation {
                node,
                r: grid.nodes()[node],
                value: values[node],
            });
        }
        Ok(values)
    }
}

/// Discretization and search window for the eigensolver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpectrumOptions {
    /// Inner grid edge in units of `1/Z`.
    pub r_min_scaled: f64,
    /// Outer grid edge in Bohr.
    pub r_max: f64,
    /// Step in `ln r`.
    pub log_step: f64,
    /// Levels at or above this energy are not reported.
    pub energy_ceiling: f64,
    /// Relative width at which level bisection stops.
    pub energy_tolerance: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            r_min_scaled: 1e-5,
            r_max: 1e6,
            log_step: 0.004,
            energy_ceiling: -1e-9,
            energy_tolerance: 1e-14,
        }
    }
}

impl SpectrumOptions {
    pub fn grid_for(&self, potential: &RadialPotential) -> Result<RadialGrid> {
        let r_min = self.r_min_scaled / potential.coulomb_charge.max(1.0);
        RadialGrid::log_with_step(r_min, self.r_max, self.log_step)
    }

    fn energy_floor(&self, potential: &RadialPotential, channel: &Channel) -> f64 {
        let z = potential.coulomb_charge;
        (-0.75 * z * z).min(1.5 * channel.effective_minimum()).min(-1e-300)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenLevel {
    pub ell: usize,
    pub n_r: usize,
    pub energy: f64,
    /// `2(2ℓ + 1)`, spin included.
    pub degeneracy: usize,
}

impl EigenLevel {
    pub fn new(ell: usize, n_r: usize, energy: f64) -> Self {
        Self {
            ell,
            n_r,
            energy,
            degeneracy: 2 * (2 * ell + 1),
        }
    }
}

/// Radial functions `y` (with `u = r^{1/2} y`) parallel to the level list.
#[derive(Debug, Clone)]
pub struct Orbitals {
    pub grid: Arc<RadialGrid>,
    pub values: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumSummary {
    /// Ordered by `ℓ`, then by `n_r`.
    pub levels: Vec<EigenLevel>,
    /// Number of negative-energy states, degeneracy included.
    pub n_negative: usize,
    /// `Σ degeneracy · energy`.
    pub eigensum: f64,
    pub ell_max: Option<usize>,
    pub potential_tag: String,
    #[serde(skip)]
    pub orbitals: Option<Orbitals>,
}

impl SpectrumSummary {
    /// Rebuilds the aggregate fields from a level list (e.g. read from a
    /// cache); orbitals are not available.
    pub fn from_levels(potential_tag: impl Into<String>, levels: Vec<EigenLevel>) -> Self {
        let n_negative = levels.iter().map(|l| l.degeneracy).sum();
        let eigensum = levels
            .iter()
            .map(|l| l.degeneracy as f64 * l.energy)
            .sum();
        Self {
            ell_max: levels.iter().map(|l| l.ell).max(),
            levels,
            n_negative,
            eigensum,
            potential_tag: potential_tag.into(),
            orbitals: None,
        }
    }

    /// Levels in filling order: ascending energy, ties by `(ℓ, n_r)`.
    pub fn filling_order(&self) -> Vec<usize> {
        let mut order = (0..self.levels.len()).collect::<Vec<_>>();
        order.sort_by(|&a, &b| {
            let (la, lb) = (&self.levels[a], &self.levels[b]);
            la.energy
                .total_cmp(&lb.energy)
                .then(la.ell.cmp(&lb.ell))
                .then(la.n_r.cmp(&lb.n_r))
        });
        order
    }
}

/// All levels of one channel below the ceiling, with normalized orbitals.
pub fn solve_channel(
    potential: &RadialPotential,
    ell: usize,
    opts: &SpectrumOptions,
) -> Result<(Vec<EigenLevel>, Orbitals)> {
    let grid = Arc::new(opts.grid_for(potential)?);
    let v = potential.sample(&grid)?;
    let channel = Channel::new(&grid, &v, potential.coulomb_charge, ell);
    let sol = channel
        .solve(opts.energy_floor(potential, &channel), opts.energy_ceiling, opts.energy_tolerance)
        .map_err(|e| e.in_channel(ell))?;
    Ok((
        sol.levels,
        Orbitals {
            grid,
            values: sol.orbitals,
        },
    ))
}

/// Number of levels below the ceiling in each channel, from `ℓ = 0` up to
/// the first empty one (excluded). No eigenvalues are resolved.
pub fn count_bound_states(potential: &RadialPotential, opts: &SpectrumOptions) -> Result<Vec<usize>> {
    let grid = opts.grid_for(potential)?;
    let v = potential.sample(&grid)?;
    Ok(channel_counts(&grid, &v, potential, opts))
}

fn channel_counts(
    grid: &RadialGrid,
    v: &[f64],
    potential: &RadialPotential,
    opts: &SpectrumOptions,
) -> Vec<usize> {
    let mut counts = Vec::new();
    loop {
        let channel = Channel::new(grid, v, potential.coulomb_charge, counts.len());
        let c = if channel.effective_minimum() >= opts.energy_ceiling {
            0
        } else {
            channel.count_below(opts.energy_ceiling)
        };
        if c == 0 {
            return counts;
        }
        counts.push(c);
    }
}

/// Sweeps `ℓ = 0, 1, …` until a channel is certified empty and aggregates
/// the levels. Channels run in parallel; the reduction is in `ℓ` order, so
/// the result does not depend on the thread count.
pub fn full_spectrum(potential: &RadialPotential, opts: &SpectrumOptions) -> Result<SpectrumSummary> {
    let grid = Arc::new(opts.grid_for(potential)?);
    let v = potential.sample(&grid)?;
    spectrum_below(potential, grid, &v, opts, opts.energy_ceiling)
}

/// The lowest `n_states` states (degeneracy included) of `potential`, or all
/// of them below the ceiling if there are fewer.
///
/// Levels are resolved only up to the energy where the cumulative count
/// reaches `n_states`, which keeps potentials with a long-range Coulomb tail
/// (and hence an infinite Rydberg series) tractable.
pub fn lowest_states(
    potential: &RadialPotential,
    n_states: usize,
    opts: &SpectrumOptions,
) -> Result<SpectrumSummary> {
    let grid = Arc::new(opts.grid_for(potential)?);
    let v = potential.sample(&grid)?;
    let total = |e: f64| -> usize {
        let o = SpectrumOptions {
            energy_ceiling: e,
            ..*opts
        };
        channel_counts(&grid, &v, potential, &o)
            .iter()
            .zip(0..)
            .map(|(c, ell)| c * 2 * (2 * ell + 1))
            .sum()
    };
    let mut hi = opts.energy_ceiling;
    if total(hi) > n_states {
        let channel = Channel::new(&grid, &v, potential.coulomb_charge, 0);
        let mut lo = opts.energy_floor(potential, &channel);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 1e-12 * hi.abs() {
                break;
            }
            if total(mid) >= n_states {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    spectrum_below(potential, grid, &v, opts, hi)
}

fn spectrum_below(
    potential: &RadialPotential,
    grid: Arc<RadialGrid>,
    v: &[f64],
    opts: &SpectrumOptions,
    ceiling: f64,
) -> Result<SpectrumSummary> {
    let opts = SpectrumOptions {
        energy_ceiling: ceiling,
        ..*opts
    };
    let counts = channel_counts(&grid, v, potential, &opts);
    let solved = (0..counts.len())
        .into_par_iter()
        .map(|ell| {
            let channel = Channel::new(&grid, v, potential.coulomb_charge, ell);
            let sol = channel
                .solve(opts.energy_floor(potential, &channel), ceiling, opts.energy_tolerance)
                .map_err(|e| e.in_channel(ell))?;
            if sol.levels.len() != counts[ell] {
                return Err(Error::Domain(format!(
                    "found {} levels, expected {}",
                    sol.levels.len(),
                    counts[ell]
                ))
                .in_channel(ell));
            }
            Ok(sol)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut levels = Vec::new();
    let mut values = Vec::new();
    for sol in solved {
        levels.extend(sol.levels);
        values.extend(sol.orbitals);
    }
    log::debug!(
        "{}: {} levels over {} channels below {ceiling}",
        potential.tag,
        levels.len(),
        counts.len()
    );
    let mut summary = SpectrumSummary::from_levels(potential.tag.clone(), levels);
    summary.orbitals = Some(Orbitals { grid, values });
    Ok(summary)
}

/// Density of the lowest `n_electrons` states of a spectrum.
#[derive(Debug, Clone)]
pub struct OccupiedDensity {
    pub density: DensityProfile,
    /// Electrons actually placed, `min(n_electrons, n_negative)`.
    pub occupied: f64,
    /// `n_electrons − occupied`.
    pub deficit: f64,
    /// `Σ occupation · energy` over the filled levels.
    pub occupied_eigensum: f64,
    /// Occupation of each level, parallel to `levels`.
    pub occupations: Vec<f64>,
}

/// Occupation numbers for the lowest `n_electrons` states; the last shell is
/// filled fractionally and uniformly.
pub fn occupations(summary: &SpectrumSummary, n_electrons: f64) -> Vec<f64> {
    let mut occ = vec![0.0; summary.levels.len()];
    let mut left = n_electrons.max(0.0);
    for i in summary.filling_order() {
        if left <= 0.0 {
            break;
        }
        let g = summary.levels[i].degeneracy as f64;
        occ[i] = g.min(left);
        left -= occ[i];
    }
    occ
}

/// Spin-summed density `Σ occupation · u²/(4π r²)` of the lowest levels.
pub fn occupied_density(summary: &SpectrumSummary, n_electrons: f64) -> Result<OccupiedDensity> {
    let orbitals = summary
        .orbitals
        .as_ref()
        .ok_or_else(|| Error::Argument("spectrum carries no orbitals".into()))?;
    let occupations = occupations(summary, n_electrons);
    let grid = &orbitals.grid;
    let mut values = vec![0.0; grid.len()];
    let mut min_ell = usize::MAX;
    for ((y, &occ), level) in orbitals.values.iter().zip(&occupations).zip(&summary.levels) {
        if occ == 0.0 {
            continue;
        }
        min_ell = min_ell.min(level.ell);
        for ((d, yi), r) in values.iter_mut().zip(y).zip(grid.nodes()) {
            *d += occ * yi * yi / (4.0 * PI * r);
        }
    }
    let small = if min_ell == usize::MAX { 0.0 } else { 2.0 * min_ell as f64 };
    let occupied = occupations.iter().sum::<f64>();
    let occupied_eigensum = occupations
        .iter()
        .zip(&summary.levels)
        .map(|(o, l)| o * l.energy)
        .sum();
    if occupied < n_electrons {
        log::info!(
            "{}: only {occupied} of {n_electrons} electrons bound",
            summary.potential_tag
        );
    }
    Ok(OccupiedDensity {
        density: DensityProfile::new(grid.clone(), values, small, f64::NEG_INFINITY)?,
        occupied,
        deficit: (n_electrons - occupied).max(0.0),
        occupied_eigensum,
        occupations,
    })
}
