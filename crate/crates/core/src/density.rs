//! Spherical densities on a radial grid, with power-law continuation past
//! both grid ends.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::quadrature::{check_finite, cumulative, cumulative_from_right};
use crate::numerics::{integrate_radial_values, RadialGrid, Tails};
use crate::tf_model::TfSolution;

/// Default scaled grid for Thomas–Fermi profiles.
pub const DEFAULT_R_MIN: f64 = 1e-6;
pub const DEFAULT_R_MAX: f64 = 1e4;
pub const DEFAULT_NODES: usize = 4001;

pub fn default_grid() -> Arc<RadialGrid> {
    Arc::new(RadialGrid::log_uniform(DEFAULT_R_MIN, DEFAULT_R_MAX, DEFAULT_NODES).expect("valid default grid"))
}

#[derive(Debug, Clone)]
pub struct DensityProfile {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
    /// `ρ ~ R^p` below the grid.
    pub small_r_exponent: f64,
    /// `ρ ~ R^q` above the grid; `-inf` means faster than any power.
    pub large_r_exponent: f64,
    total_norm: f64,
}

impl DensityProfile {
    pub fn new(
        grid: Arc<RadialGrid>,
        values: Vec<f64>,
        small_r_exponent: f64,
        large_r_exponent: f64,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Argument(format!(
                "{} density values for {} grid nodes",
                values.len(),
                grid.len()
            )));
        }
        check_finite(&values, &grid)?;
        if let Some(i) = values.iter().position(|&v| v < 0.0) {
            return Err(Error::Domain(format!(
                "negative density {} at R = {}",
                values[i],
                grid.nodes()[i]
            )));
        }
        let tails = tails_for(small_r_exponent, large_r_exponent);
        let total_norm = integrate_radial_values(&values, &grid, tails)?;
        Ok(Self {
            grid,
            values,
            small_r_exponent,
            large_r_exponent,
            total_norm,
        })
    }

    pub fn from_fn(
        grid: Arc<RadialGrid>,
        f: impl Fn(f64) -> f64,
        small_r_exponent: f64,
        large_r_exponent: f64,
    ) -> Result<Self> {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self::new(grid, values, small_r_exponent, large_r_exponent)
    }

    /// Like [`DensityProfile::from_fn`] for a fallible sampler.
    pub fn from_fn_checked(
        grid: Arc<RadialGrid>,
        f: impl Fn(f64) -> Result<f64>,
        small_r_exponent: f64,
        large_r_exponent: f64,
    ) -> Result<Self> {
        let values = grid.nodes().iter().map(|&r| f(r)).collect::<Result<Vec<_>>>()?;
        Self::new(grid, values, small_r_exponent, large_r_exponent)
    }

    /// `ρ_TF` on `grid` (`R^{-3/2}` at the origin, `R^{-6}` at infinity).
    pub fn thomas_fermi(sol: &TfSolution, grid: Arc<RadialGrid>) -> Result<Self> {
        let values = grid
            .nodes()
            .iter()
            .map(|&r| sol.rho_tf(r))
            .collect::<Result<Vec<_>>>()?;
        Self::new(grid, values, -1.5, -6.0)
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Cached `∫ρ d³R`.
    pub fn total_norm(&self) -> f64 {
        self.total_norm
    }

    pub fn tails(&self) -> Tails {
        tails_for(self.small_r_exponent, self.large_r_exponent)
    }

    /// Same profile multiplied by a constant.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.grid.clone(),
            self.values.iter().map(|v| v * factor).collect(),
            self.small_r_exponent,
            self.large_r_exponent,
        )
    }

    /// `∫ ρ^power d³R`.
    pub fn integrate_power(&self, power: f64) -> Result<f64> {
        let vals = self.values.iter().map(|v| v.powf(power)).collect::<Vec<_>>();
        integrate_radial_values(&vals, &self.grid, self.tails().powered(power))
    }

    /// `∫ ρ R^k d³R`.
    pub fn moment(&self, k: f64) -> Result<f64> {
        let vals = self
            .values
            .iter()
            .zip(self.grid.nodes())
            .map(|(v, r)| v * r.powf(k))
            .collect::<Vec<_>>();
        integrate_radial_values(&vals, &self.grid, self.tails().shifted(k))
    }

    /// `∫ |ρ − σ| d³R` over the grid (both profiles must share it).
    pub fn l1_distance(&self, other: &DensityProfile) -> Result<f64> {
        self.require_same_grid(other)?;
        let diff = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .collect::<Vec<_>>();
        integrate_radial_values(&diff, &self.grid, Tails::NONE)
    }

    pub(crate) fn require_same_grid(&self, other: &DensityProfile) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid {
            Ok(())
        } else {
            Err(Error::Argument("profiles live on different grids".into()))
        }
    }

    /// Enclosed charge `Q(R_i) = ∫_{|R'|<R_i} ρ d³R'`, including the analytic
    /// head below the grid.
    pub fn enclosed_charge(&self) -> Result<Vec<f64>> {
        let p = self.small_r_exponent;
        if p <= -3.0 {
            return Err(Error::Divergence(format!(
                "density exponent {p} at the origin has infinite charge"
            )));
        }
        let r0 = self.grid.r_min();
        let head = 4.0 * PI * self.values[0] * r0.powi(3) / (p + 3.0);
        let shell = self
            .values
            .iter()
            .zip(self.grid.nodes())
            .map(|(v, r)| 4.0 * PI * r * r * v)
            .collect::<Vec<_>>();
        Ok(cumulative(&shell, &self.grid)
            .into_iter()
            .map(|c| head + c)
            .collect())
    }

    /// Outer moment `P(R_i) = ∫_{|R'|>R_i} ρ/|R'| d³R'`, including the
    /// analytic tail beyond the grid.
    pub fn outer_moment(&self) -> Result<Vec<f64>> {
        let tail = self.tail_of_first_moment()?;
        let shell = self
            .values
            .iter()
            .zip(self.grid.nodes())
            .map(|(v, r)| 4.0 * PI * r * v)
            .collect::<Vec<_>>();
        Ok(cumulative_from_right(&shell, &self.grid)
            .into_iter()
            .map(|c| c + tail)
            .collect())
    }

    fn tail_of_first_moment(&self) -> Result<f64> {
        let q = self.large_r_exponent;
        if q == f64::NEG_INFINITY {
            return Ok(0.0);
        }
        if q >= -2.0 {
            return Err(Error::Divergence(format!(
                "density exponent {q} at infinity has infinite potential"
            )));
        }
        let n = self.values.len() - 1;
        let rn = self.grid.r_max();
        Ok(4.0 * PI * self.values[n] * rn * rn / (-q - 2.0))
    }

    /// Log-log slope fitted over the first and last decade of the grid.
    pub fn end_slopes(&self) -> (f64, f64) {
        let nodes = self.grid.nodes();
        let slope = |i: usize, j: usize| {
            (self.values[j].ln() - self.values[i].ln()) / (nodes[j].ln() - nodes[i].ln())
        };
        let n = nodes.len() - 1;
        let first = nodes.iter().position(|&r| r >= nodes[0] * 10.0).unwrap_or(n);
        let last = nodes.iter().rposition(|&r| r <= nodes[n] / 10.0).unwrap_or(0);
        (slope(0, first), slope(last, n))
    }
}

pub(crate) fn tails_for(small: f64, large: f64) -> Tails {
    Tails::new(
        Some(small),
        if large.is_finite() { Some(large) } else { None },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tf_model::{solve_tf, DEFAULT_TOLERANCE};

    #[test]
    fn tf_profile_normalized_with_expected_power_laws() {
        let sol = solve_tf(DEFAULT_TOLERANCE).unwrap();
        let rho = DensityProfile::thomas_fermi(&sol, default_grid()).unwrap();
        assert!((rho.total_norm() - 1.0).abs() < 1e-6, "norm {}", rho.total_norm());
        let (first, last) = rho.end_slopes();
        assert!((first + 1.5).abs() < 0.02 * 1.5, "first-decade slope {first}");
        assert!((last + 6.0).abs() < 0.02 * 6.0, "last-decade slope {last}");
        assert!(rho.values().windows(2).all(|w| w[1] < w[0]));
        assert!(rho.values().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn scaling_change_of_variables_preserves_charge() {
        let sol = solve_tf(DEFAULT_TOLERANCE).unwrap();
        let scaled = DensityProfile::thomas_fermi(&sol, default_grid()).unwrap();
        for &z in &[1.0_f64, 10.0, 92.0] {
            let grid = Arc::new(default_grid().scaled(1.0 / z.cbrt()));
            let n = DensityProfile::from_fn(grid, |r| sol.density_unscaled(z, r).unwrap(), -1.5, -6.0)
                .unwrap();
            let want = z * scaled.total_norm();
            assert!((n.total_norm() - want).abs() <= 1e-6 * want);
        }
    }

    #[test]
    fn rejects_negative_and_mismatched_input() {
        let g = Arc::new(RadialGrid::log_uniform(0.1, 1.0, 9).unwrap());
        assert!(DensityProfile::new(g.clone(), vec![1.0; 8], 0.0, -6.0).is_err());
        let mut v = vec![1.0; 9];
        v[3] = -0.1;
        assert!(DensityProfile::new(g, v, 0.0, -6.0).is_err());
    }
}
