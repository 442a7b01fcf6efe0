//! Electrostatic potential of a spherical charge density.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::density::DensityProfile;
use crate::error::{Error, Result};
use crate::numerics::interp::interpolate;
use crate::numerics::RadialGrid;

/// `v_H(r) = Q(r)/r + ∫_{r'>r} 4π r' ρ dr'` tabulated on the density grid.
#[derive(Debug, Clone)]
pub struct HartreePotential {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
    /// Charge of the whole profile, the coefficient of the `1/r` tail.
    pub total_charge: f64,
    small_r_exponent: f64,
    head_density: f64,
}

/// Newton's-theorem potential of `rho`, returned together with its total
/// charge.
pub fn hartree_potential(rho: &DensityProfile) -> Result<HartreePotential> {
    let p = rho.small_r_exponent;
    if p <= -2.0 {
        return Err(Error::Divergence(format!(
            "density exponent {p} at the origin has an infinite inner moment"
        )));
    }
    let q = rho.enclosed_charge()?;
    let outer = rho.outer_moment()?;
    let values = rho
        .grid()
        .nodes()
        .iter()
        .zip(q.iter().zip(&outer))
        .map(|(r, (qi, oi))| qi / r + oi)
        .collect();
    Ok(HartreePotential {
        grid: rho.grid().clone(),
        values,
        total_charge: rho.total_norm(),
        small_r_exponent: p,
        head_density: rho.values()[0],
    })
}

impl HartreePotential {
    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at any `r > 0`: interpolated on the grid, continued with the
    /// power-law head below it and `Q/r` above it.
    pub fn at(&self, r: f64) -> f64 {
        let (r0, rn) = (self.grid.r_min(), self.grid.r_max());
        if r < r0 {
            let e = self.small_r_exponent + 2.0;
            let s = (r / r0).powf(e);
            // outer moment of the head shell plus its enclosed charge over r
            let inner = 4.0 * PI * self.head_density * r0 * r0;
            self.values[0] - inner / (self.small_r_exponent + 3.0) * (1.0 - s)
                + inner / e * (1.0 - s)
        } else if r > rn {
            self.total_charge / r
        } else {
            interpolate(&self.values, &self.grid, r).expect("inside grid")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::default_grid;
    use crate::tf_model::{solve_tf, DEFAULT_TOLERANCE};

    #[test]
    fn hydrogen_closed_form() {
        let grid = Arc::new(RadialGrid::log_uniform(1e-7, 60.0, 4001).unwrap());
        let rho = DensityProfile::from_fn(grid.clone(), |r| (-2.0 * r).exp() / PI, 0.0, f64::NEG_INFINITY)
            .unwrap();
        let vh = hartree_potential(&rho).unwrap();
        let exact = |r: f64| 1.0 / r - (-2.0 * r).exp() * (1.0 / r + 1.0);
        for &r in &[1e-9, 1e-4, 0.1, 0.7, 1.0, 3.3, 10.0, 59.0, 200.0] {
            assert!((vh.at(r) - exact(r)).abs() < 1e-8, "r = {r}: {} vs {}", vh.at(r), exact(r));
        }
        for w in vh.values().windows(2) {
            assert!(w[1] <= w[0]);
        }
        assert!((vh.total_charge - 1.0).abs() < 1e-10);
    }

    #[test]
    fn uniform_ball_outside_is_point_charge() {
        let a = 2.0;
        let grid = Arc::new(RadialGrid::log_uniform(1e-6, a, 2001).unwrap());
        let d = 3.0 / (4.0 * PI * a.powi(3));
        let rho = DensityProfile::from_fn(grid, |_| d, 0.0, f64::NEG_INFINITY).unwrap();
        let vh = hartree_potential(&rho).unwrap();
        for &r in &[a, 2.5, 10.0, 1e3] {
            assert!((vh.at(r) - 1.0 / r).abs() < 1e-8, "{r}: {}", vh.at(r) - 1.0 / r);
        }
        // inside: (3a² − r²)/(2a³)
        assert!((vh.at(1.0) - (3.0 * a * a - 1.0) / (2.0 * a.powi(3))).abs() < 1e-8);
        assert!((vh.at(1e-8) - 1.5 / a).abs() < 1e-8);
    }

    #[test]
    fn thomas_fermi_potential_is_self_consistent() {
        let sol = solve_tf(DEFAULT_TOLERANCE).unwrap();
        let z: f64 = 100.0;
        let s = z.powf(1.0 / 3.0);
        let scaled = default_grid();
        let grid = Arc::new(scaled.scaled(1.0 / s));
        let values = scaled
            .nodes()
            .iter()
            .map(|&r| Ok(z * z * sol.rho_tf(r)?))
            .collect::<Result<Vec<_>>>()
            .unwrap();
        let rho = DensityProfile::new(grid, values, -1.5, -6.0).unwrap();
        let vh = hartree_potential(&rho).unwrap();
        for &r in &[1e-6, 1e-4, 1e-2, 0.1, 0.5, 1.0, 2.0] {
            let v = -z / r + vh.at(r);
            let want = sol.potential_unscaled(z, r).unwrap();
            assert!((v - want).abs() <= 1e-5 * want.abs(), "r = {r}: {v} vs {want}");
        }
    }
}
