//! Thomas–Fermi energy functional terms, the semiclassical phase-space
//! eigensum, and a variational minimizer used as an independent oracle.

mod minimize;

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::density::{tails_for, DensityProfile};
use crate::error::{Error, Result};
use crate::numerics::quadrature::check_finite;
use crate::numerics::{integrate_radial_values, RadialGrid};
use crate::tf_model::TfSolution;

pub use minimize::{minimize_tf_functional, MinimizeOutcome};

/// `(3/10)(3π²)^{2/3}`, the coefficient of `∫ρ^{5/3}`.
pub fn kinetic_coefficient() -> f64 {
    0.3 * (3.0 * PI * PI).powf(2.0 / 3.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfEnergyBreakdown {
    pub kinetic: f64,
    pub attraction: f64,
    pub hartree: f64,
    pub total: f64,
    /// `kinetic + attraction + 2 hartree`, the phase-space sum of one-body
    /// energies in the self-consistent potential.
    pub eigensum_semiclassical: f64,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl TfEnergyBreakdown {
    /// `2K + U_en + U_ee`, zero for the exact Thomas–Fermi density.
    pub fn virial_residual(&self) -> f64 {
        2.0 * self.kinetic + self.attraction + self.hartree
    }
}

/// `∫∫ f(R) g(R') / |R − R'| d³R d³R'` for spherical profiles.
///
/// Angular integration reduces the kernel to `1/max(R, R')`, so the double
/// integral is `∫ f Q_g / R + ∫ g Q_f / R` with `Q` the enclosed charge. The
/// two halves are summed in a fixed order so swapping arguments is exact.
pub fn coulomb_double_integral(f: &DensityProfile, g: &DensityProfile) -> Result<f64> {
    f.require_same_grid(g)?;
    for p in [f, g] {
        if p.large_r_exponent >= -5.0 {
            return Err(Error::Divergence(format!(
                "tail exponent {} too slow for the Coulomb double integral",
                p.large_r_exponent
            )));
        }
    }
    Ok(half_coulomb(f, g)? + half_coulomb(g, f)?)
}

/// `∫ 4π R f(R) Q_g(R) dR` with head and tail pieces.
fn half_coulomb(f: &DensityProfile, g: &DensityProfile) -> Result<f64> {
    let grid = f.grid();
    let q_g = g.enclosed_charge()?;
    let body = f
        .values()
        .iter()
        .zip(&q_g)
        .zip(grid.nodes())
        .zip(grid.weights())
        .map(|(((fv, q), r), w)| 4.0 * PI * r * fv * q * w)
        .sum::<f64>();
    let r0 = grid.r_min();
    let e_head = f.small_r_exponent + g.small_r_exponent + 5.0;
    if e_head <= 0.0 {
        return Err(Error::Divergence("Coulomb integral diverges at the origin".into()));
    }
    let head = 4.0 * PI * f.values()[0] * q_g[0] * r0 * r0 / e_head;
    let tail = if f.large_r_exponent.is_finite() {
        let n = grid.len() - 1;
        let rn = grid.r_max();
        4.0 * PI * f.values()[n] * q_g[n] * rn * rn / (-f.large_r_exponent - 2.0)
    } else {
        0.0
    };
    Ok(head + body + tail)
}

/// Normalization error above which [`energy_breakdown`] warns.
pub const DEFAULT_NORM_TOLERANCE: f64 = 1e-4;

/// Kinetic, nuclear-attraction and Hartree terms of the scaled functional.
pub fn energy_breakdown(rho: &DensityProfile) -> Result<TfEnergyBreakdown> {
    energy_breakdown_with(rho, DEFAULT_NORM_TOLERANCE)
}

/// [`energy_breakdown`] with an explicit normalization tolerance.
pub fn energy_breakdown_with(rho: &DensityProfile, norm_tolerance: f64) -> Result<TfEnergyBreakdown> {
    let mut warnings = Vec::new();
    if (rho.total_norm() - 1.0).abs() > norm_tolerance {
        let msg = format!("density normalized to {} rather than 1", rho.total_norm());
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let kinetic = kinetic_coefficient() * rho.integrate_power(5.0 / 3.0)?;
    let attraction = -rho.moment(-1.0)?;
    let hartree = 0.5 * coulomb_double_integral(rho, rho)?;
    Ok(TfEnergyBreakdown {
        kinetic,
        attraction,
        hartree,
        total: kinetic + attraction + hartree,
        eigensum_semiclassical: kinetic + attraction + 2.0 * hartree,
        warnings,
    })
}

/// A scaled one-body potential sampled on a radial grid.
#[derive(Debug, Clone)]
pub struct ScaledPotential {
    pub grid: Arc<RadialGrid>,
    pub values: Vec<f64>,
    pub small_r_exponent: f64,
    pub large_r_exponent: f64,
}

impl ScaledPotential {
    /// `v(R) = −φ(R/b₀)/R`: Coulombic at the origin, `R^{-4}` at infinity.
    pub fn thomas_fermi(sol: &TfSolution, grid: Arc<RadialGrid>) -> Result<Self> {
        let values = grid
            .nodes()
            .iter()
            .map(|&r| sol.v_scaled(r))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid,
            values,
            small_r_exponent: -1.0,
            large_r_exponent: -4.0,
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }
}

/// `2 ∫d³R ∫d³K/(2π)³ (K²/2 + v) Θ(√(−2v) − K)`, which integrates in closed
/// form over the Fermi ball to `−(1/15π²) ∫ (−2v)^{5/2} d³R`.
pub fn semiclassical_eigensum(v: &ScaledPotential) -> Result<f64> {
    check_finite(&v.values, &v.grid)?;
    if let Some(i) = v.values.iter().position(|&x| x > 0.0) {
        return Err(Error::Domain(format!(
            "positive potential {} at R = {}",
            v.values[i],
            v.grid.nodes()[i]
        )));
    }
    let integrand = v.values.iter().map(|x| (-2.0 * x).powf(2.5)).collect::<Vec<_>>();
    let tails = tails_for(v.small_r_exponent, v.large_r_exponent).powered(2.5);
    Ok(-integrate_radial_values(&integrand, &v.grid, tails)? / (15.0 * PI * PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::default_grid;
    use crate::tf_model::{solve_tf, DEFAULT_TOLERANCE};

    fn hydrogen(grid: Arc<RadialGrid>) -> DensityProfile {
        DensityProfile::from_fn(grid, |r| (-2.0 * r).exp() / PI, 0.0, f64::NEG_INFINITY).unwrap()
    }

    /// Nested brute-force quadrature of the spherically reduced kernel.
    fn brute_force_coulomb(f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64, r_max: f64) -> f64 {
        let n = 4000;
        let h = r_max / n as f64;
        // midpoint rule in both variables
        let mut sum = 0.0;
        for i in 0..n {
            let r = (i as f64 + 0.5) * h;
            for j in 0..n {
                let s = (j as f64 + 0.5) * h;
                sum += 16.0 * PI * PI * r * r * s * s * f(r) * g(s) / r.max(s);
            }
        }
        sum * h * h
    }

    #[test]
    fn hydrogen_self_coulomb_is_five_eighths() {
        let grid = Arc::new(RadialGrid::log_uniform(1e-8, 60.0, 4001).unwrap());
        let rho = hydrogen(grid);
        let d = coulomb_double_integral(&rho, &rho).unwrap();
        let f = |r: f64| (-2.0 * r).exp() / PI;
        let oracle = brute_force_coulomb(f, f, 30.0);
        assert!((oracle - 0.625).abs() < 1e-5, "oracle {oracle}");
        assert!((d - 0.625).abs() < 1e-10, "{d}");
    }

    #[test]
    fn uniform_ball_self_coulomb() {
        let a = 1.7;
        let grid = Arc::new(RadialGrid::log_uniform(1e-7, a, 4001).unwrap());
        let density = 3.0 / (4.0 * PI * a.powi(3));
        let ball = DensityProfile::from_fn(grid, |_| density, 0.0, f64::NEG_INFINITY).unwrap();
        let d = coulomb_double_integral(&ball, &ball).unwrap();
        let oracle = brute_force_coulomb(|r| if r < a { density } else { 0.0 }, |r| if r < a { density } else { 0.0 }, a);
        assert!((oracle - 1.2 / a).abs() < 1e-5 * 1.2 / a);
        assert!((d - 1.2 / a).abs() < 1e-9, "{d}");
    }

    #[test]
    fn coulomb_is_exactly_symmetric() {
        let grid = Arc::new(RadialGrid::log_uniform(1e-6, 80.0, 2001).unwrap());
        let f = hydrogen(grid.clone());
        let g = DensityProfile::from_fn(grid, |r| r * (-r).exp() / (24.0 * PI), 1.0, f64::NEG_INFINITY).unwrap();
        let a = coulomb_double_integral(&f, &g).unwrap();
        let b = coulomb_double_integral(&g, &f).unwrap();
        assert!((a - b).abs() <= 1e-13 * a.abs());
    }

    #[test]
    fn slow_tails_are_divergent() {
        let grid = Arc::new(RadialGrid::log_uniform(1e-3, 10.0, 101).unwrap());
        let f = DensityProfile::from_fn(grid, |r| (1.0 + r).powi(-4), 0.0, -4.0).unwrap();
        assert!(matches!(coulomb_double_integral(&f, &f), Err(Error::Divergence(_))));
    }

    #[test]
    fn tf_energy_terms_and_identities() {
        let sol = solve_tf(DEFAULT_TOLERANCE).unwrap();
        let grid = default_grid();
        let rho = DensityProfile::thomas_fermi(&sol, grid.clone()).unwrap();
        let e = energy_breakdown(&rho).unwrap();
        assert!(e.kinetic > 0.0 && e.attraction < 0.0 && e.hartree > 0.0);
        assert_eq!(e.total, e.kinetic + e.attraction + e.hartree);
        assert!((e.total + 0.768745).abs() < 5e-4, "{e:?}");
        assert!((e.kinetic - 0.768745).abs() < 1e-3);
        assert!((e.attraction + 1.79374).abs() < 2e-3);
        assert!((e.hartree - 0.256248).abs() < 1e-3);
        let identity = sol.energy_coefficient();
        assert!((e.total - identity).abs() <= 1e-5 * identity.abs(), "{} vs {identity}", e.total);
        assert!(e.virial_residual().abs() <= 1e-4 * e.total.abs());
        assert!(e.warnings.is_empty());

        let v = ScaledPotential::thomas_fermi(&sol, grid).unwrap();
        let sc = semiclassical_eigensum(&v).unwrap();
        assert!((sc - e.eigensum_semiclassical).abs() <= 1e-5 * sc.abs(), "{sc} vs {}", e.eigensum_semiclassical);
        assert!((sc + 0.512496).abs() < 1e-3);
    }

    #[test]
    fn semiclassical_eigensum_trivial_cases() {
        let grid = Arc::new(RadialGrid::log_uniform(1e-3, 10.0, 401).unwrap());
        let zero = ScaledPotential {
            grid: grid.clone(),
            values: vec![0.0; grid.len()],
            small_r_exponent: -1.0,
            large_r_exponent: f64::NEG_INFINITY,
        };
        assert_eq!(semiclassical_eigensum(&zero).unwrap(), 0.0);
        let v = ScaledPotential {
            grid: grid.clone(),
            values: grid.nodes().iter().map(|r| -(-r).exp() / r).collect(),
            small_r_exponent: -1.0,
            large_r_exponent: f64::NEG_INFINITY,
        };
        let lam: f64 = 1.7;
        let base = semiclassical_eigensum(&v).unwrap();
        let scaled = semiclassical_eigensum(&v.scaled(lam * lam)).unwrap();
        assert!((scaled - lam.powi(5) * base).abs() <= 1e-12 * scaled.abs());
        let mut bad = v.clone();
        bad.values[10] = 0.1;
        assert!(matches!(semiclassical_eigensum(&bad), Err(Error::Domain(_))));
    }

    #[test]
    fn unnormalized_input_warns_but_succeeds() {
        let sol = solve_tf(DEFAULT_TOLERANCE).unwrap();
        let rho = DensityProfile::thomas_fermi(&sol, default_grid()).unwrap().scaled(0.9).unwrap();
        let e = energy_breakdown(&rho).unwrap();
        assert_eq!(e.warnings.len(), 1);
    }
}
