//! Direct minimization of the scaled Thomas–Fermi functional over
//! normalized non-negative densities.
//!
//! The iterate is held as `u = ρ^{2/3}`, in which the kinetic gradient is
//! linear. A step moves `u` against the functional derivative divided by its
//! kinetic curvature, clips at zero, and fixes the chemical potential `μ` so
//! the result carries unit charge. With step 1 this is exactly the
//! self-consistent Thomas–Fermi map; smaller steps damp the Hartree feedback.

use std::sync::Arc;

use crate::density::DensityProfile;
use crate::error::{Error, Result};
use crate::numerics::{find_root_bracketed, RadialGrid};

use super::kinetic_coefficient;

/// Converged or best-effort result of [`minimize_tf_functional`].
#[derive(Debug, Clone)]
pub struct MinimizeOutcome {
    pub density: DensityProfile,
    /// Lagrange multiplier of the normalization constraint.
    pub chemical_potential: f64,
    pub energy: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Sup-norm of the Euler–Lagrange residual on the interior of the support.
    pub gradient_norm: f64,
    /// L¹ change of the final accepted step.
    pub last_change: f64,
    pub diagnostic: Option<String>,
}

const CHANGE_TOLERANCE: f64 = 1e-10;
const MIN_STEP: f64 = 1e-6;

struct State {
    u: Vec<f64>,
    rho: DensityProfile,
    energy: f64,
    /// Functional derivative `δE/δρ` at each node.
    gradient: Vec<f64>,
}

fn evaluate(grid: &Arc<RadialGrid>, u: Vec<f64>, p: f64, q: f64) -> Result<State> {
    let c = kinetic_coefficient();
    let rho = DensityProfile::new(grid.clone(), u.iter().map(|x| x.powf(1.5)).collect(), p, q)?;
    let q_enc = rho.enclosed_charge()?;
    let outer = rho.outer_moment()?;
    let v_h = grid
        .nodes()
        .iter()
        .zip(q_enc.iter().zip(&outer))
        .map(|(r, (qe, o))| qe / r + o)
        .collect::<Vec<_>>();
    let kinetic = c * rho.integrate_power(5.0 / 3.0)?;
    let attraction = -rho.moment(-1.0)?;
    // ½∫ρ v_H, which equals ½D(ρ, ρ) up to quadrature
    let hartree = 0.5 * super::coulomb_double_integral(&rho, &rho)?;
    let gradient = u
        .iter()
        .zip(grid.nodes())
        .zip(&v_h)
        .map(|((ui, r), vh)| 5.0 / 3.0 * c * ui - 1.0 / r + vh)
        .collect();
    Ok(State {
        u,
        rho,
        energy: kinetic + attraction + hartree,
        gradient,
    })
}

/// Projected step: returns the clipped `u` and the multiplier `μ` that
/// restores unit charge.
fn projected_step(
    state: &State,
    grid: &Arc<RadialGrid>,
    step: f64,
    p: f64,
    q: f64,
) -> Result<(Vec<f64>, f64)> {
    let k = 5.0 / 3.0 * kinetic_coefficient();
    let trial = |mu: f64| -> Vec<f64> {
        state
            .u
            .iter()
            .zip(&state.gradient)
            .map(|(u, g)| (u - step * (g - mu) / k).max(0.0))
            .collect()
    };
    let charge = |mu: f64| -> Result<f64> {
        let values = trial(mu).iter().map(|x| x.powf(1.5)).collect::<Vec<_>>();
        Ok(DensityProfile::new(grid.clone(), values, p, q)?.total_norm() - 1.0)
    };
    // every node vanishes below this multiplier
    let mut lo = state
        .u
        .iter()
        .zip(&state.gradient)
        .map(|(u, g)| g - k * u / step)
        .fold(f64::INFINITY, f64::min);
    lo -= lo.abs() * 1e-12 + 1e-300;
    let mut hi = 1e-6;
    let mut tries = 0;
    while charge(hi)? < 0.0 {
        hi *= 4.0;
        tries += 1;
        if tries > 60 {
            return Err(Error::Divergence("no multiplier restores unit charge".into()));
        }
    }
    if charge(lo)? >= 0.0 {
        lo = hi.min(0.0) - 1.0;
    }
    let mu = find_root_bracketed(|m| charge(m).expect("finite trial"), lo, hi, 1e-15)?;
    Ok((trial(mu), mu))
}

fn el_residual(state: &State, mu: f64) -> f64 {
    let n = state.u.len();
    (1..n - 1)
        .filter(|&i| state.u[i - 1] > 0.0 && state.u[i] > 0.0 && state.u[i + 1] > 0.0)
        .map(|i| (state.gradient[i] - mu).abs())
        .fold(0.0, f64::max)
}

/// Projected-gradient descent on `K + U_en + U_ee` from `init`.
///
/// `step` is the initial damping (1 is the undamped self-consistent map); it
/// is halved whenever the functional would increase. Non-convergence is not
/// an error: the best iterate is returned with `converged == false` and a
/// diagnostic.
pub fn minimize_tf_functional(
    grid: &Arc<RadialGrid>,
    init: &DensityProfile,
    step: f64,
    max_iter: usize,
) -> Result<MinimizeOutcome> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::Argument(format!("step {step} outside (0, 1]")));
    }
    if init.grid().as_ref() != grid.as_ref() {
        return Err(Error::Argument("initial density is not on the requested grid".into()));
    }
    if (init.total_norm() - 1.0).abs() > 1e-6 || init.values()[0] <= 0.0 {
        return Err(Error::Domain("initial density must be positive and normalized".into()));
    }
    // the optimum behaves like R^{-3/2} at the origin and R^{-6} far out
    let (p, q) = (-1.5, -6.0);
    let u0 = init.values().iter().map(|v| v.powf(2.0 / 3.0)).collect();
    let mut state = evaluate(grid, u0, p, q)?;
    let mut tau = step;
    let mut mu = 0.0;
    let mut change = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let (next, next_mu) = loop {
            let (u, m) = projected_step(&state, grid, tau, p, q)?;
            let cand = evaluate(grid, u, p, q)?;
            if cand.energy <= state.energy + 1e-14 * state.energy.abs() || tau <= MIN_STEP {
                break (cand, m);
            }
            tau *= 0.5;
        };
        change = next.rho.l1_distance(&state.rho)?;
        state = next;
        mu = next_mu;
        tau = (tau * 1.5).min(step);
        if change < CHANGE_TOLERANCE {
            converged = true;
            break;
        }
    }
    let gradient_norm = el_residual(&state, mu);
    let diagnostic = (!converged).then(|| {
        let msg = format!(
            "minimizer stopped after {iterations} iterations: last L1 change {change:.3e}, \
             gradient norm {gradient_norm:.3e}"
        );
        log::warn!("{msg}");
        msg
    });
    Ok(MinimizeOutcome {
        density: state.rho,
        chemical_potential: mu,
        energy: state.energy,
        iterations,
        converged,
        gradient_norm,
        last_change: change,
        diagnostic,
    })
}
