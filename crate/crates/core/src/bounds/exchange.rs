//! Exchange energy of a spherically averaged determinant, used to check the
//! sign of the neglected term in the upper bound.

use crate::error::{Error, Result};
use crate::numerics::quadrature::{cumulative, cumulative_from_right};
use crate::spectrum::SpectrumSummary;

/// `(ℓa k ℓb; 0 0 0)²`, the squared 3j symbol with zero projections.
pub fn gaunt_squared(la: usize, k: usize, lb: usize) -> f64 {
    let j = la + k + lb;
    if j % 2 == 1 || k > la + lb || la > k + lb || lb > la + k {
        return 0.0;
    }
    let g = j / 2;
    let ln_fact = |n: usize| (1..=n).map(|i| (i as f64).ln()).sum::<f64>();
    let ln = ln_fact(2 * g - 2 * la) + ln_fact(2 * g - 2 * k) + ln_fact(2 * g - 2 * lb)
        - ln_fact(2 * g + 1)
        + 2.0 * (ln_fact(g) - ln_fact(g - la) - ln_fact(g - k) - ln_fact(g - lb));
    ln.exp()
}

/// `−¼ Σ_{a,b} N_a N_b Σ_k (ℓa k ℓb; 000)² R^k_{ab}` over occupied levels,
/// with `R^k` the Slater radial integral of the pair densities `u_a u_b`.
///
/// The multipole sum is exact for the occupied `ℓ` (it terminates at
/// `k = ℓa + ℓb`); fractional shells use uniform averaging over `m` and spin.
pub fn exchange_energy(summary: &SpectrumSummary, occupations: &[f64]) -> Result<f64> {
    let orbitals = summary
        .orbitals
        .as_ref()
        .ok_or_else(|| Error::Argument("spectrum carries no orbitals".into()))?;
    let grid = &orbitals.grid;
    let nodes = grid.nodes();
    let occupied = occupations
        .iter()
        .enumerate()
        .filter(|(_, &o)| o > 0.0)
        .map(|(i, &o)| (i, o))
        .collect::<Vec<_>>();
    let mut total = 0.0;
    for &(a, na) in &occupied {
        for &(b, nb) in &occupied {
            let (la, lb) = (summary.levels[a].ell, summary.levels[b].ell);
            // u_a u_b = r y_a y_b
            let pair = orbitals.values[a]
                .iter()
                .zip(&orbitals.values[b])
                .zip(nodes)
                .map(|((ya, yb), r)| r * ya * yb)
                .collect::<Vec<_>>();
            for k in (la.abs_diff(lb)..=la + lb).step_by(2) {
                let w = gaunt_squared(la, k, lb);
                if w == 0.0 {
                    continue;
                }
                total += 0.25 * na * nb * w * slater_integral(&pair, grid, k);
            }
        }
    }
    Ok(-total)
}

/// `∫∫ P(r) P(r') r_<^k / r_>^{k+1} dr dr'`.
fn slater_integral(pair: &[f64], grid: &crate::numerics::RadialGrid, k: usize) -> f64 {
    let nodes = grid.nodes();
    let kf = k as i32;
    let inner_g = pair.iter().zip(nodes).map(|(p, r)| p * r.powi(kf)).collect::<Vec<_>>();
    let outer_g = pair
        .iter()
        .zip(nodes)
        .map(|(p, r)| p * r.powi(-kf - 1))
        .collect::<Vec<_>>();
    let inner = cumulative(&inner_g, grid);
    let outer = cumulative_from_right(&outer_g, grid);
    let y = nodes
        .iter()
        .zip(inner.iter().zip(&outer))
        .map(|(r, (i, o))| i / r.powi(kf + 1) + o * r.powi(kf))
        .collect::<Vec<_>>();
    pair.iter()
        .zip(&y)
        .zip(grid.weights())
        .map(|((p, yv), w)| p * yv * w)
        .sum()
}
