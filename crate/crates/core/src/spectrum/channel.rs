//! One angular-momentum channel of the radial Schrödinger equation.
//!
//! With `x = ln r` and `u(r) = r^{1/2} y(x)` the radial equation becomes
//! `y'' = Q(x) y`, `Q = 2r²(V − E) + (ℓ + ½)²`, which Numerov's method
//! integrates on a uniform grid in `x`. The number of sign changes of the
//! regular solution equals the number of levels below `E`, so levels are
//! located by bisecting on that count.

use crate::error::{Error, Result};
use crate::numerics::RadialGrid;

use super::EigenLevel;

const RESCALE: f64 = 1e200;
/// Decay exponent `∫κ` beyond the turning point at which an orbital is cut.
const TAIL_DECAY: f64 = 45.0;
/// Smallest decay exponent the grid must accommodate.
const MIN_TAIL_DECAY: f64 = 18.0;

pub(crate) struct Channel<'a> {
    grid: &'a RadialGrid,
    ell: usize,
    /// `2r²V + (ℓ + ½)²` per node.
    base: Vec<f64>,
    two_r2: Vec<f64>,
    /// `min_{j ≥ i} (V_j + (ℓ + ½)²/2r_j²)`: above this `E` the solution
    /// is classically forbidden from node `i` outwards.
    forbidden_above: Vec<f64>,
    start: (f64, f64),
}

pub(crate) struct ChannelSolution {
    pub levels: Vec<EigenLevel>,
    pub orbitals: Vec<Vec<f64>>,
}

impl<'a> Channel<'a> {
    pub fn new(grid: &'a RadialGrid, potential: &[f64], coulomb_charge: f64, ell: usize) -> Self {
        let lh = ell as f64 + 0.5;
        let nodes = grid.nodes();
        let two_r2 = nodes.iter().map(|r| 2.0 * r * r).collect::<Vec<_>>();
        let base = potential
            .iter()
            .zip(&two_r2)
            .map(|(v, t)| t * v + lh * lh)
            .collect();
        let mut forbidden_above = potential
            .iter()
            .zip(&two_r2)
            .map(|(v, t)| v + lh * lh / t)
            .collect::<Vec<_>>();
        for i in (0..forbidden_above.len() - 1).rev() {
            forbidden_above[i] = forbidden_above[i].min(forbidden_above[i + 1]);
        }
        // y ~ r^{ℓ+1/2} (1 − Z r/(ℓ+1)) near the origin
        let cusp = |r: f64| 1.0 - coulomb_charge * r / (ell as f64 + 1.0);
        let start = ((-lh * grid.step()).exp() * cusp(nodes[0]), cusp(nodes[1]));
        Self {
            grid,
            ell,
            base,
            two_r2,
            forbidden_above,
            start,
        }
    }

    /// Lowest value of the effective potential on the grid.
    pub fn effective_minimum(&self) -> f64 {
        self.forbidden_above[0]
    }

    fn numerov_factor(&self, i: usize, e: f64) -> f64 {
        let h = self.grid.step();
        1.0 - h * h / 12.0 * (self.base[i] - self.two_r2[i] * e)
    }

    /// Number of levels strictly below `e`.
    pub fn count_below(&self, e: f64) -> usize {
        let n = self.base.len();
        let (mut ym, mut y) = self.start;
        let mut fm = self.numerov_factor(0, e);
        let mut f0 = self.numerov_factor(1, e);
        let mut nodes = usize::from((ym < 0.0) != (y < 0.0));
        for i in 1..n - 1 {
            let f1 = self.numerov_factor(i + 1, e);
            let mut y1 = ((12.0 - 10.0 * f0) * y - fm * ym) / f1;
            if (y1 < 0.0) != (y < 0.0) {
                nodes += 1;
            }
            if y1.abs() > RESCALE {
                y1 /= RESCALE;
                y /= RESCALE;
            }
            if self.forbidden_above[i + 1] > e {
                // once growing in a region that stays forbidden, no more nodes
                let growing = y1.abs() > y.abs() && (y1 < 0.0) == (y < 0.0);
                if growing || f1 < 0.05 {
                    break;
                }
            }
            (ym, y, fm, f0) = (y, y1, f0, f1);
        }
        nodes
    }

    /// All levels below `ceiling`, bracketed by count bisection from `floor`.
    pub fn solve(&self, floor: f64, ceiling: f64, rel_tol: f64) -> Result<ChannelSolution> {
        let n_levels = self.count_below(ceiling);
        if n_levels > 0 && self.count_below(floor) > 0 {
            return Err(Error::Domain(format!(
                "energy floor {floor} lies above the lowest level"
            )));
        }
        let mut probes = vec![(floor, 0usize), (ceiling, n_levels)];
        let mut levels = Vec::with_capacity(n_levels);
        let mut orbitals = Vec::with_capacity(n_levels);
        for k in 0..n_levels {
            let mut lo = probes
                .iter()
                .filter(|p| p.1 <= k)
                .map(|p| p.0)
                .fold(f64::NEG_INFINITY, f64::max);
            let mut hi = probes
                .iter()
                .filter(|p| p.1 > k)
                .map(|p| p.0)
                .fold(f64::INFINITY, f64::min);
            for _ in 0..300 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi || hi - lo <= rel_tol * mid.abs() {
                    break;
                }
                let c = self.count_below(mid);
                probes.push((mid, c));
                if c > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let energy = 0.5 * (lo + hi);
            orbitals.push(self.orbital(energy, k)?);
            levels.push(EigenLevel::new(self.ell, k, energy));
        }
        Ok(ChannelSolution { levels, orbitals })
    }

    /// Normalized `y` (so `∫ r² y² d(ln r) = 1`) at an eigenvalue, built by
    /// matching outward and inward solutions at the outer turning point.
    fn orbital(&self, e: f64, expected_nodes: usize) -> Result<Vec<f64>> {
        let n = self.base.len();
        let h = self.grid.step();
        let q = (0..n)
            .map(|i| self.base[i] - self.two_r2[i] * e)
            .collect::<Vec<_>>();
        let f = (0..n).map(|i| self.numerov_factor(i, e)).collect::<Vec<_>>();
        let m = (0..n)
            .rev()
            .find(|&i| q[i] < 0.0)
            .ok_or_else(|| Error::GridExtension {
                ell: self.ell,
                reason: format!("no classically allowed region at E = {e}"),
            })?
            .clamp(2, n - 3);

        let mut y = vec![0.0; n];
        (y[0], y[1]) = self.start;
        for i in 1..m {
            y[i + 1] = ((12.0 - 10.0 * f[i]) * y[i] - f[i - 1] * y[i - 1]) / f[i + 1];
            if y[i + 1].abs() > RESCALE {
                y[..=i + 1].iter_mut().for_each(|v| *v /= RESCALE);
            }
        }

        let mut end = m;
        let mut decay = 0.0;
        while end < n - 1 && decay < TAIL_DECAY {
            end += 1;
            decay += q[end].max(0.0).sqrt() * h;
        }
        if decay < MIN_TAIL_DECAY {
            return Err(Error::GridExtension {
                ell: self.ell,
                reason: format!(
                    "orbital at E = {e} has decayed only by e^-{decay:.1} at r = {}",
                    self.grid.r_max()
                ),
            });
        }
        let mut inward = vec![0.0; n];
        inward[end] = 1.0;
        inward[end - 1] = (q[end].max(0.0).sqrt() * h).exp();
        for i in (m + 1..end).rev() {
            inward[i - 1] = ((12.0 - 10.0 * f[i]) * inward[i] - f[i + 1] * inward[i + 1]) / f[i - 1];
            if inward[i - 1].abs() > RESCALE {
                inward[i - 1..=end].iter_mut().for_each(|v| *v /= RESCALE);
            }
        }
        let scale = y[m] / inward[m];
        for i in m + 1..=end {
            y[i] = inward[i] * scale;
        }

        let peak = y.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        y.iter_mut().for_each(|v| *v /= peak);
        let norm = y
            .iter()
            .zip(self.grid.nodes())
            .zip(self.grid.weights())
            .map(|((v, r), w)| w * r * v * v)
            .sum::<f64>();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Evaluation {
                node: m,
                r: self.grid.nodes()[m],
                value: norm,
            });
        }
        let inv = norm.sqrt().recip();
        y.iter_mut().for_each(|v| *v *= inv);

        let nodes = sign_changes(&y[..=end]);
        if nodes != expected_nodes {
            return Err(Error::Domain(format!(
                "level {expected_nodes} at E = {e} has {nodes} radial nodes"
            )));
        }
        Ok(y)
    }
}

fn sign_changes(y: &[f64]) -> usize {
    let mut last = 0.0;
    let mut count = 0;
    for &v in y.iter().filter(|v| **v != 0.0) {
        if last != 0.0 && (v < 0.0) != (last < 0.0) {
            count += 1;
        }
        last = v;
    }
    count
}
