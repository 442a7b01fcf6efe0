use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpacingKind {
    UniformInLog,
    Uniform,
}

/// Radial grid with composite Boole quadrature weights.
///
/// Nodes are uniform in `t`, where `t = ln r` for log grids and `t = r` for
/// uniform ones. `weights[i]` integrates `g(r) dr`, so the Jacobian `dr/dt`
/// is already folded in. The node count must be `4k + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    spacing_kind: SpacingKind,
    step: f64,
}

const BOOLE: [f64; 4] = [14.0, 32.0, 12.0, 32.0];

/// Smallest valid node count (`4k + 1`) that is at least `n`.
pub fn valid_node_count(n: usize) -> usize {
    let n = n.max(5);
    (n - 1).div_ceil(4) * 4 + 1
}

impl RadialGrid {
    pub fn log_uniform(r_min: f64, r_max: f64, n: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
            return Err(Error::Grid(format!(
                "log grid needs 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        Self::check_count(n)?;
        let (t0, t1) = (r_min.ln(), r_max.ln());
        let step = (t1 - t0) / (n - 1) as f64;
        let nodes = (0..n)
            .map(|i| {
                if i == n - 1 {
                    r_max
                } else {
                    (t0 + step * i as f64).exp()
                }
            })
            .collect::<Vec<_>>();
        let weights = boole_weights(n, step)
            .into_iter()
            .zip(&nodes)
            .map(|(w, r)| w * r)
            .collect();
        Ok(Self {
            nodes,
            weights,
            spacing_kind: SpacingKind::UniformInLog,
            step,
        })
    }

    /// Log grid whose step in `ln r` is at most `max_step`.
    pub fn log_with_step(r_min: f64, r_max: f64, max_step: f64) -> Result<Self> {
        if !(max_step > 0.0) {
            return Err(Error::Grid(format!("step must be positive, got {max_step}")));
        }
        let span = (r_max / r_min).ln();
        let n = valid_node_count((span / max_step).ceil() as usize + 1);
        Self::log_uniform(r_min, r_max, n)
    }

    pub fn uniform(r_min: f64, r_max: f64, n: usize) -> Result<Self> {
        if !(r_min >= 0.0 && r_max > r_min && r_max.is_finite()) {
            return Err(Error::Grid(format!(
                "uniform grid needs 0 <= r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        Self::check_count(n)?;
        let step = (r_max - r_min) / (n - 1) as f64;
        let nodes = (0..n)
            .map(|i| if i == n - 1 { r_max } else { r_min + step * i as f64 })
            .collect();
        Ok(Self {
            nodes,
            weights: boole_weights(n, step),
            spacing_kind: SpacingKind::Uniform,
            step,
        })
    }

    fn check_count(n: usize) -> Result<()> {
        if n < 5 || !(n - 1).is_multiple_of(4) {
            return Err(Error::Grid(format!(
                "node count must be 4k+1 and >= 5, got {n}"
            )));
        }
        Ok(())
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn spacing_kind(&self) -> SpacingKind {
        self.spacing_kind
    }

    /// Step in the uniform coordinate `t`.
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn r_min(&self) -> f64 {
        self.nodes[0]
    }

    pub fn r_max(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// `dr/dt` at node `i`.
    pub fn jacobian(&self, i: usize) -> f64 {
        match self.spacing_kind {
            SpacingKind::UniformInLog => self.nodes[i],
            SpacingKind::Uniform => 1.0,
        }
    }

    /// Uniform coordinate of `r`.
    pub fn coordinate(&self, r: f64) -> f64 {
        match self.spacing_kind {
            SpacingKind::UniformInLog => r.ln(),
            SpacingKind::Uniform => r,
        }
    }

    pub fn coordinate_origin(&self) -> f64 {
        self.coordinate(self.nodes[0])
    }

    /// Same grid with every node multiplied by `factor` (log grids only keep
    /// their step; uniform grids scale it).
    pub fn scaled(&self, factor: f64) -> Self {
        let nodes = self.nodes.iter().map(|r| r * factor).collect();
        let (weights, step) = match self.spacing_kind {
            SpacingKind::UniformInLog => (
                self.weights.iter().map(|w| w * factor).collect(),
                self.step,
            ),
            SpacingKind::Uniform => (
                self.weights.iter().map(|w| w * factor).collect(),
                self.step * factor,
            ),
        };
        Self {
            nodes,
            weights,
            spacing_kind: self.spacing_kind,
            step,
        }
    }

    /// Stable textual signature used for cache keys.
    pub fn signature(&self) -> String {
        let kind = match self.spacing_kind {
            SpacingKind::UniformInLog => "log",
            SpacingKind::Uniform => "uniform",
        };
        format!(
            "{kind}:{:.16e}:{:.16e}:{}",
            self.r_min(),
            self.r_max(),
            self.len()
        )
    }

    /// Volume of the spherical shell spanned by the grid.
    pub fn shell_volume(&self) -> f64 {
        4.0 * PI / 3.0 * (self.r_max().powi(3) - self.r_min().powi(3))
    }
}

fn boole_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![0.0; n];
    for (i, wi) in w.iter_mut().enumerate() {
        *wi = if i == 0 || i == n - 1 {
            7.0
        } else {
            BOOLE[i % 4]
        };
    }
    w.iter().map(|c| c * 2.0 * h / 45.0).collect()
}
