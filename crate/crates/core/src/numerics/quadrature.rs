use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::grid::RadialGrid;

/// Power-law continuation of a radial function beyond the grid ends.
///
/// `head = Some(p)` means `f(r) ~ f(r_min) (r / r_min)^p` on `(0, r_min)`;
/// `tail = Some(q)` means `f(r) ~ f(r_max) (r / r_max)^q` on `(r_max, inf)`.
/// `None` drops that piece (the function vanishes there or is negligible).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Tails {
    pub head: Option<f64>,
    pub tail: Option<f64>,
}

impl Tails {
    pub const NONE: Tails = Tails {
        head: None,
        tail: None,
    };

    pub fn new(head: Option<f64>, tail: Option<f64>) -> Self {
        Self { head, tail }
    }

    /// Tails of `f^power` given tails of `f`.
    pub fn powered(self, power: f64) -> Self {
        Self {
            head: self.head.map(|p| p * power),
            tail: self.tail.map(|q| q * power),
        }
    }

    /// Tails of `f(r) * r^k`.
    pub fn shifted(self, k: f64) -> Self {
        Self {
            head: self.head.map(|p| p + k),
            tail: self.tail.map(|q| q + k),
        }
    }
}

/// `∫_0^{r0} r^m (r/r0)^p dr` scaled by the node value, i.e. the head piece of
/// `∫ r^m f dr`.
fn head_piece(f0: f64, r0: f64, m: f64, p: f64) -> Result<f64> {
    let e = p + m + 1.0;
    if e <= 0.0 {
        return Err(Error::Divergence(format!(
            "head exponent {p} not integrable against r^{m} at the origin"
        )));
    }
    Ok(f0 * r0.powf(m + 1.0) / e)
}

fn tail_piece(f_n: f64, r_n: f64, m: f64, q: f64) -> Result<f64> {
    let e = -(q + m + 1.0);
    if e <= 0.0 {
        return Err(Error::Divergence(format!(
            "tail exponent {q} not integrable against r^{m} at infinity"
        )));
    }
    Ok(f_n * r_n.powf(m + 1.0) / e)
}

pub(crate) fn check_finite(values: &[f64], grid: &RadialGrid) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(node) => Err(Error::Evaluation {
            node,
            r: grid.nodes()[node],
            value: values[node],
        }),
        None => Ok(()),
    }
}

/// `∫ r^m f(r) dr` over `(0, inf)` given node values and power-law tails.
pub fn integrate_moment(values: &[f64], grid: &RadialGrid, m: f64, tails: Tails) -> Result<f64> {
    if values.len() != grid.len() {
        return Err(Error::Argument(format!(
            "{} values for a grid of {} nodes",
            values.len(),
            grid.len()
        )));
    }
    check_finite(values, grid)?;
    let mut sum = values
        .iter()
        .zip(grid.nodes())
        .zip(grid.weights())
        .map(|((f, r), w)| f * r.powf(m) * w)
        .sum::<f64>();
    if let Some(p) = tails.head {
        sum += head_piece(values[0], grid.r_min(), m, p)?;
    }
    if let Some(q) = tails.tail {
        sum += tail_piece(values[values.len() - 1], grid.r_max(), m, q)?;
    }
    Ok(sum)
}

/// `∫ 4π r² f(r) dr` of node values, closed with analytic tails.
pub fn integrate_radial_values(values: &[f64], grid: &RadialGrid, tails: Tails) -> Result<f64> {
    Ok(4.0 * PI * integrate_moment(values, grid, 2.0, tails)?)
}

/// `∫ 4π r² f(r) dr` of a function sampled on the grid.
pub fn integrate_radial(f: impl Fn(f64) -> f64, grid: &RadialGrid, tails: Tails) -> Result<f64> {
    let values = grid.nodes().iter().map(|&r| f(r)).collect::<Vec<_>>();
    integrate_radial_values(&values, grid, tails)
}

/// Running integral `C[i] = ∫_{r_min}^{r_i} g(r) dr` by piecewise cubic
/// interpolation in the grid coordinate (fourth order).
pub fn cumulative(g: &[f64], grid: &RadialGrid) -> Vec<f64> {
    let n = g.len();
    let h = grid.step();
    let f = g
        .iter()
        .enumerate()
        .map(|(i, gi)| gi * grid.jacobian(i))
        .collect::<Vec<_>>();
    let mut out = vec![0.0; n];
    for i in 0..n - 1 {
        let piece = if i == 0 {
            9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]
        } else if i == n - 2 {
            f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1]
        } else {
            -f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]
        };
        out[i + 1] = out[i] + piece * h / 24.0;
    }
    out
}

/// Running integral from the right: `C[i] = ∫_{r_i}^{r_max} g(r) dr`.
pub fn cumulative_from_right(g: &[f64], grid: &RadialGrid) -> Vec<f64> {
    let fwd = cumulative(g, grid);
    let total = fwd[fwd.len() - 1];
    fwd.iter().map(|c| total - c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn shell_volume_unit_function() {
        let g = RadialGrid::log_uniform(1.0, 2.0, 401).unwrap();
        let v = integrate_radial(|_| 1.0, &g, Tails::NONE).unwrap();
        assert_relative_eq!(v, 4.0 * PI / 3.0 * 7.0, max_relative = 1e-12);
        assert_relative_eq!(v, 29.321531433504735, max_relative = 1e-12);

        let g = RadialGrid::log_uniform(1e-6, 50.0, 4001).unwrap();
        let v = integrate_radial(|_| 1.0, &g, Tails::NONE).unwrap();
        assert_relative_eq!(v, g.shell_volume(), max_relative = 1e-10);
    }

    #[test]
    fn hydrogen_density_normalized() {
        let g = RadialGrid::log_uniform(1e-8, 60.0, 4001).unwrap();
        let f = |r: f64| (-2.0 * r).exp() / PI;
        let n = integrate_radial(f, &g, Tails::new(Some(0.0), None)).unwrap();
        assert_relative_eq!(n, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn power_law_tails_close_the_integral() {
        // f = 1/(1+r)^6 has ∫4πr² f = 4π · 2/(3·4·5) = 4π/30
        let g = RadialGrid::log_uniform(1e-3, 200.0, 2001).unwrap();
        let f = |r: f64| (1.0 + r).powi(-6);
        let v = integrate_radial(f, &g, Tails::new(Some(0.0), Some(-6.0))).unwrap();
        assert_relative_eq!(v, 4.0 * PI / 30.0, max_relative = 1e-6);
    }

    #[test]
    fn non_finite_value_names_node() {
        let g = RadialGrid::log_uniform(1.0, 2.0, 9).unwrap();
        let err = integrate_radial(|r| if r > 1.5 { f64::NAN } else { 1.0 }, &g, Tails::NONE)
            .unwrap_err();
        match err {
            Error::Evaluation { node, .. } => assert_eq!(node, 5),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn divergent_tail_rejected() {
        let g = RadialGrid::log_uniform(1.0, 2.0, 9).unwrap();
        assert!(integrate_radial(|_| 1.0, &g, Tails::new(None, Some(-2.0))).is_err());
    }

    #[test]
    fn refinement_gains_at_least_order_minus_one() {
        let f = |r: f64| (r * 3.0).sin() * (-r).exp();
        let exact = {
            let g = RadialGrid::uniform(0.0, 4.0, 4001).unwrap();
            integrate_moment(&g.nodes().iter().map(|&r| f(r)).collect::<Vec<_>>(), &g, 0.0, Tails::NONE)
                .unwrap()
        };
        let err = |n| {
            let g = RadialGrid::uniform(0.0, 4.0, n).unwrap();
            let v: Vec<f64> = g.nodes().iter().map(|&r| f(r)).collect();
            (integrate_moment(&v, &g, 0.0, Tails::NONE).unwrap() - exact).abs()
        };
        let (coarse, fine) = (err(17), err(33));
        // Boole is sixth order; demand at least 2^5
        assert!(coarse / fine > 32.0, "ratio {}", coarse / fine);
    }

    #[test]
    fn cumulative_matches_antiderivative() {
        let g = RadialGrid::log_uniform(1e-3, 10.0, 4001).unwrap();
        let vals: Vec<f64> = g.nodes().iter().map(|r| r.cos()).collect();
        let c = cumulative(&vals, &g);
        for (i, r) in g.nodes().iter().enumerate() {
            assert!((c[i] - (r.sin() - 1e-3_f64.sin())).abs() < 1e-8, "{}", c[i] - r.sin());
        }
        let right = cumulative_from_right(&vals, &g);
        assert!((right[0] - c[c.len() - 1]).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn polynomials_up_to_degree_five_exact(
            a in -2.0f64..2.0, b in 0.1f64..3.0,
            c in proptest::collection::vec(-1.0f64..1.0, 6)
        ) {
            let g = RadialGrid::uniform(a.abs(), a.abs() + b, 9).unwrap();
            let p = |r: f64| c.iter().rev().fold(0.0, |acc, ci| acc * r + ci);
            let antider = |r: f64| c.iter().enumerate()
                .map(|(k, ck)| ck * r.powi(k as i32 + 1) / (k + 1) as f64).sum::<f64>();
            let v: Vec<f64> = g.nodes().iter().map(|&r| p(r)).collect();
            let got = integrate_moment(&v, &g, 0.0, Tails::NONE).unwrap();
            let want = antider(g.r_max()) - antider(g.r_min());
            let scale = c.iter().map(|x| x.abs()).sum::<f64>() * (1.0 + g.r_max()).powi(6);
            prop_assert!((got - want).abs() <= 1e-12 * scale.max(want.abs()));
        }
    }
}
