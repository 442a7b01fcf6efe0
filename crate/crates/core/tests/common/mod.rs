#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};

/// Eigenvalues of the Numerov-discretized radial Hamiltonian on a log grid
/// with Dirichlet ends, by dense symmetric diagonalization.
///
/// Numerov for `y'' = (A − E B) y` reads `D y = M (A − E B) y` with
/// `D = (T − 2)/h²` and `M = (T + 10)/12`, `T` the nearest-neighbour shift.
/// `D` and `M` commute, so `A − M⁻¹D` is symmetric and the pencil reduces to
/// a standard symmetric problem after scaling by `B^{-1/2}`.
pub fn numerov_matrix_levels(nodes: &[f64], step: f64, potential: &[f64], ell: usize) -> Vec<f64> {
    // interior nodes only
    let r = &nodes[1..nodes.len() - 1];
    let v = &potential[1..potential.len() - 1];
    let n = r.len();
    let lh = ell as f64 + 0.5;
    let shift = |diag: f64| {
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                diag
            } else if i.abs_diff(j) == 1 {
                1.0
            } else {
                0.0
            }
        })
    };
    let d = shift(-2.0) / (step * step);
    let m = shift(10.0) / 12.0;
    let m_inv_d = m.lu().solve(&d).expect("invertible Numerov mass matrix");
    let b = r.iter().map(|x| 2.0 * x * x).collect::<Vec<_>>();
    let mut h = -m_inv_d;
    for i in 0..n {
        h[(i, i)] += b[i] * v[i] + lh * lh;
    }
    // symmetrize away rounding, then scale by B^{-1/2}
    let h = (&h + h.transpose()) * 0.5;
    let s = DMatrix::from_fn(n, n, |i, j| h[(i, j)] / (b[i] * b[j]).sqrt());
    let mut e = SymmetricEigen::new(s).eigenvalues.iter().copied().collect::<Vec<_>>();
    e.sort_by(f64::total_cmp);
    e
}

/// Initial slope `B` of the neutral Thomas-Fermi solution by plain shooting
/// with fixed-step RK4, independent of the library's adaptive integrator.
///
/// With `t = √x` and `p = dφ/dx` the equation becomes the regular system
/// `φ_t = 2 t p`, `p_t = 2 φ^{3/2}`. A trial slope is too steep if `φ`
/// reaches zero and too shallow if `p` turns positive before `t_max`.
pub fn tf_slope_rk4(h: f64, t_max: f64) -> f64 {
    let rhs = |t: f64, [phi, p]: [f64; 2]| [2.0 * t * p, 2.0 * phi.max(0.0).powf(1.5)];
    let too_steep = |b: f64| {
        let (mut t, mut y) = (0.0, [1.0, -b]);
        while t < t_max {
            let k1 = rhs(t, y);
            let k2 = rhs(t + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
            let k3 = rhs(t + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
            let k4 = rhs(t + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
            for i in 0..2 {
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            t += h;
            if y[0] <= 0.0 {
                return true;
            }
            if y[1] > 0.0 {
                return false;
            }
        }
        y[1] < 0.0 && y[0] < 0.0
    };
    let (mut lo, mut hi) = (1.5, 1.7);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if too_steep(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Richardson extrapolation of a fourth-order quantity from steps `h` and `h/2`.
pub fn richardson4(coarse: f64, fine: f64) -> f64 {
    fine + (fine - coarse) / 15.0
}
