use super::grid::RadialGrid;

/// Four-point Lagrange interpolation in the grid coordinate.
///
/// Returns `None` outside `[r_min, r_max]`.
pub fn interpolate(values: &[f64], grid: &RadialGrid, r: f64) -> Option<f64> {
    let n = grid.len();
    if !(r >= grid.r_min() && r <= grid.r_max()) {
        return None;
    }
    let s = (grid.coordinate(r) - grid.coordinate_origin()) / grid.step();
    let i = (s.floor() as isize).clamp(1, n as isize - 3) as usize;
    let u = s - i as f64;
    // nodes at u = -1, 0, 1, 2
    let l0 = -u * (u - 1.0) * (u - 2.0) / 6.0;
    let l1 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
    let l2 = -(u + 1.0) * u * (u - 2.0) / 2.0;
    let l3 = (u + 1.0) * u * (u - 1.0) / 6.0;
    Some(l0 * values[i - 1] + l1 * values[i] + l2 * values[i + 1] + l3 * values[i + 2])
}

/// Quintic Hermite interpolation on `[x0, x1]` from values and first and
/// second derivatives at both ends.
#[allow(clippy::too_many_arguments)]
pub fn quintic_hermite(
    x: f64,
    x0: f64,
    x1: f64,
    (f0, d0, s0): (f64, f64, f64),
    (f1, d1, s1): (f64, f64, f64),
) -> (f64, f64) {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t3 * t;
    let t5 = t4 * t;
    let h00 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    let h10 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    let h20 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
    let h01 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    let h11 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    let h21 = 0.5 * (t3 - 2.0 * t4 + t5);
    let value = h00 * f0 + h10 * h * d0 + h20 * h * h * s0 + h01 * f1 + h11 * h * d1 + h21 * h * h * s1;

    let dh00 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
    let dh10 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
    let dh20 = 0.5 * (2.0 * t - 9.0 * t2 + 12.0 * t3 - 5.0 * t4);
    let dh01 = 30.0 * t2 - 60.0 * t3 + 30.0 * t4;
    let dh11 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
    let dh21 = 0.5 * (3.0 * t2 - 8.0 * t3 + 5.0 * t4);
    let deriv = (dh00 * f0 + dh10 * h * d0 + dh20 * h * h * s0 + dh01 * f1 + dh11 * h * d1
        + dh21 * h * h * s1)
        / h;
    (value, deriv)
}
