//! Adaptive Dormand–Prince 5(4) integration for small fixed-size systems.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Accepted steps of an integration, including the initial point.
#[derive(Debug, Clone)]
pub struct Trajectory<const N: usize> {
    pub xs: Vec<f64>,
    pub ys: Vec<[f64; N]>,
}

impl<const N: usize> Trajectory<N> {
    pub fn last(&self) -> (f64, [f64; N]) {
        (self.xs[self.xs.len() - 1], self.ys[self.ys.len() - 1])
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DormandPrince {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub min_step: f64,
}

impl DormandPrince {
    /// Mixed absolute/relative error control with the same tolerance.
    pub fn new(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            max_steps: 1_000_000,
            min_step: 1e-300,
        }
    }

    /// Purely relative error control.
    pub fn relative(tol: f64) -> Self {
        Self {
            atol: 0.0,
            ..Self::new(tol)
        }
    }

    /// Integrates from `x0` to `x1`, calling `observe` after every accepted
    /// step. `observe` may return `false` to stop early; the returned state is
    /// then the last accepted one.
    pub fn integrate<const N: usize>(
        &self,
        rhs: &impl Fn(f64, &[f64; N]) -> [f64; N],
        x0: f64,
        y0: [f64; N],
        x1: f64,
        mut observe: impl FnMut(f64, &[f64; N]) -> bool,
    ) -> Result<(f64, [f64; N])> {
        if !(self.rtol > 0.0) || self.atol < 0.0 {
            return Err(Error::Argument(format!("tolerance must be positive, got {}", self.rtol)));
        }
        let dir = if x1 >= x0 { 1.0 } else { -1.0 };
        let span = (x1 - x0).abs();
        if span == 0.0 {
            return Ok((x0, y0));
        }
        let mut x = x0;
        let mut y = y0;
        let mut k1 = rhs(x, &y);
        let mut h = (span * 1e-3).max(self.min_step) * dir;
        for _ in 0..self.max_steps {
            if (x1 - x) * dir <= 0.0 {
                break;
            }
            if ((x + h) - x1) * dir > 0.0 {
                h = x1 - x;
            }
            let stage = |ks: &[(&[f64; N], f64)]| -> [f64; N] {
                let mut out = y;
                for (k, a) in ks {
                    for i in 0..N {
                        out[i] += h * a * k[i];
                    }
                }
                out
            };
            let k2 = rhs(x + C2 * h, &stage(&[(&k1, A21)]));
            let k3 = rhs(x + C3 * h, &stage(&[(&k1, A31), (&k2, A32)]));
            let k4 = rhs(x + C4 * h, &stage(&[(&k1, A41), (&k2, A42), (&k3, A43)]));
            let k5 = rhs(
                x + C5 * h,
                &stage(&[(&k1, A51), (&k2, A52), (&k3, A53), (&k4, A54)]),
            );
            let k6 = rhs(
                x + h,
                &stage(&[(&k1, A61), (&k2, A62), (&k3, A63), (&k4, A64), (&k5, A65)]),
            );
            let y_new = stage(&[(&k1, B1), (&k3, B3), (&k4, B4), (&k5, B5), (&k6, B6)]);
            let k7 = rhs(x + h, &y_new);

            let mut err = 0.0_f64;
            for i in 0..N {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let scale = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
                err = err.max(if scale > 0.0 { (e / scale).abs() } else if e == 0.0 { 0.0 } else { f64::INFINITY });
            }
            if !err.is_finite() {
                err = 1e10;
            }
            if err <= 1.0 {
                x += h;
                y = y_new;
                k1 = k7;
                if !y.iter().all(|v| v.is_finite()) {
                    return Err(Error::Integration {
                        x,
                        reason: "state became non-finite".into(),
                    });
                }
                if !observe(x, &y) {
                    return Ok((x, y));
                }
                let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                h *= factor;
            } else {
                h *= (0.9 * err.powf(-0.25)).clamp(0.1, 0.9);
            }
            if h.abs() < self.min_step.max(f64::EPSILON * x.abs()) {
                return Err(Error::Integration {
                    x,
                    reason: "step size underflow".into(),
                });
            }
        }
        if (x1 - x) * dir > 0.0 {
            return Err(Error::Integration {
                x,
                reason: format!("exceeded {} steps", self.max_steps),
            });
        }
        Ok((x, y))
    }
}

/// Adaptive fifth-order integration of `y' = rhs(x, y)` over `span`.
pub fn solve_ivp<const N: usize>(
    rhs: impl Fn(f64, &[f64; N]) -> [f64; N],
    y0: [f64; N],
    span: (f64, f64),
    tol: f64,
) -> Result<Trajectory<N>> {
    if !y0.iter().all(|v| v.is_finite()) {
        return Err(Error::Argument("initial state must be finite".into()));
    }
    let mut traj = Trajectory {
        xs: vec![span.0],
        ys: vec![y0],
    };
    DormandPrince::new(tol).integrate(&rhs, span.0, y0, span.1, |x, y| {
        traj.xs.push(x);
        traj.ys.push(*y);
        true
    })?;
    Ok(traj)
}
