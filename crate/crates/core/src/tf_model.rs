//! Universal Thomas–Fermi screening function and the scaled potential and
//! density it generates.
//!
//! The screening function solves `φ'' = φ^{3/2} / √x` with `φ(0) = 1` and
//! `φ(∞) = 0`. Lengths relate through `R = b₀ x` with
//! `b₀ = (1/2)(3π/4)^{2/3}`; the scaled potential is `v(R) = −φ(R/b₀)/R`
//! and the scaled density is `ρ(R) = (−2v)^{3/2} / (3π²)`. Unscaled
//! quantities follow from `r = R / Z^{1/3}`, `V = Z^{4/3} v`, `n = Z² ρ`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::roots::bisect_predicate;
use crate::numerics::DormandPrince;

/// Series start abscissa.
pub const SERIES_START_X: f64 = 1e-6;
/// Default abscissa where the table hands over to the asymptotic tail.
pub const DEFAULT_TAIL_MATCH_X: f64 = 1e5;
/// Table density (points per decade of `x`).
pub const TABLE_POINTS_PER_DECADE: usize = 200;
pub const DEFAULT_TOLERANCE: f64 = 1e-13;

const SERIES_ORDER: usize = 24;
const AGREEMENT: f64 = 1e-12;

/// Length scale `(1/2)(3π/4)^{2/3}` relating `R = b₀ x`.
pub fn b0() -> f64 {
    0.5 * (3.0 * PI / 4.0).powf(2.0 / 3.0)
}

/// Exponent of the leading correction to the Sommerfeld tail,
/// `φ ≈ (144/x³)(1 + a x^{-γ} + …)`.
pub fn tail_correction_exponent() -> f64 {
    (73f64.sqrt() - 7.0) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiPoint {
    pub x: f64,
    pub phi: f64,
    pub dphi: f64,
}

/// Matched large-`x` continuation `φ = 144 x⁻³ (1 + a x^{-γ} + e x^{-2γ})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub a: f64,
    pub e: f64,
}

impl TailFit {
    fn eval(&self, x: f64) -> (f64, f64) {
        let g = tail_correction_exponent();
        let u = x.powf(-g);
        let f = 1.0 + self.a * u + self.e * u * u;
        let phi = 144.0 / x.powi(3) * f;
        let dphi = 144.0 / x.powi(4) * (-3.0 - (3.0 + g) * self.a * u - (3.0 + 2.0 * g) * self.e * u * u);
        (phi, dphi)
    }

    /// Continuity of `φ` and `φ'` at `(x, φ, φ')`.
    fn matched(p: PhiPoint) -> Self {
        let g = tail_correction_exponent();
        let r1 = p.phi * p.x.powi(3) / 144.0 - 1.0;
        let r2 = p.dphi * p.x.powi(4) / 144.0 + 3.0;
        let big_e = (-r2 - (3.0 + g) * r1) / g;
        let big_a = r1 - big_e;
        let u = p.x.powf(-g);
        TailFit {
            a: big_a / u,
            e: big_e / (u * u),
        }
    }
}

/// Neutral-atom screening function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfSolution {
    /// `B = −φ'(0)`.
    pub slope_b: f64,
    pub b0: f64,
    pub tail_match_x: f64,
    pub tolerance: f64,
    pub phi_table: Vec<PhiPoint>,
    pub tail: TailFit,
    series: Vec<f64>,
}

/// Power-series coefficients `c_n` of `φ = Σ c_n t^n`, `t = √x`, for a given
/// initial slope. Generated by substituting the series into the ODE.
pub fn series_coefficients(slope_b: f64, order: usize) -> Vec<f64> {
    let mut c = vec![0.0; order + 1];
    let mut p = vec![0.0; order + 1];
    c[0] = 1.0;
    if order >= 2 {
        c[2] = -slope_b;
    }
    p[0] = 1.0;
    let a = 1.5;
    let mut p_known = 0;
    for n in 3..=order {
        let k_needed = n - 3;
        while p_known < k_needed {
            let k = p_known + 1;
            let s = (1..=k)
                .map(|j| ((a + 1.0) * j as f64 - k as f64) * c[j] * p[k - j])
                .sum::<f64>();
            p[k] = s / (k as f64 * c[0]);
            p_known = k;
        }
        c[n] = 4.0 * p[k_needed] / (n as f64 * (n as f64 - 2.0));
    }
    c
}

fn series_eval(c: &[f64], x: f64) -> (f64, f64) {
    let t = x.sqrt();
    let mut phi = 0.0;
    let mut dphi = 0.0;
    for n in (0..c.len()).rev() {
        phi = phi * t + c[n];
    }
    // dφ/dx = Σ n c_n t^{n-2} / 2, n >= 2 (c_1 = 0)
    for n in (2..c.len()).rev() {
        dphi = dphi * t + 0.5 * n as f64 * c[n];
    }
    (phi, dphi)
}

/// `φ'' = φ^{3/2}/√x` rewritten in `t = √x`, state `[φ, dφ/dx]`.
fn rhs_in_t(t: f64, y: &[f64; 2]) -> [f64; 2] {
    [2.0 * t * y[1], 2.0 * y[0].max(0.0).powf(1.5)]
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Outcome {
    /// φ reached zero: slope too steep.
    Crossed,
    /// φ' turned positive: slope too shallow.
    Turned,
    Reached,
}

struct Shooter {
    xs: Vec<f64>,
    stepper: DormandPrince,
}

impl Shooter {
    fn run(&self, start: usize, state: [f64; 2], record: bool) -> Result<(Outcome, Vec<[f64; 2]>)> {
        let mut y = state;
        let mut out = Vec::new();
        if record {
            out.push(y);
        }
        for i in start..self.xs.len() - 1 {
            let mut outcome = Outcome::Reached;
            let (_, y_new) = self.stepper.integrate(
                &rhs_in_t,
                self.xs[i].sqrt(),
                y,
                self.xs[i + 1].sqrt(),
                |_, s| {
                    if s[0] <= 0.0 {
                        outcome = Outcome::Crossed;
                    } else if s[1] >= 0.0 {
                        outcome = Outcome::Turned;
                    }
                    outcome == Outcome::Reached
                },
            )?;
            if outcome != Outcome::Reached {
                return Ok((outcome, out));
            }
            y = y_new;
            if record {
                out.push(y);
            }
        }
        Ok((Outcome::Reached, out))
    }

    fn classify(&self, start: usize, state: [f64; 2]) -> Result<Outcome> {
        Ok(self.run(start, state, false)?.0)
    }
}

/// Signed shooting mismatch for a trial slope: `+1/x` if φ reaches zero at
/// `x`, `−1/x` if φ' turns positive at `x`, `0` if neither happens before
/// `x_end`. Increasing in the slope, with its root at `B`.
pub fn shooting_mismatch(slope: f64, x_end: f64, tolerance: f64) -> Result<f64> {
    let shooter = Shooter {
        xs: log_samples(SERIES_START_X, x_end, TABLE_POINTS_PER_DECADE),
        stepper: DormandPrince::relative(tolerance),
    };
    let c = series_coefficients(slope, SERIES_ORDER);
    let (phi, dphi) = series_eval(&c, SERIES_START_X);
    let (outcome, states) = shooter.run(0, [phi, dphi], true)?;
    let x_event = shooter.xs[states.len().min(shooter.xs.len() - 1)];
    Ok(match outcome {
        Outcome::Crossed => 1.0 / x_event,
        Outcome::Turned => -1.0 / x_event,
        Outcome::Reached => 0.0,
    })
}

fn log_samples(x0: f64, x1: f64, per_decade: usize) -> Vec<f64> {
    let decades = (x1 / x0).log10();
    let n = (decades * per_decade as f64).ceil() as usize;
    let step = (x1 / x0).ln() / n as f64;
    (0..=n)
        .map(|i| if i == n { x1 } else { x0 * (step * i as f64).exp() })
        .collect()
}

/// Solves for the screening function with default tail matching.
pub fn solve_tf(tolerance: f64) -> Result<TfSolution> {
    solve_tf_with(tolerance, DEFAULT_TAIL_MATCH_X)
}

/// Shooting in stages: the slope at the series start is bisected to full
/// precision, the two bracketing trajectories are followed while they agree,
/// and the shooting restarts on `φ'` from the last agreeing point until
/// `tail_match_x` is reached.
pub fn solve_tf_with(tolerance: f64, tail_match_x: f64) -> Result<TfSolution> {
    if !(tolerance > 0.0) {
        return Err(Error::Argument(format!("tolerance must be positive, got {tolerance}")));
    }
    if !(tail_match_x > 10.0) {
        return Err(Error::Argument(format!(
            "tail match abscissa must exceed 10, got {tail_match_x}"
        )));
    }
    // classification runs past the table end so the last stages still see
    // the bracketing trajectories separate
    let table_len = log_samples(SERIES_START_X, tail_match_x, TABLE_POINTS_PER_DECADE).len();
    let shooter = Shooter {
        xs: log_samples(
            SERIES_START_X,
            tail_match_x * 1e3,
            TABLE_POINTS_PER_DECADE,
        ),
        stepper: DormandPrince::relative(tolerance),
    };
    let last = table_len - 1;

    let start_state = |b: f64| {
        let (phi, dphi) = series_eval(&series_coefficients(b, SERIES_ORDER), SERIES_START_X);
        [phi, dphi]
    };
    let crossed = |start: usize, s: [f64; 2]| -> Result<bool> {
        Ok(match shooter.classify(start, s)? {
            Outcome::Crossed => true,
            Outcome::Turned => false,
            // never diverged: treat as separatrix, arbitrary side
            Outcome::Reached => true,
        })
    };

    let (b_lo, b_hi) = (1.5, 1.7);
    if crossed(0, start_state(b_lo))? || !crossed(0, start_state(b_hi))? {
        return Err(Error::Bracket {
            lo: b_lo,
            hi: b_hi,
            g_lo: shooting_mismatch(b_lo, tail_match_x, tolerance)?,
            g_hi: shooting_mismatch(b_hi, tail_match_x, tolerance)?,
        });
    }
    let mut failure = None;
    let (b_lo, b_hi) = bisect_predicate(
        |b| match crossed(0, start_state(b)) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                false
            }
        },
        b_lo,
        b_hi,
        200,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let slope_b = 0.5 * (b_lo + b_hi);

    let mut states: Vec<[f64; 2]> = vec![start_state(slope_b)];
    let (mut lo_state, mut hi_state) = (start_state(b_lo), start_state(b_hi));
    let mut start = 0;
    loop {
        let (_, lo_traj) = shooter.run(start, lo_state, true)?;
        let (_, hi_traj) = shooter.run(start, hi_state, true)?;
        let common = lo_traj.len().min(hi_traj.len());
        let mut agree = 0;
        for k in 0..common {
            let (a, b) = (lo_traj[k], hi_traj[k]);
            let ok = (a[0] - b[0]).abs() <= AGREEMENT * a[0].abs()
                && (a[1] - b[1]).abs() <= AGREEMENT * a[1].abs();
            if !ok {
                break;
            }
            agree = k;
        }
        for k in 1..=agree {
            let (a, b) = (lo_traj[k], hi_traj[k]);
            states.push([0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]);
        }
        let reached = start + agree;
        if reached >= last {
            break;
        }
        if agree == 0 {
            return Err(Error::Integration {
                x: shooter.xs[start],
                reason: "shooting made no progress; tighten the tolerance".into(),
            });
        }
        start = reached;
        let s = states[start];
        let (lo, hi) = restart_bracket(&shooter, start, s)?;
        let (p_shallow, p_steep) = bisect_predicate(
            |p| matches!(shooter.classify(start, [s[0], p]), Ok(Outcome::Crossed) | Ok(Outcome::Reached)),
            lo,
            hi,
            200,
        );
        lo_state = [s[0], p_shallow];
        hi_state = [s[0], p_steep];
    }

    states.truncate(table_len);
    let phi_table: Vec<PhiPoint> = shooter
        .xs
        .iter()
        .zip(&states)
        .map(|(&x, s)| PhiPoint {
            x,
            phi: s[0],
            dphi: s[1],
        })
        .collect();
    let tail = TailFit::matched(phi_table[phi_table.len() - 1]);
    let tail_match_x = phi_table[phi_table.len() - 1].x;
    Ok(TfSolution {
        slope_b,
        b0: b0(),
        tail_match_x,
        tolerance,
        phi_table,
        tail,
        series: series_coefficients(slope_b, SERIES_ORDER),
    })
}

/// Bracket on φ' at a restart point: shallow end turns up, steep end crosses.
fn restart_bracket(shooter: &Shooter, start: usize, s: [f64; 2]) -> Result<(f64, f64)> {
    let p = s[1];
    let mut delta = 1e-10;
    while delta < 0.5 {
        let shallow = p + delta * p.abs();
        let steep = p - delta * p.abs();
        let o_shallow = shooter.classify(start, [s[0], shallow])?;
        let o_steep = shooter.classify(start, [s[0], steep])?;
        if o_shallow == Outcome::Turned && o_steep != Outcome::Turned {
            return Ok((shallow, steep));
        }
        delta *= 10.0;
    }
    Err(Error::Integration {
        x: shooter.xs[start],
        reason: "could not bracket the separatrix slope at restart".into(),
    })
}

impl TfSolution {
    pub fn series_start_x(&self) -> f64 {
        self.phi_table[0].x
    }

    /// `(φ, φ')` at `x ≥ 0`.
    pub fn phi_and_derivative(&self, x: f64) -> Result<(f64, f64)> {
        if !(x >= 0.0) {
            return Err(Error::Domain(format!("phi requires x >= 0, got {x}")));
        }
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: f64) -> (f64, f64) {
        let table = &self.phi_table;
        let x0 = table[0].x;
        if x <= x0 {
            return series_eval(&self.series, x);
        }
        if x >= self.tail_match_x {
            return self.tail.eval(x);
        }
        let n = table.len() - 1;
        let step = (self.tail_match_x / x0).ln() / n as f64;
        let mut i = (((x / x0).ln() / step).floor() as usize).min(n - 1);
        // guard against rounding at cell boundaries
        while i > 0 && table[i].x > x {
            i -= 1;
        }
        while i + 1 < n && table[i + 1].x < x {
            i += 1;
        }
        let (a, b) = (table[i], table[i + 1]);
        let curv = |p: PhiPoint| p.phi.max(0.0).powf(1.5) / p.x.sqrt();
        crate::numerics::interp::quintic_hermite(
            x,
            a.x,
            b.x,
            (a.phi, a.dphi, curv(a)),
            (b.phi, b.dphi, curv(b)),
        )
    }

    pub fn phi_at(&self, x: f64) -> Result<f64> {
        Ok(self.phi_and_derivative(x)?.0)
    }

    /// Scaled potential `v(R) = −φ(R/b₀)/R`.
    pub fn v_scaled(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("v(R) requires R > 0, got {r}")));
        }
        Ok(-self.eval_unchecked(r / self.b0).0 / r)
    }

    /// Scaled density `ρ_TF(R) = (−2 v)^{3/2} / (3π²)`.
    pub fn rho_tf(&self, r: f64) -> Result<f64> {
        let v = self.v_scaled(r)?;
        Ok((-2.0 * v).max(0.0).powf(1.5) / (3.0 * PI * PI))
    }

    /// `V(r; Z) = Z^{4/3} v(Z^{1/3} r)`.
    pub fn potential_unscaled(&self, z: f64, r: f64) -> Result<f64> {
        check_charge(z)?;
        if !(r > 0.0) {
            return Err(Error::Domain(format!("V(r) requires r > 0, got {r}")));
        }
        Ok(z.powf(4.0 / 3.0) * self.v_scaled(z.cbrt() * r)?)
    }

    /// `n(r; Z) = Z² ρ_TF(Z^{1/3} r)`.
    pub fn density_unscaled(&self, z: f64, r: f64) -> Result<f64> {
        check_charge(z)?;
        if !(r > 0.0) {
            return Err(Error::Domain(format!("n(r) requires r > 0, got {r}")));
        }
        Ok(z * z * self.rho_tf(z.cbrt() * r)?)
    }

    /// Coefficient of `Z^{7/3}` in the neutral-atom energy, `−(3/7) B / b₀`.
    pub fn energy_coefficient(&self) -> f64 {
        -3.0 / 7.0 * self.slope_b / self.b0
    }
}

fn check_charge(z: f64) -> Result<()> {
    if !(z >= 1.0) {
        return Err(Error::Domain(format!("nuclear charge must be >= 1, got {z}")));
    }
    Ok(())
}
