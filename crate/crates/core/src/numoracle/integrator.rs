//! Dormand–Prince 5(4) with step-size control and section detection.

use super::{NumericSystem, OracleError};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights (same as the last row of `A`).
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// Embedded pair order used by the step-size controller.
pub const ORDER: i32 = 5;

pub type State = [f64; 3];

/// Error targets; a step is accepted when the embedded estimate, scaled by
/// `atol + rtol·|x|` per component, has max-norm at most 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Tolerance {
    pub fn uniform(tol: f64) -> Tolerance {
        Tolerance { rtol: tol, atol: tol }
    }
}

/// One Dormand–Prince step: returns the fifth-order state and the scaled
/// error norm.
pub(crate) fn dp_step(sys: &NumericSystem, x: &State, h: f64, tol: Tolerance) -> (State, f64) {
    let mut k = [[0.0; 3]; 7];
    k[0] = sys.field(x);
    for s in 1..7 {
        let mut y = *x;
        for (j, kj) in k.iter().enumerate().take(s) {
            for i in 0..3 {
                y[i] += h * A[s][j] * kj[i];
            }
        }
        k[s] = sys.field(&y);
    }
    let _ = C;
    let mut x5 = *x;
    let mut err: f64 = 0.0;
    for i in 0..3 {
        let mut d5 = 0.0;
        let mut d4 = 0.0;
        for s in 0..7 {
            d5 += B5[s] * k[s][i];
            d4 += B4[s] * k[s][i];
        }
        x5[i] += h * d5;
        let scale = tol.atol + tol.rtol * x[i].abs().max(x5[i].abs());
        err = err.max((h * (d5 - d4)).abs() / scale);
    }
    (x5, err)
}

/// Advances from `x` by one accepted step no larger than `h_max`, adapting
/// `h` in place. Returns the step actually taken and the new state.
pub(crate) fn accepted_step(
    sys: &NumericSystem,
    x: &State,
    h: &mut f64,
    h_max: f64,
    tol: Tolerance,
) -> Result<(f64, State), OracleError> {
    loop {
        let step = h.min(h_max);
        if step < 1e-14 {
            return Err(OracleError::StepUnderflow);
        }
        let (next, err) = dp_step(sys, x, step, tol);
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-1.0 / ORDER as f64)).clamp(0.2, 5.0) };
        if err <= 1.0 && next.iter().all(|v| v.is_finite()) {
            *h = (step * factor).max(*h * 0.2);
            return Ok((step, next));
        }
        *h = step * factor.min(0.9);
    }
}

/// A trajectory with every accepted step recorded.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSample {
    pub times: Vec<f64>,
    pub states: Vec<State>,
    pub tolerance: Tolerance,
}

impl OrbitSample {
    pub fn last(&self) -> (f64, State) {
        (*self.times.last().expect("nonempty orbit"), *self.states.last().expect("nonempty orbit"))
    }
}

/// Integrates from `x0` over `[0, t_max]`, ending exactly at `t_max`.
pub fn integrate_orbit(sys: &NumericSystem, x0: State, t_max: f64, tol: f64) -> Result<OrbitSample, OracleError> {
    if !(tol > 0.0) || !(t_max >= 0.0) {
        return Err(OracleError::Domain("tolerance must be positive and t_max non-negative".into()));
    }
    let tolerance = Tolerance::uniform(tol);
    let mut t = 0.0;
    let mut x = x0;
    let mut h = 1e-2_f64.min(t_max.max(1e-12));
    let mut times = vec![0.0];
    let mut states = vec![x0];
    while t < t_max {
        let (dt, next) = accepted_step(sys, &x, &mut h, t_max - t, tolerance)?;
        t = if t_max - t - dt < 1e-15 { t_max } else { t + dt };
        x = next;
        times.push(t);
        states.push(x);
    }
    Ok(OrbitSample { times, states, tolerance })
}

/// Successive upward crossings of the half-plane `{y = 0, x > 0}`, each
/// refined by bisection on the step length until `|y| ≤ tol`.
pub(crate) struct SectionWalker<'a> {
    sys: &'a NumericSystem,
    tol: Tolerance,
    x: State,
    h: f64,
    t: f64,
    pub escape_radius: f64,
    pub t_limit: f64,
}

impl<'a> SectionWalker<'a> {
    pub fn new(sys: &'a NumericSystem, x0: State, tol: f64) -> Self {
        SectionWalker {
            sys,
            tol: Tolerance::uniform(tol),
            x: x0,
            h: 1e-2,
            t: 0.0,
            escape_radius: f64::INFINITY,
            t_limit: f64::INFINITY,
        }
    }

    /// The state at the next crossing.
    pub fn next_crossing(&mut self) -> Result<State, OracleError> {
        loop {
            if self.t > self.t_limit {
                return Err(OracleError::NoReturn);
            }
            let (dt, next) = accepted_step(self.sys, &self.x, &mut self.h, 0.25, self.tol)?;
            if next.iter().map(|v| v * v).sum::<f64>().sqrt() > self.escape_radius {
                return Err(OracleError::Escaped);
            }
            let crossed = self.x[1] < 0.0 && next[1] >= 0.0 && next[0] > 0.0;
            let start = self.x;
            self.x = next;
            self.t += dt;
            if crossed {
                return Ok(self.refine(&start, dt));
            }
        }
    }

    fn refine(&self, start: &State, dt: f64) -> State {
        let (mut lo, mut hi) = (0.0, dt);
        let mut best = self.x;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let (y, _) = dp_step(self.sys, start, mid, self.tol);
            best = y;
            if y[1].abs() <= self.tol.atol * 1e-3 || hi - lo < 1e-15 {
                break;
            }
            if y[1] < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        best
    }
}
