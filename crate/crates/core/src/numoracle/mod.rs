//! Floating-point cross-check of the exact constants.
//!
//! The system is integrated numerically, the return map to the half-plane
//! `{y = 0, x > 0}` is sampled at a few small radii, and the sign and order
//! of the displacement are compared with the first nonzero Lyapunov
//! constant. Nothing here feeds back into the exact pipeline.

mod integrator;

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::Rational;
use crate::lyapcore::LyapunovSequence;
use crate::sysmodel::HopfSystem;

pub use integrator::{integrate_orbit, OrbitSample, State, Tolerance, ORDER};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("system still has free parameters: {0}")]
    NotPinned(String),
    #[error("unsupported direction: lambda = {0} does not contract z; no displacement estimate")]
    UnsupportedDirection(Rational),
    #[error("integration diverged: step size underflow")]
    StepUnderflow,
    #[error("orbit left the box; no displacement estimate")]
    Escaped,
    #[error("orbit did not return to the section in time")]
    NoReturn,
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A parameter-free system in canonical form with float coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericSystem {
    pub lambda: f64,
    terms: [Vec<([i32; 3], f64)>; 3],
}

impl NumericSystem {
    /// Requires every parameter to be pinned already.
    pub fn from_system(s: &HopfSystem) -> Result<NumericSystem, OracleError> {
        if !s.parameters().is_empty() {
            return Err(OracleError::NotPinned(s.parameters().join(", ")));
        }
        let conv = |i: usize| {
            s.rational_terms(i)
                .into_iter()
                .map(|(e, c)| ([e[0] as i32, e[1] as i32, e[2] as i32], c.to_f64()))
                .collect::<Vec<_>>()
        };
        Ok(NumericSystem { lambda: s.lambda().to_f64(), terms: [conv(0), conv(1), conv(2)] })
    }

    /// The purely linear system with the given `λ`.
    pub fn linear(lambda: f64) -> NumericSystem {
        NumericSystem { lambda, terms: Default::default() }
    }

    pub fn field(&self, s: &State) -> State {
        let nl = |i: usize| -> f64 {
            self.terms[i].iter().map(|(e, c)| c * s[0].powi(e[0]) * s[1].powi(e[1]) * s[2].powi(e[2])).sum()
        };
        [-s[1] + nl(0), s[0] + nl(1), -self.lambda * s[2] + nl(2)]
    }
}

/// Classical fixed-step integration with the fifth-order weights, used to
/// measure the convergence order.
pub fn integrate_fixed(sys: &NumericSystem, x0: State, t_max: f64, steps: usize) -> State {
    let h = t_max / steps as f64;
    let tol = Tolerance::uniform(1.0);
    (0..steps).fold(x0, |x, _| integrator::dp_step(sys, &x, h, tol).0)
}

/// Knobs shared by every displacement measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub settle_turns: usize,
    pub tol: f64,
    /// Orbits leaving the ball of this radius are abandoned.
    pub escape_radius: f64,
    /// `|delta_rho|` at or below `noise_factor · tol` counts as noise.
    pub noise_factor: f64,
    /// Largest accepted distance between the fitted slope and an odd integer.
    pub fit_threshold: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { settle_turns: 20, tol: 1e-12, escape_radius: 1.0, noise_factor: 1e3, fit_threshold: 0.25 }
    }
}

impl OracleConfig {
    pub fn noise_floor(&self) -> f64 {
        self.noise_factor * self.tol
    }
}

/// One return-map measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Displacement {
    pub rho0: f64,
    /// Radius on the section after the transient turns.
    pub rho: f64,
    pub delta_rho: f64,
}

fn check_direction(s: &HopfSystem) -> Result<(), OracleError> {
    if s.lambda() <= &Rational::zero() {
        return Err(OracleError::UnsupportedDirection(s.lambda().clone()));
    }
    Ok(())
}

/// Starts at `(rho0, 0, 0)`, discards `settle_turns` returns, then takes the
/// median of three consecutive return differences.
pub fn displacement_estimate(
    s: &HopfSystem,
    rho0: f64,
    settle_turns: usize,
    tol: f64,
) -> Result<Displacement, OracleError> {
    let config = OracleConfig { settle_turns, tol, ..OracleConfig::default() };
    displacement_with(s, rho0, &config)
}

pub fn displacement_with(s: &HopfSystem, rho0: f64, config: &OracleConfig) -> Result<Displacement, OracleError> {
    check_direction(s)?;
    let sys = NumericSystem::from_system(s)?;
    measure(&sys, rho0, config)
}

fn measure(sys: &NumericSystem, rho0: f64, config: &OracleConfig) -> Result<Displacement, OracleError> {
    if !(rho0 > 0.0) || !(config.tol > 0.0) {
        return Err(OracleError::Domain("rho0 and tol must be positive".into()));
    }
    let mut walker = integrator::SectionWalker::new(sys, [rho0, 0.0, 0.0], config.tol);
    walker.escape_radius = config.escape_radius;
    // A turn takes about 2π; allow generous slack for slow spirals.
    walker.t_limit = 4.0 * std::f64::consts::TAU * (config.settle_turns + 5) as f64;
    // The start lies on the section but is not an upward crossing yet.
    for _ in 0..config.settle_turns {
        walker.next_crossing()?;
    }
    let mut xs = Vec::with_capacity(4);
    for _ in 0..4 {
        xs.push(walker.next_crossing()?[0]);
    }
    let mut deltas: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    deltas.sort_by(f64::total_cmp);
    Ok(Displacement { rho0, rho: xs[1], delta_rho: deltas[1] })
}

/// Measures every radius in parallel, preserving the input order.
pub fn displacement_sweep(
    s: &HopfSystem,
    rhos: &[f64],
    config: &OracleConfig,
) -> Result<Vec<Displacement>, OracleError> {
    check_direction(s)?;
    let sys = NumericSystem::from_system(s)?;
    rhos.par_iter().map(|&r| measure(&sys, r, config)).collect()
}

/// Writes `rho0, delta_rho, settle_turns, tol` rows.
pub fn write_csv<W: Write>(out: W, rows: &[Displacement], config: &OracleConfig) -> Result<(), OracleError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["rho0", "delta_rho", "settle_turns", "tol"])?;
    for r in rows {
        w.write_record([
            format!("{:e}", r.rho0),
            format!("{:e}", r.delta_rho),
            config.settle_turns.to_string(),
            format!("{:e}", config.tol),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Log–log fit of `|delta_rho|` against the settled radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FocalEstimate {
    pub rho0_samples: Vec<f64>,
    pub rho: Vec<f64>,
    pub delta_rho: Vec<f64>,
    pub slope: f64,
    /// The odd integer closest to `slope`.
    pub fitted_order: u32,
    /// `+1`, `-1`, or `0` when the samples disagree in sign.
    pub fitted_sign: i8,
    /// Larger of `|slope − fitted_order|` and the RMS of the fit.
    pub residual: f64,
}

impl FocalEstimate {
    pub fn from_samples(samples: &[Displacement]) -> Result<FocalEstimate, OracleError> {
        if samples.len() < 2 || samples.iter().any(|d| d.delta_rho == 0.0 || d.rho <= 0.0) {
            return Err(OracleError::Domain("need two or more samples with nonzero displacement".into()));
        }
        let xs: Vec<f64> = samples.iter().map(|d| d.rho.ln()).collect();
        let ys: Vec<f64> = samples.iter().map(|d| d.delta_rho.abs().ln()).collect();
        let n = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        if sxx == 0.0 {
            return Err(OracleError::Domain("samples share one radius".into()));
        }
        let slope = sxy / sxx;
        let rms = (xs.iter().zip(&ys).map(|(x, y)| (y - my - slope * (x - mx)).powi(2)).sum::<f64>() / n).sqrt();
        let fitted_order = (2.0 * ((slope - 1.0) / 2.0).round().max(0.0) + 1.0) as u32;
        let pos = samples.iter().all(|d| d.delta_rho > 0.0);
        let neg = samples.iter().all(|d| d.delta_rho < 0.0);
        Ok(FocalEstimate {
            rho0_samples: samples.iter().map(|d| d.rho0).collect(),
            rho: samples.iter().map(|d| d.rho).collect(),
            delta_rho: samples.iter().map(|d| d.delta_rho).collect(),
            slope,
            fitted_order,
            fitted_sign: if pos { 1 } else if neg { -1 } else { 0 },
            residual: (slope - fitted_order as f64).abs().max(rms),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Consistent,
    /// Every constant vanishes and the displacement is at the noise floor.
    ConsistentWithZero,
    Inconsistent { reason: String },
    Inconclusive { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignCheck {
    pub verdict: Verdict,
    /// First nonzero constant index and its sign, if any.
    pub expected: Option<(usize, i8)>,
    pub samples: Vec<Displacement>,
    pub fit: Option<FocalEstimate>,
}

/// Default radii for [`sign_check`].
pub const DEFAULT_RADII: [f64; 3] = [0.02, 0.04, 0.08];

/// Compares the numerically fitted displacement with the first nonzero
/// constant of `seq`, which must have been computed for `s` itself.
pub fn sign_check(s: &HopfSystem, seq: &LyapunovSequence) -> Result<SignCheck, OracleError> {
    sign_check_with(s, seq, &DEFAULT_RADII, &OracleConfig::default())
}

pub fn sign_check_with(
    s: &HopfSystem,
    seq: &LyapunovSequence,
    radii: &[f64],
    config: &OracleConfig,
) -> Result<SignCheck, OracleError> {
    let mut values = Vec::with_capacity(seq.len());
    for (i, l) in seq.constants.iter().enumerate() {
        let c = l.constant_term();
        if l != &crate::exactalg::Jet::constant(l.roster().clone(), l.degree(), c.clone()) {
            return Err(OracleError::NotPinned(format!("L{} depends on parameters", i + 1)));
        }
        values.push(c);
    }
    let expected = values.iter().position(|v| !v.is_zero()).map(|i| (i + 1, values[i].signum() as i8));
    let samples = displacement_sweep(s, radii, config)?;
    let inconclusive = |reason: &str, fit| SignCheck {
        verdict: Verdict::Inconclusive { reason: reason.to_string() },
        expected,
        samples: samples.clone(),
        fit,
    };
    let noisy = samples.iter().all(|d| d.delta_rho.abs() <= config.noise_floor());
    let Some((k, sign)) = expected else {
        return Ok(if noisy {
            SignCheck { verdict: Verdict::ConsistentWithZero, expected, samples, fit: None }
        } else {
            inconclusive("every computed constant vanishes but the displacement does not", None)
        });
    };
    if samples.iter().any(|d| d.delta_rho.abs() <= config.noise_floor()) {
        return Ok(inconclusive("displacement at the noise floor", None));
    }
    let fit = FocalEstimate::from_samples(&samples)?;
    if fit.fitted_sign == 0 {
        return Ok(inconclusive("samples disagree in sign", Some(fit)));
    }
    if fit.residual > config.fit_threshold {
        return Ok(inconclusive("log-log fit residual above threshold", Some(fit)));
    }
    let order = 2 * k as u32 + 1;
    let verdict = if fit.fitted_sign != sign {
        Verdict::Inconsistent { reason: format!("displacement sign {} but L{k} sign {sign}", fit.fitted_sign) }
    } else if fit.fitted_order != order {
        Verdict::Inconsistent { reason: format!("fitted order {} but L{k} predicts {order}", fit.fitted_order) }
    } else {
        Verdict::Consistent
    };
    Ok(SignCheck { verdict, expected, samples, fit: Some(fit) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_cubic() {
        let samples: Vec<Displacement> = [0.01, 0.02, 0.04]
            .iter()
            .map(|&r| Displacement { rho0: r, rho: r, delta_rho: -3.0 * r * r * r })
            .collect();
        let f = FocalEstimate::from_samples(&samples).unwrap();
        assert_eq!((f.fitted_order, f.fitted_sign), (3, -1));
        assert!(f.residual < 1e-9);
    }
}
