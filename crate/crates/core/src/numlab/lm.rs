//! Levenberg-Marquardt on the heptagon system with multistart.
//!
//! Damping is the plain Levenberg form `(JᵀJ + λI) δ = -Jᵀr`. A trial step
//! is accepted when it lowers `‖r‖₂`, after which `λ` is divided by
//! `lambda_down`; otherwise `λ` is multiplied by `lambda_up` and the step is
//! retried. Every trial counts as one iteration.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::system::{inf_norm, jacobian, residual, to_matrices, Mat3, UNKNOWNS};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LmOptions {
    pub max_iter: usize,
    /// Convergence threshold on the residual ∞-norm.
    pub tol: f64,
    pub lambda0: f64,
    pub lambda_up: f64,
    pub lambda_down: f64,
    /// Initial entries are uniform in `[-init_scale, init_scale]`.
    pub init_scale: f64,
    pub min_step: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        LmOptions {
            max_iter: 1000,
            tol: 1e-12,
            lambda0: 1e-3,
            lambda_up: 10.0,
            lambda_down: 10.0,
            init_scale: 1.0,
            min_step: 1e-14,
        }
    }
}

impl LmOptions {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.tol, self.lambda0, self.lambda_up, self.lambda_down, self.init_scale, self.min_step];
        if self.max_iter == 0 || positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Schema(format!("LM options must be positive: {self:?}")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub lambda: f64,
    /// `‖r‖₂` before the trial.
    pub norm: f64,
    /// `‖r‖₂` at the trial point.
    pub trial_norm: f64,
    pub accepted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericRun {
    pub seed: u64,
    pub iterations: usize,
    /// Residual ∞-norm at the returned point.
    pub residual: f64,
    pub converged: bool,
    pub matrices: Vec<Mat3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    #[serde(default, skip)]
    pub trace: Vec<TraceEntry>,
}

impl NumericRun {
    pub fn point(&self) -> Vec<f64> {
        super::system::from_matrices(&self.matrices)
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Uniform random start determined by `seed`.
pub fn initial_point(seed: u64, init_scale: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..UNKNOWNS).map(|_| rng.gen_range(-init_scale..=init_scale)).collect()
}

pub fn lm_solve(seed: u64, opts: &LmOptions) -> Result<NumericRun> {
    lm_solve_from(initial_point(seed, opts.init_scale), seed, opts)
}

pub fn lm_solve_from(x0: Vec<f64>, seed: u64, opts: &LmOptions) -> Result<NumericRun> {
    opts.validate()?;
    if x0.len() != UNKNOWNS {
        return Err(Error::Dimension(format!("{} unknowns, expected {UNKNOWNS}", x0.len())));
    }
    let mut x = x0;
    let mut r = residual(&x);
    let mut lambda = opts.lambda0;
    let mut iterations = 0;
    let mut trace = Vec::new();
    let mut failure = None;

    'outer: loop {
        if !finite(&x) || !finite(&r) {
            failure = Some(Error::NonFinite.to_string());
            break;
        }
        if inf_norm(&r) < opts.tol || iterations >= opts.max_iter {
            break;
        }
        let jac = jacobian(&x);
        let rv = DVector::from_column_slice(&r);
        let grad = jac.tr_mul(&rv);
        let normal = jac.tr_mul(&jac);
        let norm = norm2(&r);
        loop {
            if iterations >= opts.max_iter {
                break 'outer;
            }
            iterations += 1;
            let damped = &normal + DMatrix::identity(UNKNOWNS, UNKNOWNS) * lambda;
            let Some(step) = damped.cholesky().map(|c| -c.solve(&grad)) else {
                lambda *= opts.lambda_up;
                continue;
            };
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let rt = residual(&trial);
            let trial_norm = norm2(&rt);
            let accepted = finite(&rt) && trial_norm < norm;
            trace.push(TraceEntry {
                iteration: iterations,
                lambda,
                norm,
                trial_norm,
                accepted,
            });
            if accepted {
                x = trial;
                r = rt;
                lambda /= opts.lambda_down;
                if step.norm() < opts.min_step {
                    break 'outer;
                }
                break;
            }
            lambda *= opts.lambda_up;
            if !lambda.is_finite() {
                failure = Some("damping overflow".into());
                break 'outer;
            }
        }
    }

    let residual_norm = inf_norm(&r);
    Ok(NumericRun {
        seed,
        iterations,
        residual: residual_norm,
        converged: failure.is_none() && residual_norm < opts.tol,
        matrices: to_matrices(&x),
        failure,
        trace,
    })
}

/// SplitMix64 step: distinct, well-spread run seeds from one base seed.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `runs` independent solves; results are in run order regardless of threads.
pub fn multistart(base_seed: u64, runs: usize, opts: &LmOptions) -> Result<Vec<NumericRun>> {
    opts.validate()?;
    (0..runs as u64)
        .into_par_iter()
        .map(|k| lm_solve(derive_seed(base_seed, k), opts))
        .collect()
}
