//! Damped Newton on the box scheme and natural-parameter continuation in α.

use super::scheme::BoxScheme;
use super::{SolutionPair, StepInfo};
use crate::error::{Error, Result};
use crate::reduce::max_abs;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug)]
pub struct NewtonOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// Sup norm of the residual before each iteration and at exit.
    pub history: Vec<f64>,
    pub converged: bool,
}

/// Newton with step halving on the sup norm of the residual.
pub fn newton(scheme: &BoxScheme, x0: &[f64], alpha: f64, tol: f64, max_iter: usize) -> Result<NewtonOutcome> {
    let mut x = x0.to_vec();
    if !scheme.admissible(&x) {
        return Err(Error::numerical("Newton start is not a positive metric"));
    }
    let mut r = scheme.residual_f64(&x, alpha);
    let mut norm = max_abs(&r);
    let mut history = vec![norm];
    let mut iterations = 0;
    while norm >= tol && iterations < max_iter {
        iterations += 1;
        let mut jac = scheme.jacobian(&x, alpha);
        let mut rhs: Vec<f64> = r.iter().map(|v| -v).collect();
        for (i, b) in rhs.iter_mut().enumerate() {
            let m = jac.row_max_abs(i);
            if m > 0.0 {
                jac.scale_row(i, 1.0 / m);
                *b /= m;
            }
        }
        let dx = jac.factor()?.solve(&rhs);
        let mut step = 1.0;
        let mut accepted = false;
        while step > 1.0 / 1024.0 {
            let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, d)| a + step * d).collect();
            if scheme.admissible(&trial) {
                let rt = scheme.residual_f64(&trial, alpha);
                let nt = max_abs(&rt);
                if nt.is_finite() && nt < (1.0 - 1e-4 * step) * norm {
                    x = trial;
                    r = rt;
                    norm = nt;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        history.push(norm);
        if !accepted {
            break;
        }
    }
    Ok(NewtonOutcome { x, iterations, history, converged: norm < tol })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuationConfig {
    pub alpha_target: f64,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// Required sup norm of every residual row.
    pub tol: f64,
    pub max_newton: usize,
    pub max_steps: usize,
}

impl ContinuationConfig {
    pub fn to(alpha_target: f64) -> Self {
        ContinuationConfig {
            alpha_target,
            initial_step: 0.02,
            min_step: 1e-5,
            max_step: 0.1,
            tol: 1e-10,
            max_newton: 50,
            max_steps: 400,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ContinuationResult {
    pub pairs: Vec<SolutionPair>,
    pub reached_target: bool,
    /// Reason for stopping early.
    pub diagnostic: Option<String>,
}

impl ContinuationResult {
    pub fn last(&self) -> &SolutionPair {
        self.pairs.last().expect("the seed is always present")
    }
}

const QUICK: usize = 4;

/// Follows the branch from `seed` (at α = `seed.alpha`) to the target.
pub fn newton_continuation(seed: SolutionPair, cfg: &ContinuationConfig) -> Result<ContinuationResult> {
    if !(cfg.tol > 0.0) || !(cfg.initial_step > 0.0) || !(cfg.min_step > 0.0) {
        return Err(Error::input("continuation tolerances and steps must be positive"));
    }
    if !cfg.alpha_target.is_finite() {
        return Err(Error::input("α target must be finite"));
    }
    let scheme = seed.scheme();
    let dir = (cfg.alpha_target - seed.alpha).signum();
    let mut pairs = vec![seed];
    let mut prev: Option<(f64, Vec<f64>)> = None;
    let mut h = cfg.initial_step;
    let mut quick = 0usize;
    let mut diagnostic = None;
    let mut steps = 0;
    while dir != 0.0 {
        let cur = pairs.last().unwrap();
        let remaining = (cfg.alpha_target - cur.alpha).abs();
        if remaining == 0.0 {
            break;
        }
        if steps >= cfg.max_steps {
            diagnostic = Some(format!("step budget exhausted at α = {}", cur.alpha));
            break;
        }
        steps += 1;
        let dh = h.min(remaining);
        let alpha = if dh == remaining { cfg.alpha_target } else { cur.alpha + dir * dh };
        let guess: Vec<f64> = match &prev {
            Some((a0, x0)) => {
                let w = (alpha - cur.alpha) / (cur.alpha - a0);
                cur.state.iter().zip(x0).map(|(x1, x0)| x1 + w * (x1 - x0)).collect()
            }
            None => cur.state.clone(),
        };
        let guess = if scheme.admissible(&guess) { guess } else { cur.state.clone() };
        let out = newton(&scheme, &guess, alpha, cfg.tol, cfg.max_newton);
        match out {
            Ok(o) if o.converged => {
                let info = StepInfo { newton_iterations: o.iterations, residual_history: o.history, step: dh };
                let pair = SolutionPair::from_state(scheme.clone(), alpha, o.x, info);
                prev = Some((cur.alpha, cur.state.clone()));
                pairs.push(pair);
                if o.iterations <= QUICK {
                    quick += 1;
                    if quick >= 2 {
                        h = (h * 1.5).min(cfg.max_step);
                        quick = 0;
                    }
                } else {
                    quick = 0;
                }
            }
            _ => {
                h *= 0.5;
                quick = 0;
                if h < cfg.min_step {
                    diagnostic = Some(format!(
                        "Newton failed to converge beyond α = {} (step fell below {})",
                        cur.alpha, cfg.min_step
                    ));
                    break;
                }
            }
        }
    }
    let reached_target = pairs.last().unwrap().alpha == cfg.alpha_target;
    Ok(ContinuationResult { pairs, reached_target, diagnostic })
}
