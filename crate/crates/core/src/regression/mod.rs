//! Least squares under the composite norm constraint, solved by projected
//! gradient and by its accelerated (Nesterov/FISTA) variant.
//!
//! Both solvers take a fixed step `0.95 / L`, where `L` is a power-iteration
//! estimate of the largest eigenvalue of `X^T X`, and call the intersection
//! projection once per iteration.

mod synth;

pub use synth::{generate_synthetic_regression, support_mass, DatasetSize};

use ndarray::{Array1, Array2};

use crate::composite::{project, BallSpec, ToleranceConfig};
use crate::error::{Error, Result};
use crate::grouped::GroupedVector;

const POWER_ITERATIONS: usize = 50;
const STEP_SAFETY: f64 = 0.95;
// Inner projections must be far more accurate than the outer stopping
// tolerance, or the iterates jitter at the projection's accuracy.
const INNER_INTERVAL: f64 = 1e-14;
const INNER_RESIDUAL: f64 = 1e-13;

/// `min 1/2 ||y - X w||^2` s.t. `||w||_{1,q} <= tau1`, `||w||_1 <= tau2`.
#[derive(Debug, Clone)]
pub struct RegressionProblem {
    design: Array2<f64>,
    response: Array1<f64>,
    spec: BallSpec,
    group_sizes: Vec<usize>,
}

impl RegressionProblem {
    pub fn new(
        design: Array2<f64>,
        response: Array1<f64>,
        spec: BallSpec,
        group_sizes: Vec<usize>,
    ) -> Result<Self> {
        let (rows, cols) = design.dim();
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter("design matrix is empty".into()));
        }
        if response.len() != rows {
            return Err(Error::LengthMismatch {
                expected: rows,
                found: response.len(),
            });
        }
        // validates the partition against the column count
        GroupedVector::new(vec![0.0; cols], &group_sizes)?;
        Ok(Self {
            design,
            response,
            spec,
            group_sizes,
        })
    }

    pub fn design(&self) -> &Array2<f64> {
        &self.design
    }

    pub fn response(&self) -> &Array1<f64> {
        &self.response
    }

    pub fn spec(&self) -> &BallSpec {
        &self.spec
    }

    pub fn group_sizes(&self) -> &[usize] {
        &self.group_sizes
    }

    pub fn objective(&self, w: &Array1<f64>) -> f64 {
        let r = self.design.dot(w) - &self.response;
        0.5 * r.dot(&r)
    }

    pub fn gradient(&self, w: &Array1<f64>) -> Array1<f64> {
        let r = self.design.dot(w) - &self.response;
        self.design.t().dot(&r)
    }

    /// Power-iteration estimate of the largest eigenvalue of `X^T X`.
    pub fn lipschitz_estimate(&self) -> f64 {
        let cols = self.design.ncols();
        let mut v = Array1::from_elem(cols, 1.0 / (cols as f64).sqrt());
        let mut estimate = 0.0;
        for _ in 0..POWER_ITERATIONS {
            let av = self.design.t().dot(&self.design.dot(&v));
            estimate = av.dot(&av).sqrt();
            if estimate == 0.0 {
                return 0.0;
            }
            v = av / estimate;
        }
        estimate
    }

    fn project(&self, v: Array1<f64>) -> Result<Array1<f64>> {
        let grouped = GroupedVector::new(v.to_vec(), &self.group_sizes)?;
        let scale = grouped.max_abs().max(1.0);
        let tol = ToleranceConfig::fixed(
            INNER_INTERVAL * scale,
            INNER_RESIDUAL * self.spec.tau2.max(1.0),
        );
        let r = project(&grouped, &self.spec, Some(&tol))?;
        Ok(Array1::from_vec(r.x.into_values()))
    }

    fn violation(&self, w: &Array1<f64>) -> Result<f64> {
        let grouped = GroupedVector::new(w.to_vec(), &self.group_sizes)?;
        let (a, b) = self.spec.violation(&grouped);
        Ok(a.max(b))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveTrace {
    /// Objective at every iterate, starting with `w = 0`.
    pub objective: Vec<f64>,
    pub iterations: usize,
    pub final_w: GroupedVector,
    pub step_size: f64,
    pub converged: bool,
    /// Largest constraint violation seen over all iterates.
    pub max_violation: f64,
}

impl SolveTrace {
    pub fn final_objective(&self) -> f64 {
        *self
            .objective
            .last()
            .expect("trace holds the initial objective")
    }
}

enum Method {
    Gradient,
    Accelerated,
}

/// Projected gradient: `w <- P(w - eta * grad f(w))` until the step is at
/// most `tol` (never, when `tol == 0`) or `max_iters` is reached.
pub fn pg_solve(p: &RegressionProblem, tol: f64, max_iters: usize) -> Result<SolveTrace> {
    solve(p, tol, max_iters, Method::Gradient)
}

/// Accelerated projected gradient with FISTA momentum and the same step.
pub fn nesterov_solve(p: &RegressionProblem, tol: f64, max_iters: usize) -> Result<SolveTrace> {
    solve(p, tol, max_iters, Method::Accelerated)
}

fn solve(p: &RegressionProblem, tol: f64, max_iters: usize, method: Method) -> Result<SolveTrace> {
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tol} must be >= 0"
        )));
    }
    let cols = p.design.ncols();
    let mut w = Array1::<f64>::zeros(cols);
    let mut objective = vec![p.objective(&w)];
    let lipschitz = p.lipschitz_estimate();
    let finish = |w: Array1<f64>, objective, iterations, step_size, converged, max_violation| {
        Ok(SolveTrace {
            objective,
            iterations,
            final_w: GroupedVector::new(w.to_vec(), &p.group_sizes)?,
            step_size,
            converged,
            max_violation,
        })
    };
    if lipschitz == 0.0 {
        // X = 0: every feasible w is optimal
        return finish(w, objective, 0, 0.0, true, 0.0);
    }
    let step = STEP_SAFETY / lipschitz;

    let mut w_prev = w.clone();
    let mut t = 1.0f64;
    let mut max_violation = 0.0f64;
    for it in 1..=max_iters {
        let anchor = match method {
            Method::Gradient => w.clone(),
            Method::Accelerated => {
                let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
                let beta = (t - 1.0) / t_next;
                t = t_next;
                &w + &((&w - &w_prev) * beta)
            }
        };
        let grad = p.gradient(&anchor);
        let w_next = p.project(anchor - grad * step)?;
        let moved = {
            let d = &w_next - &w;
            d.dot(&d).sqrt()
        };
        w_prev = std::mem::replace(&mut w, w_next);
        objective.push(p.objective(&w));
        max_violation = max_violation.max(p.violation(&w)?);
        if tol > 0.0 && moved <= tol {
            return finish(w, objective, it, step, true, max_violation);
        }
    }
    finish(w, objective, max_iters, step, false, max_violation)
}
