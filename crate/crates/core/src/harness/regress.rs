//! Driver for the synthetic regression experiment.

use serde::Serialize;

use crate::composite::GroupNorm;
use crate::error::Result;
use crate::regression::{
    generate_synthetic_regression, nesterov_solve, pg_solve, support_mass, DatasetSize,
    RegressionProblem, SolveTrace,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RegressSolver {
    Pg,
    Nesterov,
}

impl RegressSolver {
    fn run(self, p: &RegressionProblem, tol: f64, max_iters: usize) -> Result<SolveTrace> {
        match self {
            RegressSolver::Pg => pg_solve(p, tol, max_iters),
            RegressSolver::Nesterov => nesterov_solve(p, tol, max_iters),
        }
    }

    fn other(self) -> Self {
        match self {
            RegressSolver::Pg => RegressSolver::Nesterov,
            RegressSolver::Nesterov => RegressSolver::Pg,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressConfig {
    pub size: DatasetSize,
    pub solver: RegressSolver,
    pub q: GroupNorm,
    pub seed: u64,
    pub tol: f64,
    pub max_iters: usize,
    /// Also run the other solver on the same instance.
    pub compare: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverSummary {
    pub solver: RegressSolver,
    pub iterations: usize,
    pub converged: bool,
    pub final_objective: f64,
    pub max_violation: f64,
}

impl SolverSummary {
    fn of(solver: RegressSolver, t: &SolveTrace) -> Self {
        Self {
            solver,
            iterations: t.iterations,
            converged: t.converged,
            final_objective: t.final_objective(),
            max_violation: t.max_violation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressReport {
    pub size: DatasetSize,
    pub q: String,
    pub seed: u64,
    pub tol: f64,
    pub max_iters: usize,
    pub tau1: f64,
    pub tau2: f64,
    pub step_size: f64,
    pub initial_objective: f64,
    #[serde(flatten)]
    pub run: SolverSummary,
    /// Constraint excess of the final iterate: `(||w||_{1,q} - tau1, ||w||_1 - tau2)`.
    pub final_excess: (f64, f64),
    pub support_mass: f64,
    pub comparison: Option<SolverSummary>,
    /// `|f_other - f| / max(1, |f|)` when a comparison was run.
    pub relative_gap: Option<f64>,
}

pub fn run_regress(cfg: &RegressConfig) -> Result<RegressReport> {
    let (problem, truth) = generate_synthetic_regression(cfg.size, cfg.q, cfg.seed)?;
    let trace = cfg.solver.run(&problem, cfg.tol, cfg.max_iters)?;
    let spec = *problem.spec();
    let w = &trace.final_w;
    let run = SolverSummary::of(cfg.solver, &trace);
    let comparison = if cfg.compare {
        let other = cfg.solver.other();
        Some(SolverSummary::of(
            other,
            &other.run(&problem, cfg.tol, cfg.max_iters)?,
        ))
    } else {
        None
    };
    let relative_gap = comparison.as_ref().map(|o| {
        (o.final_objective - run.final_objective).abs() / run.final_objective.abs().max(1.0)
    });
    Ok(RegressReport {
        size: cfg.size,
        q: cfg.q.to_string(),
        seed: cfg.seed,
        tol: cfg.tol,
        max_iters: cfg.max_iters,
        tau1: spec.tau1,
        tau2: spec.tau2,
        step_size: trace.step_size,
        initial_objective: trace.objective[0],
        final_excess: (cfg.q.norm_of(w) - spec.tau1, w.l1_norm() - spec.tau2),
        support_mass: support_mass(w, &truth),
        run,
        comparison,
        relative_gap,
    })
}
