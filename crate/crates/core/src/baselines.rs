//! Alternating-projection baselines for the intersection problem.
//!
//! Both methods only ever call the single-ball projections, so they double as
//! independent witnesses for the bisection solvers.

use serde::Serialize;

use crate::composite::{BallSpec, GroupNorm};
use crate::error::{Error, Result};
use crate::grouped::GroupedVector;
use crate::single_ball;

/// Which ball Dykstra's sweep visits first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SweepOrder {
    L1First,
    L1qFirst,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineResult {
    pub x: GroupedVector,
    pub iterations: usize,
    pub converged: bool,
    /// Euclidean distance between the last two iterates.
    pub final_change: f64,
    /// Set for Dykstra runs only.
    pub order: Option<SweepOrder>,
}

pub const DYKSTRA_MAX_ITERS: usize = 1_000_000;
pub const ADMM_MAX_ITERS: usize = 100_000;
pub const ADMM_DEFAULT_RHO: f64 = 1.0;

pub(crate) fn project_mixed(v: &GroupedVector, spec: &BallSpec) -> Result<GroupedVector> {
    Ok(match spec.q {
        GroupNorm::L12 => single_ball::project_l12(v, spec.tau1, 0.0)?.x,
        GroupNorm::L1Inf => single_ball::project_l1inf(v, spec.tau1, 0.0)?.ball.x,
    })
}

fn project_l1(v: &GroupedVector, spec: &BallSpec) -> Result<GroupedVector> {
    Ok(single_ball::project_l1(v, spec.tau2, 0.0)?.x)
}

fn check_common(c: &GroupedVector, spec: &BallSpec, tol: f64, max_iters: usize) -> Result<()> {
    BallSpec::new(spec.q, spec.tau1, spec.tau2)?;
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tol} must be >= 0"
        )));
    }
    if max_iters == 0 {
        return Err(Error::InvalidParameter(
            "max_iters must be at least 1".into(),
        ));
    }
    debug_assert!(!c.is_empty());
    Ok(())
}

fn add(a: &GroupedVector, b: &GroupedVector) -> Vec<f64> {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| x + y)
        .collect()
}

fn sub(a: &[f64], b: &GroupedVector) -> Vec<f64> {
    a.iter().zip(b.values()).map(|(x, y)| x - y).collect()
}

/// Dykstra's alternating projections with one correction vector per ball.
///
/// One iteration is a full sweep over both balls. Stops once a sweep moves the
/// iterate and both correction vectors by at most `tol`; hitting `max_iters` is reported
/// through `converged = false` with the last iterate.
pub fn dykstra_project(
    c: &GroupedVector,
    spec: &BallSpec,
    order: SweepOrder,
    tol: f64,
    max_iters: usize,
) -> Result<BaselineResult> {
    check_common(c, spec, tol, max_iters)?;
    let first = |v: &GroupedVector| match order {
        SweepOrder::L1First => project_l1(v, spec),
        SweepOrder::L1qFirst => project_mixed(v, spec),
    };
    let second = |v: &GroupedVector| match order {
        SweepOrder::L1First => project_mixed(v, spec),
        SweepOrder::L1qFirst => project_l1(v, spec),
    };

    let mut x = c.clone();
    let mut p = c.zeros_like();
    let mut q = c.zeros_like();
    let mut change = f64::INFINITY;
    for it in 1..=max_iters {
        let xp = add(&x, &p);
        let y = first(&x.with_values(xp.clone())?)?;
        let p_next = p.with_values(sub(&xp, &y))?;

        let yq = add(&y, &q);
        let next = second(&y.with_values(yq.clone())?)?;
        let q_next = q.with_values(sub(&yq, &next))?;

        // the iterate can sit still while the corrections keep moving, so both
        // corrections must settle as well
        let drift = p_next.distance(&p).max(q_next.distance(&q));
        change = next.distance(&x);
        x = next;
        p = p_next;
        q = q_next;
        if change <= tol && drift <= tol {
            return Ok(BaselineResult {
                x,
                iterations: it,
                converged: true,
                final_change: change,
                order: Some(order),
            });
        }
    }
    Ok(BaselineResult {
        x,
        iterations: max_iters,
        converged: false,
        final_change: change,
        order: Some(order),
    })
}

/// Consensus ADMM for `min 1/2 ||x - c||^2` over the l1,q ball (variable `x`)
/// and the l1 ball (copy `z`), scaled dual `u`:
///
/// ```text
/// x <- P_{1,q}((c + rho (z - u)) / (1 + rho))
/// z <- P_1(x + u)
/// u <- u + x - z
/// ```
///
/// Stops when both `||x - z||` and `rho ||z - z_prev||` are at most `tol`.
/// Returns `z`, which lies in the l1 ball exactly.
pub fn admm_project(
    c: &GroupedVector,
    spec: &BallSpec,
    rho: f64,
    tol: f64,
    max_iters: usize,
) -> Result<BaselineResult> {
    check_common(c, spec, tol, max_iters)?;
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "rho {rho} must be positive"
        )));
    }
    let n = c.len();
    let mut z = c.clone();
    let mut u = vec![0.0; n];
    let mut x_values = vec![0.0; n];
    let mut change = f64::INFINITY;
    for it in 1..=max_iters {
        for i in 0..n {
            x_values[i] = (c.values()[i] + rho * (z.values()[i] - u[i])) / (1.0 + rho);
        }
        let x = project_mixed(&c.with_values(x_values.clone())?, spec)?;
        let xu: Vec<f64> = x.values().iter().zip(&u).map(|(a, b)| a + b).collect();
        let z_next = project_l1(&c.with_values(xu)?, spec)?;

        let mut primal = 0.0;
        for ((ui, a), b) in u.iter_mut().zip(x.values()).zip(z_next.values()) {
            let r = a - b;
            *ui += r;
            primal += r * r;
        }
        let primal = primal.sqrt();
        change = z_next.distance(&z);
        let dual = rho * change;
        z = z_next;
        if primal <= tol && dual <= tol {
            return Ok(BaselineResult {
                x: z,
                iterations: it,
                converged: true,
                final_change: change,
                order: None,
            });
        }
    }
    Ok(BaselineResult {
        x: z,
        iterations: max_iters,
        converged: false,
        final_change: change,
        order: None,
    })
}
