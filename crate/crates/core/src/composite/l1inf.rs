//! l1 + l1,inf intersection.
//!
//! With per-group caps `d_i` the optimizer reads
//! `x_ij = min(max(c_ij - lambda2, 0), d_i)`. For a fixed `lambda2` the caps and
//! `lambda1` come from the single-ball l1,inf projection of the translated
//! point; `h(lambda2)` is the resulting l1 excess, decreasing in `lambda2`.

use super::{
    project_with, rescaled, within, BallSpec, Bisection, BisectionEnd, DualPair, GroupNorm,
};
use super::{ProjectionResult, Region, ToleranceConfig};
use crate::error::{Error, Result};
use crate::grouped::GroupedVector;
use crate::single_ball::{group_maxima, l1inf_caps};

#[derive(Debug, Clone, PartialEq)]
pub struct HValue {
    pub h: f64,
    pub caps: Vec<f64>,
    pub lambda1: f64,
}

fn translate(c: &GroupedVector, lambda2: f64) -> GroupedVector {
    c.map_values(|&v| (v - lambda2).max(0.0))
}

fn caps_for(shrunk: &GroupedVector, tau1: f64) -> (Vec<f64>, f64) {
    if within(shrunk.l1inf_norm(), tau1) {
        (group_maxima(shrunk), 0.0)
    } else {
        l1inf_caps(shrunk, tau1)
    }
}

fn clamp_to_caps(shrunk: &GroupedVector, caps: &[f64]) -> GroupedVector {
    let mut values = Vec::with_capacity(shrunk.len());
    for (grp, &d) in shrunk.groups().zip(caps) {
        values.extend(grp.iter().map(|v| v.min(d)));
    }
    GroupedVector::from_parts_unchecked(values, shrunk.offsets().to_vec())
}

pub(crate) fn reconstruct(c: &GroupedVector, lambda2: f64, caps: &[f64]) -> GroupedVector {
    clamp_to_caps(&translate(c, lambda2), caps)
}

/// `h(lambda2) = sum_ij min(max(c_ij - lambda2, 0), d_i(lambda2)) - tau2` on a
/// nonnegative `c`, along with the caps and `lambda1` at that `lambda2`.
pub fn eval_h(c: &GroupedVector, lambda2: f64, tau1: f64, tau2: f64) -> HValue {
    let shrunk = translate(c, lambda2);
    let (caps, lambda1) = caps_for(&shrunk, tau1);
    let mut total = 0.0;
    for (grp, &d) in shrunk.groups().zip(&caps) {
        total += grp.iter().map(|v| v.min(d)).sum::<f64>();
    }
    HValue {
        h: total - tau2,
        caps,
        lambda1,
    }
}

/// Projection onto `{x : ||x||_{1,inf} <= tau1, ||x||_1 <= tau2}`.
pub fn project_l1_plus_l1inf(
    c: &GroupedVector,
    spec: &BallSpec,
    tol: &ToleranceConfig,
) -> Result<ProjectionResult> {
    if spec.q != GroupNorm::L1Inf {
        return Err(Error::InvalidParameter(
            "project_l1_plus_l1inf requires q = inf".into(),
        ));
    }
    rescaled(c, spec, tol, |c, spec, tol| {
        project_with(c, spec, tol, |c| bisect(c, spec, tol))
    })
}

fn bisect(c: &GroupedVector, spec: &BallSpec, tol: &ToleranceConfig) -> Result<ProjectionResult> {
    // the inner projection is rerun from scratch at every step
    let (state, end) = Bisection::run(c.max_abs(), tol, |l| {
        Some(eval_h(c, l, spec.tau1, spec.tau2).h)
    })?;
    let lambda2 = match end {
        BisectionEnd::Root { lambda2, .. } => lambda2,
        BisectionEnd::Bracket => state.final_point(),
    };
    let shrunk = translate(c, lambda2);
    let (caps, lambda1) = caps_for(&shrunk, spec.tau1);
    let x = clamp_to_caps(&shrunk, &caps);
    let residual = (x.l1_norm() - spec.tau2).abs();
    Ok(ProjectionResult {
        x,
        duals: DualPair { lambda1, lambda2 },
        region: Region::RegionIII,
        iterations: state.iterations,
        residual,
        caps: Some(caps),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_group(v: &[f64]) -> GroupedVector {
        GroupedVector::single_group(v.to_vec()).unwrap()
    }

    #[test]
    fn h_examples() {
        let c = one_group(&[4.0, 1.0]);
        let v = eval_h(&c, 0.0, 2.0, 2.5);
        assert!((v.h - 0.5).abs() < 1e-12);
        assert!((v.caps[0] - 2.0).abs() < 1e-12);
        assert_eq!(eval_h(&c, 4.0, 2.0, 2.5).h, -2.5);
        assert_eq!(eval_h(&c, 7.0, 2.0, 2.5).h, -2.5);
        assert!(eval_h(&c, 0.2, 2.0, 2.5).h >= eval_h(&c, 0.4, 2.0, 2.5).h);
    }

    #[test]
    fn projection_matches_kkt_solution() {
        // min (x1-4)^2 + (x2-1)^2 s.t. x1 <= 2, x1 + x2 <= 2.5 -> (2, 0.5)
        let spec = BallSpec::l1inf(2.0, 2.5).unwrap();
        let c = one_group(&[4.0, 1.0]);
        let r = project_l1_plus_l1inf(&c, &spec, &ToleranceConfig::scaled(&c, &spec)).unwrap();
        assert_eq!(r.region, Region::RegionIII);
        assert!((r.x.values()[0] - 2.0).abs() < 1e-9, "{r:?}");
        assert!((r.x.values()[1] - 0.5).abs() < 1e-9);
        assert!((r.duals.lambda2 - 0.5).abs() < 1e-8);
        assert!((r.caps.as_ref().unwrap()[0] - 2.0).abs() < 1e-9);

        let neg = one_group(&[-4.0, 1.0]);
        let r = project_l1_plus_l1inf(&neg, &spec, &ToleranceConfig::scaled(&neg, &spec)).unwrap();
        assert!((r.x.values()[0] + 2.0).abs() < 1e-9);
        assert!((r.x.values()[1] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn inside_returns_input() {
        let spec = BallSpec::l1inf(10.0, 10.0).unwrap();
        let c = GroupedVector::new(vec![1.0, -2.0, 0.5], &[2, 1]).unwrap();
        let r = project_l1_plus_l1inf(&c, &spec, &ToleranceConfig::scaled(&c, &spec)).unwrap();
        assert_eq!(r.region, Region::Inside);
        assert_eq!(r.x, c);
        assert_eq!(r.caps, Some(vec![2.0, 0.5]));
    }
}
