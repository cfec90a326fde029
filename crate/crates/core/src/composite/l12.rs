//! l1 + l1,2 intersection.
//!
//! For fixed `lambda2` every group is first translated towards the origin
//! (`max(c - lambda2, 0)` elementwise) and then radially shrunk by `lambda1`.
//! `lambda1(lambda2)` is pinned by the l1,2 constraint holding with equality;
//! the remaining l1 excess `f(lambda2)` is decreasing with a unique root.

use super::{
    project_with, rescaled, BallSpec, Bisection, BisectionEnd, DualPair, ProjectionResult, Region,
};
use super::{GroupNorm, ToleranceConfig};
use crate::error::{Error, Result};
use crate::grouped::GroupedVector;

/// `f(lambda2)` together with the `lambda1` it was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FValue {
    pub f: f64,
    pub lambda1: f64,
}

/// Per-group l2 and l1 norms of `max(c_i - lambda2, 0)`.
fn shrunk_norms(c: &GroupedVector, lambda2: f64) -> (Vec<f64>, Vec<f64>) {
    let g = c.group_count();
    let mut l2 = Vec::with_capacity(g);
    let mut l1 = Vec::with_capacity(g);
    for grp in c.groups() {
        let (mut sq, mut sum) = (0.0, 0.0);
        for &v in grp {
            let s = v - lambda2;
            if s > 0.0 {
                sq += s * s;
                sum += s;
            }
        }
        l2.push(sq.sqrt());
        l1.push(sum);
    }
    (l2, l1)
}

/// Walks the group norms from largest to smallest, adding one group at a time
/// to the active set, and accepts the first candidate `lambda1` that lies
/// between the next-smaller norm (exclusive) and the last added norm.
fn lambda1_from_norms(norms: &[f64], tau1: f64) -> Option<f64> {
    let mut sorted = norms.to_vec();
    sorted.sort_unstable_by(|a, b| a.total_cmp(b));
    let g = sorted.len();
    let mut sum = 0.0;
    for i in (0..g).rev() {
        sum += sorted[i];
        let lambda1 = (sum - tau1) / (g - i) as f64;
        let valid = if i > 0 {
            sorted[i - 1] < lambda1 && lambda1 <= sorted[i]
        } else {
            0.0 < lambda1 && lambda1 <= sorted[0]
        };
        if valid {
            return Some(lambda1);
        }
    }
    None
}

/// The l1,2 multiplier consistent with `lambda2` on a nonnegative `c`.
///
/// Returns `None` when no positive `lambda1` exists, i.e. the translated
/// point already satisfies the l1,2 constraint and `lambda2` is too large.
pub fn find_lambda1(c: &GroupedVector, lambda2: f64, tau1: f64) -> Option<f64> {
    let (l2, _) = shrunk_norms(c, lambda2);
    lambda1_from_norms(&l2, tau1)
}

fn f_from_norms(l2: &[f64], l1: &[f64], lambda1: f64, tau2: f64) -> f64 {
    let mut total = 0.0;
    for (&r, &s) in l2.iter().zip(l1) {
        if r > lambda1 {
            total += (1.0 - lambda1 / r) * s;
        }
    }
    total - tau2
}

/// `f(lambda2)`: l1 norm of the point parameterized by `(lambda1(lambda2), lambda2)`
/// minus `tau2`. `None` where `lambda1(lambda2)` does not exist.
pub fn eval_f(c: &GroupedVector, lambda2: f64, tau1: f64, tau2: f64) -> Option<FValue> {
    let (l2, l1) = shrunk_norms(c, lambda2);
    let lambda1 = lambda1_from_norms(&l2, tau1)?;
    Some(FValue {
        f: f_from_norms(&l2, &l1, lambda1, tau2),
        lambda1,
    })
}

/// Translate by `lambda2`, then shrink each group's norm by `lambda1`.
pub(crate) fn reconstruct(c: &GroupedVector, duals: DualPair) -> GroupedVector {
    let DualPair { lambda1, lambda2 } = duals;
    let (l2, _) = shrunk_norms(c, lambda2);
    let mut values = Vec::with_capacity(c.len());
    for (grp, &r) in c.groups().zip(&l2) {
        let scale = if r > lambda1 { 1.0 - lambda1 / r } else { 0.0 };
        values.extend(grp.iter().map(|&v| (v - lambda2).max(0.0) * scale));
    }
    GroupedVector::from_parts_unchecked(values, c.offsets().to_vec())
}

/// Projection onto `{x : ||x||_{1,2} <= tau1, ||x||_1 <= tau2}`.
pub fn project_l1_plus_l12(
    c: &GroupedVector,
    spec: &BallSpec,
    tol: &ToleranceConfig,
) -> Result<ProjectionResult> {
    if spec.q != GroupNorm::L12 {
        return Err(Error::InvalidParameter(
            "project_l1_plus_l12 requires q = 2".into(),
        ));
    }
    rescaled(c, spec, tol, |c, spec, tol| {
        project_with(c, spec, tol, |c| bisect(c, spec, tol))
    })
}

fn bisect(c: &GroupedVector, spec: &BallSpec, tol: &ToleranceConfig) -> Result<ProjectionResult> {
    let eval = |lambda2: f64| eval_f(c, lambda2, spec.tau1, spec.tau2);
    let (state, end) = Bisection::run(c.max_abs(), tol, |l| eval(l).map(|v| v.f))?;
    let (lambda2, value) = match end {
        BisectionEnd::Root { lambda2, .. } => (lambda2, eval(lambda2)),
        BisectionEnd::Bracket => {
            let t = state.final_point();
            match eval(t) {
                Some(v) => (t, Some(v)),
                None => (state.left, eval(state.left)),
            }
        }
    };
    let value = value.ok_or_else(|| {
        Error::InconsistentRegion(format!("lambda1 undefined at lambda2 = {lambda2}"))
    })?;
    let duals = DualPair {
        lambda1: value.lambda1,
        lambda2,
    };
    Ok(ProjectionResult {
        x: reconstruct(c, duals),
        duals,
        region: Region::RegionIII,
        iterations: state.iterations,
        residual: value.f.abs(),
        caps: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_group(v: &[f64]) -> GroupedVector {
        GroupedVector::single_group(v.to_vec()).unwrap()
    }

    // Two active constraints on (4, 1): a + b = 2.2, a^2 + b^2 = 4.
    fn analytic_region_iii() -> (f64, f64, f64, f64) {
        let disc = (2.0 * 4.0 - 2.2f64 * 2.2).sqrt();
        let a = (2.2 + disc) / 2.0;
        let b = (2.2 - disc) / 2.0;
        // stationarity: c - x = lambda2 * 1 + lambda1 * x / ||x||
        let lambda1 = ((4.0 - a) - (1.0 - b)) / ((a - b) / 2.0);
        let lambda2 = (1.0 - b) - lambda1 * b / 2.0;
        (a, b, lambda1, lambda2)
    }

    #[test]
    fn find_lambda1_examples() {
        // three singleton groups whose norms are already the shrunken norms
        let c = GroupedVector::new(vec![5.0, 3.0, 1.0], &[1, 1, 1]).unwrap();
        let l1 = find_lambda1(&c, 0.0, 6.0).unwrap();
        assert!((l1 - 1.0).abs() < 1e-12);
        let sum: f64 = [5.0, 3.0, 1.0]
            .iter()
            .map(|r: &f64| (r - l1).max(0.0))
            .sum();
        assert!((sum - 6.0).abs() < 1e-12);

        let c = one_group(&[3.0, 4.0]);
        assert!((find_lambda1(&c, 0.0, 2.0).unwrap() - 3.0).abs() < 1e-12);

        assert_eq!(find_lambda1(&c, 4.0, 2.0), None);
        assert_eq!(find_lambda1(&c, 10.0, 2.0), None);
    }

    #[test]
    fn f_root_at_analytic_lambda2() {
        let (_, _, lambda1, lambda2) = analytic_region_iii();
        assert!((lambda2 - 0.6435).abs() < 1e-3);
        assert!((lambda1 - 1.3755).abs() < 1e-3);
        let c = one_group(&[4.0, 1.0]);
        let v = eval_f(&c, 0.6435, 2.0, 2.2).unwrap();
        assert!(v.f.abs() <= 1e-3, "{v:?}");
        let v = eval_f(&c, lambda2, 2.0, 2.2).unwrap();
        assert!(v.f.abs() <= 1e-12);
        assert!((v.lambda1 - lambda1).abs() <= 1e-12);
    }

    #[test]
    fn f_endpoints_and_monotone_sample() {
        let c = one_group(&[4.0, 1.0]);
        assert!(eval_f(&c, 1e-9, 2.0, 2.2).unwrap().f > 0.0);
        assert!(eval_f(&c, 3.999, 2.0, 2.2).is_none_or(|v| v.f < 0.0));
        let a = eval_f(&c, 0.3, 2.0, 2.2).unwrap().f;
        let b = eval_f(&c, 0.5, 2.0, 2.2).unwrap().f;
        assert!(a > b);
    }

    #[test]
    fn projection_matches_analytic_solution() {
        let (a, b, lambda1, lambda2) = analytic_region_iii();
        let spec = BallSpec::l12(2.0, 2.2).unwrap();
        let c = one_group(&[4.0, 1.0]);
        let r = project_l1_plus_l12(&c, &spec, &ToleranceConfig::scaled(&c, &spec)).unwrap();
        assert_eq!(r.region, Region::RegionIII);
        assert!((r.x.values()[0] - a).abs() < 1e-9);
        assert!((r.x.values()[1] - b).abs() < 1e-9);
        assert!((r.duals.lambda1 - lambda1).abs() < 1e-8);
        assert!((r.duals.lambda2 - lambda2).abs() < 1e-8);

        let neg = one_group(&[-4.0, 1.0]);
        let r = project_l1_plus_l12(&neg, &spec, &ToleranceConfig::scaled(&neg, &spec)).unwrap();
        assert!((r.x.values()[0] + a).abs() < 1e-9);
        assert!((r.x.values()[1] - b).abs() < 1e-9);
    }

    #[test]
    fn inside_returns_input() {
        let spec = BallSpec::l12(10.0, 10.0).unwrap();
        let c = GroupedVector::new(vec![1.0, -2.0, 0.5], &[2, 1]).unwrap();
        let r = project_l1_plus_l12(&c, &spec, &ToleranceConfig::scaled(&c, &spec)).unwrap();
        assert_eq!(r.region, Region::Inside);
        assert_eq!(r.x, c);
        assert_eq!(r.duals, DualPair::default());
    }

    #[test]
    fn rejects_wrong_norm() {
        let spec = BallSpec::l1inf(1.0, 1.0).unwrap();
        let c = one_group(&[1.0]);
        assert!(project_l1_plus_l12(&c, &spec, &ToleranceConfig::scaled(&c, &spec)).is_err());
    }
}
