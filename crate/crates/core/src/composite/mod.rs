//! Projection onto the intersection of an l1 ball and an l1,q ball (q = 2 or inf).
//!
//! Both variants reflect the input into the nonnegative orthant, decide which
//! constraints are active, and in the doubly-active case bisect on the l1
//! multiplier `lambda2` until an auxiliary scalar function changes sign. The
//! l1,q multiplier `lambda1` is a function of `lambda2` evaluated inside each
//! bisection step.

mod l12;
mod l1inf;

pub use l12::{eval_f, find_lambda1, project_l1_plus_l12, FValue};
pub use l1inf::{eval_h, project_l1_plus_l1inf, HValue};

pub(crate) use l12::reconstruct as reconstruct_l12;
pub(crate) use l1inf::reconstruct as reconstruct_l1inf;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grouped::{rescale_factor, scale_radius, GroupedVector};
use crate::single_ball::{self, check_radius};

/// Which mixed norm bounds the groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupNorm {
    /// l1,2: sum of group Euclidean norms.
    L12,
    /// l1,inf: sum of group maxima.
    L1Inf,
}

impl GroupNorm {
    pub fn norm_of(self, v: &GroupedVector) -> f64 {
        match self {
            GroupNorm::L12 => v.l12_norm(),
            GroupNorm::L1Inf => v.l1inf_norm(),
        }
    }
}

impl fmt::Display for GroupNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupNorm::L12 => "2",
            GroupNorm::L1Inf => "inf",
        })
    }
}

impl std::str::FromStr for GroupNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "2" => Ok(GroupNorm::L12),
            "inf" | "infinity" => Ok(GroupNorm::L1Inf),
            other => Err(Error::InvalidParameter(format!(
                "q must be 2 or inf, got {other:?}"
            ))),
        }
    }
}

/// The constraint set `{x : ||x||_{1,q} <= tau1, ||x||_1 <= tau2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallSpec {
    pub q: GroupNorm,
    /// Radius of the l1,q ball.
    pub tau1: f64,
    /// Radius of the l1 ball.
    pub tau2: f64,
}

impl BallSpec {
    /// Radii must be finite and nonnegative; a zero radius collapses the set
    /// to the origin.
    pub fn new(q: GroupNorm, tau1: f64, tau2: f64) -> Result<Self> {
        check_radius(tau1)?;
        check_radius(tau2)?;
        Ok(Self { q, tau1, tau2 })
    }

    pub fn l12(tau1: f64, tau2: f64) -> Result<Self> {
        Self::new(GroupNorm::L12, tau1, tau2)
    }

    pub fn l1inf(tau1: f64, tau2: f64) -> Result<Self> {
        Self::new(GroupNorm::L1Inf, tau1, tau2)
    }

    /// `(l1,q violation, l1 violation)`, each clipped at zero.
    pub fn violation(&self, x: &GroupedVector) -> (f64, f64) {
        (
            (self.q.norm_of(x) - self.tau1).max(0.0),
            (x.l1_norm() - self.tau2).max(0.0),
        )
    }

    fn validate(&self) -> Result<()> {
        check_radius(self.tau1)?;
        check_radius(self.tau2)
    }
}

/// Which constraints are active at the projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Region {
    /// Input already feasible.
    Inside,
    /// Only the l1 constraint is active.
    RegionI,
    /// Only the l1,q constraint is active.
    RegionII,
    /// Both constraints are active.
    RegionIII,
    /// A zero radius; the answer is the origin.
    Origin,
}

impl Region {
    pub fn label(self) -> &'static str {
        match self {
            Region::Inside => "INSIDE",
            Region::RegionI => "REGION_I",
            Region::RegionII => "REGION_II",
            Region::RegionIII => "REGION_III",
            Region::Origin => "ORIGIN",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Multipliers of the l1,q constraint (`lambda1`) and the l1 constraint (`lambda2`).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DualPair {
    pub lambda1: f64,
    pub lambda2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult {
    pub x: GroupedVector,
    pub duals: DualPair,
    pub region: Region,
    /// Bisection steps taken; zero outside region III.
    pub iterations: usize,
    /// `|f(lambda2)|` or `|h(lambda2)|` at termination; zero outside region III.
    pub residual: f64,
    /// Per-group caps, only for q = inf.
    pub caps: Option<Vec<f64>>,
}

/// Stopping rules for the outer bisection.
///
/// Bisection stops as soon as `|f(lambda2)| <= eps_residual` or the bracket
/// is no wider than `eps_interval`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub eps_interval: f64,
    pub eps_residual: f64,
    pub max_bisection_iters: usize,
}

impl ToleranceConfig {
    pub const DEFAULT_MAX_ITERS: usize = 200;

    /// Tolerances scaled to the instance: `1e-10 * max(1, max|c|)` on the
    /// bracket and `1e-9 * max(1, tau2)` on the residual.
    pub fn scaled(c: &GroupedVector, spec: &BallSpec) -> Self {
        Self {
            eps_interval: 1e-10 * c.max_abs().max(1.0),
            eps_residual: 1e-9 * spec.tau2.max(1.0),
            max_bisection_iters: Self::DEFAULT_MAX_ITERS,
        }
    }

    pub fn fixed(eps_interval: f64, eps_residual: f64) -> Self {
        Self {
            eps_interval,
            eps_residual,
            max_bisection_iters: Self::DEFAULT_MAX_ITERS,
        }
    }

    /// Upper bound on bisection steps for a bracket of width `range`.
    pub fn iteration_bound(&self, range: f64) -> usize {
        if range <= self.eps_interval {
            0
        } else {
            (range / self.eps_interval).log2().ceil() as usize
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.eps_interval) || !ok(self.eps_residual) || self.max_bisection_iters == 0 {
            return Err(Error::InvalidParameter(format!(
                "tolerances must be positive and finite: {self:?}"
            )));
        }
        Ok(())
    }
}

/// Projects `c` onto the set described by `spec`, dispatching on `spec.q`.
/// Uses [`ToleranceConfig::scaled`] when `tol` is `None`.
pub fn project(
    c: &GroupedVector,
    spec: &BallSpec,
    tol: Option<&ToleranceConfig>,
) -> Result<ProjectionResult> {
    let tol = tol
        .copied()
        .unwrap_or_else(|| ToleranceConfig::scaled(c, spec));
    match spec.q {
        GroupNorm::L12 => project_l1_plus_l12(c, spec, &tol),
        GroupNorm::L1Inf => project_l1_plus_l1inf(c, spec, &tol),
    }
}

// A norm counts as within its radius up to a relative rounding slack.
pub(crate) fn within(norm: f64, radius: f64) -> bool {
    norm <= radius * (1.0 + 4.0 * f64::EPSILON)
}

/// Decides which constraints are active for a nonnegative `c`.
///
/// Tested in order: both norms within radius (INSIDE); the l1,q projection
/// lies in the l1 ball (REGION_II); the l1 projection lies in the l1,q ball
/// (REGION_I); otherwise REGION_III. For regions I and II the single-ball
/// projection that settled the test is returned (still in reflected
/// coordinates) so callers need not recompute it.
pub fn classify_region(
    c: &GroupedVector,
    spec: &BallSpec,
) -> Result<(Region, Option<ProjectionResult>)> {
    spec.validate()?;
    if spec.tau1 == 0.0 || spec.tau2 == 0.0 {
        return Ok((Region::Origin, None));
    }
    let norms = c.norms();
    let mixed = match spec.q {
        GroupNorm::L12 => norms.l12,
        GroupNorm::L1Inf => norms.linf_group_sum,
    };
    if within(mixed, spec.tau1) && within(norms.l1, spec.tau2) {
        return Ok((Region::Inside, None));
    }

    let (x_mixed, lambda1, caps) = match spec.q {
        GroupNorm::L12 => {
            let r = single_ball::project_l12(c, spec.tau1, 0.0)?;
            (r.x, r.threshold, None)
        }
        GroupNorm::L1Inf => {
            let r = single_ball::project_l1inf(c, spec.tau1, 0.0)?;
            (r.ball.x, r.lambda1, Some(r.caps))
        }
    };
    if within(x_mixed.l1_norm(), spec.tau2) {
        return Ok((
            Region::RegionII,
            Some(ProjectionResult {
                x: x_mixed,
                duals: DualPair {
                    lambda1,
                    lambda2: 0.0,
                },
                region: Region::RegionII,
                iterations: 0,
                residual: 0.0,
                caps,
            }),
        ));
    }

    let r = single_ball::project_l1(c, spec.tau2, 0.0)?;
    if within(spec.q.norm_of(&r.x), spec.tau1) {
        let caps = match spec.q {
            GroupNorm::L12 => None,
            GroupNorm::L1Inf => Some(single_ball::group_maxima(&r.x)),
        };
        return Ok((
            Region::RegionI,
            Some(ProjectionResult {
                x: r.x,
                duals: DualPair {
                    lambda1: 0.0,
                    lambda2: r.threshold,
                },
                region: Region::RegionI,
                iterations: 0,
                residual: 0.0,
                caps,
            }),
        ));
    }
    Ok((Region::RegionIII, None))
}

/// Runs `run` on an input brought into a magnitude range where squares and
/// sums cannot overflow, then maps the result back. Inputs already in range
/// go straight through.
pub(crate) fn rescaled(
    c: &GroupedVector,
    spec: &BallSpec,
    tol: &ToleranceConfig,
    run: impl FnOnce(&GroupedVector, &BallSpec, &ToleranceConfig) -> Result<ProjectionResult>,
) -> Result<ProjectionResult> {
    let Some(s) = rescale_factor(c.max_abs()) else {
        return run(c, spec, tol);
    };
    spec.validate()?;
    tol.validate()?;
    let scaled_spec = BallSpec {
        q: spec.q,
        tau1: scale_radius(spec.tau1, s),
        tau2: scale_radius(spec.tau2, s),
    };
    let scaled_tol = ToleranceConfig {
        eps_interval: scale_radius(tol.eps_interval, s),
        eps_residual: scale_radius(tol.eps_residual, s),
        max_bisection_iters: tol.max_bisection_iters,
    };
    let mut r = run(&c.map_values(|v| v * s), &scaled_spec, &scaled_tol)?;
    let inv = 1.0 / s;
    r.x = if r.region == Region::Inside {
        c.clone()
    } else {
        r.x.map_values(|v| v * inv)
    };
    r.duals.lambda1 *= inv;
    r.duals.lambda2 *= inv;
    r.residual *= inv;
    if let Some(caps) = r.caps.as_mut() {
        caps.iter_mut().for_each(|d| *d *= inv);
    }
    Ok(r)
}

/// Runs the sign-reflected pipeline shared by both variants: validates,
/// handles the trivial regions, and delegates region III to `solve`, which
/// receives the nonnegative input.
pub(crate) fn project_with(
    c: &GroupedVector,
    spec: &BallSpec,
    tol: &ToleranceConfig,
    solve: impl FnOnce(&GroupedVector) -> Result<ProjectionResult>,
) -> Result<ProjectionResult> {
    spec.validate()?;
    tol.validate()?;
    let (reflected, mask) = c.reflect_to_positive();
    let (region, shortcut) = classify_region(&reflected, spec)?;
    let mut result = match region {
        Region::Origin => ProjectionResult {
            x: c.zeros_like(),
            duals: DualPair::default(),
            region,
            iterations: 0,
            residual: 0.0,
            caps: (spec.q == GroupNorm::L1Inf).then(|| vec![0.0; c.group_count()]),
        },
        Region::Inside => ProjectionResult {
            x: reflected,
            duals: DualPair::default(),
            region,
            iterations: 0,
            residual: 0.0,
            caps: (spec.q == GroupNorm::L1Inf).then(|| single_ball::group_maxima(c)),
        },
        Region::RegionI | Region::RegionII => {
            shortcut.expect("single-ball regions carry their projection")
        }
        Region::RegionIII => solve(&reflected)?,
    };
    result.x = mask.restore(&result.x)?;
    Ok(result)
}

/// State of a bisection on a decreasing function over `[left, right]`.
///
/// `value(lambda2)` returns `None` where the function is undefined; such
/// points are treated as lying right of the root.
pub(crate) struct Bisection {
    pub left: f64,
    pub right: f64,
    pub value_left: Option<f64>,
    pub value_right: Option<f64>,
    pub iterations: usize,
}

pub(crate) enum BisectionEnd {
    /// The residual test fired at this point.
    Root { lambda2: f64 },
    /// The bracket shrank below `eps_interval`.
    Bracket,
}

impl Bisection {
    pub fn run(
        right: f64,
        tol: &ToleranceConfig,
        mut value: impl FnMut(f64) -> Option<f64>,
    ) -> Result<(Self, BisectionEnd)> {
        let mut b = Bisection {
            left: 0.0,
            right,
            value_left: None,
            value_right: None,
            iterations: 0,
        };
        loop {
            if b.right - b.left <= tol.eps_interval {
                return Ok((b, BisectionEnd::Bracket));
            }
            if b.iterations >= tol.max_bisection_iters {
                return Err(Error::NonConvergence(b.iterations));
            }
            b.iterations += 1;
            let mid = 0.5 * (b.left + b.right);
            if mid <= b.left || mid >= b.right {
                // bracket is at floating-point resolution
                return Ok((b, BisectionEnd::Bracket));
            }
            match value(mid) {
                Some(v) if v.abs() <= tol.eps_residual => {
                    return Ok((b, BisectionEnd::Root { lambda2: mid }))
                }
                Some(v) if v > 0.0 => {
                    b.left = mid;
                    b.value_left = Some(v);
                }
                Some(v) => {
                    b.right = mid;
                    b.value_right = Some(v);
                }
                None => {
                    b.right = mid;
                    b.value_right = None;
                }
            }
        }
    }

    /// Point used for reconstruction after a bracket stop: the secant
    /// estimate when both ends carry values, otherwise the left end.
    pub fn final_point(&self) -> f64 {
        match (self.value_left, self.value_right) {
            (Some(fl), Some(fr)) if fl > fr => {
                let t = self.left + (self.right - self.left) * fl / (fl - fr);
                t.clamp(self.left, self.right)
            }
            _ => self.left,
        }
    }
}
