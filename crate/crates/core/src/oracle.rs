//! Slow reference solvers used to validate the fast projections.
//!
//! Two oracles that share no code path with each other:
//!
//! * [`oracle_projected_descent`] runs Dykstra's scheme to a tight tolerance
//!   on top of its own bisection-based single-ball projections, so it touches
//!   neither the sort-based projections nor the dual machinery.
//! * [`oracle_dual_grid`] scans `lambda2` on a uniform grid, evaluating the
//!   auxiliary function with the library's dual formulas, and keeps the grid
//!   point with the smallest residual.

use crate::composite::{
    classify_region, eval_f, eval_h, BallSpec, DualPair, GroupNorm, ProjectionResult, Region,
};
use crate::error::{Error, Result};
use crate::grouped::{l2, GroupedVector};

/// Dykstra stopping tolerance, relative to `max(1, max|c|)`.
pub const DESCENT_TOL: f64 = 1e-12;

const MAX_BISECTION: usize = 2000;

/// Bisects a decreasing function on `[lo, hi]` down to floating-point
/// resolution; returns the final bracket.
fn bisect_decreasing(mut lo: f64, mut hi: f64, target: f64, g: impl Fn(f64) -> f64) -> (f64, f64) {
    for _ in 0..MAX_BISECTION {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Threshold of the l1-ball projection of magnitudes `a` (sum above `tau`).
fn soft_threshold_level(a: &[f64], tau: f64) -> f64 {
    let mass = |t: f64| a.iter().map(|v| (v - t).max(0.0)).sum::<f64>();
    let top = a.iter().fold(0.0f64, |m, v| m.max(*v));
    let (lo, _) = bisect_decreasing(0.0, top, tau, mass);
    // exact solve on the active set found by the bisection
    let (count, sum) = a
        .iter()
        .filter(|v| **v > lo)
        .fold((0usize, 0.0), |(k, s), v| (k + 1, s + v));
    if count == 0 {
        lo
    } else {
        ((sum - tau) / count as f64).max(0.0)
    }
}

fn ref_project_l1(v: &[f64], tau: f64) -> Vec<f64> {
    let a: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    if a.iter().sum::<f64>() <= tau {
        return v.to_vec();
    }
    if tau == 0.0 {
        return vec![0.0; v.len()];
    }
    let t = soft_threshold_level(&a, tau);
    v.iter()
        .map(|x| x.signum() * (x.abs() - t).max(0.0))
        .collect()
}

fn ref_project_l12(v: &[f64], offsets: &[usize], tau: f64) -> Vec<f64> {
    let norms: Vec<f64> = offsets.windows(2).map(|w| l2(&v[w[0]..w[1]])).collect();
    if norms.iter().sum::<f64>() <= tau {
        return v.to_vec();
    }
    if tau == 0.0 {
        return vec![0.0; v.len()];
    }
    let t = soft_threshold_level(&norms, tau);
    let mut out = Vec::with_capacity(v.len());
    for (w, r) in offsets.windows(2).zip(norms) {
        let s = if r > t { 1.0 - t / r } else { 0.0 };
        out.extend(v[w[0]..w[1]].iter().map(|x| x * s));
    }
    out
}

/// Cap `d` with `sum_j max(a_j - d, 0) = lambda` for one group, `a` sorted
/// descending.
fn group_cap(sorted_desc: &[f64], lambda: f64) -> f64 {
    let mut s = 0.0;
    for (k, &a) in sorted_desc.iter().enumerate() {
        s += a;
        let next = sorted_desc.get(k + 1).copied().unwrap_or(0.0);
        let d = (s - lambda) / (k + 1) as f64;
        if d >= next {
            return d.max(0.0);
        }
    }
    0.0
}

fn ref_project_l1inf(v: &[f64], offsets: &[usize], tau: f64) -> Vec<f64> {
    let groups: Vec<Vec<f64>> = offsets
        .windows(2)
        .map(|w| {
            let mut a: Vec<f64> = v[w[0]..w[1]].iter().map(|x| x.abs()).collect();
            a.sort_by(|x, y| y.total_cmp(x));
            a
        })
        .collect();
    let norm: f64 = groups.iter().map(|a| a[0]).sum();
    if norm <= tau {
        return v.to_vec();
    }
    let caps = if tau == 0.0 {
        vec![0.0; groups.len()]
    } else {
        let total = |lambda: f64| groups.iter().map(|a| group_cap(a, lambda)).sum::<f64>();
        let top = groups
            .iter()
            .map(|a| a.iter().sum::<f64>())
            .fold(0.0, f64::max);
        let (lo, hi) = bisect_decreasing(0.0, top, tau, total);
        let lambda = 0.5 * (lo + hi);
        groups.iter().map(|a| group_cap(a, lambda)).collect()
    };
    let mut out = Vec::with_capacity(v.len());
    for (w, d) in offsets.windows(2).zip(caps) {
        out.extend(v[w[0]..w[1]].iter().map(|x| x.signum() * x.abs().min(d)));
    }
    out
}

/// High-precision projection by Dykstra's alternating projections with the
/// oracle's own single-ball routines; fails if `iters` sweeps do not bring
/// consecutive iterates and correction vectors within `DESCENT_TOL * max(1, max|c|)`.
pub fn oracle_projected_descent(
    c: &GroupedVector,
    spec: &BallSpec,
    iters: usize,
) -> Result<GroupedVector> {
    let spec = BallSpec::new(spec.q, spec.tau1, spec.tau2)?;
    let offsets = c.offsets();
    let mixed = |v: &[f64]| match spec.q {
        GroupNorm::L12 => ref_project_l12(v, offsets, spec.tau1),
        GroupNorm::L1Inf => ref_project_l1inf(v, offsets, spec.tau1),
    };
    let tol = DESCENT_TOL * c.max_abs().max(1.0);
    let n = c.len();
    let mut x = c.values().to_vec();
    let mut p = vec![0.0; n];
    let mut q = vec![0.0; n];
    for _ in 0..iters {
        let xp: Vec<f64> = (0..n).map(|i| x[i] + p[i]).collect();
        let y = ref_project_l1(&xp, spec.tau2);
        let yq: Vec<f64> = (0..n).map(|i| y[i] + q[i]).collect();
        let next = mixed(&yq);
        let (mut change, mut dp, mut dq) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let p_new = xp[i] - y[i];
            let q_new = yq[i] - next[i];
            dp += (p_new - p[i]) * (p_new - p[i]);
            dq += (q_new - q[i]) * (q_new - q[i]);
            p[i] = p_new;
            q[i] = q_new;
            change += (next[i] - x[i]) * (next[i] - x[i]);
        }
        x = next;
        if change.sqrt().max(dp.sqrt()).max(dq.sqrt()) <= tol {
            return c.with_values(x);
        }
    }
    Err(Error::OracleFailure(format!(
        "Dykstra oracle did not converge in {iters} sweeps"
    )))
}

/// Grid search on `lambda2` for a region III instance.
///
/// Scans `grid_resolution + 1` points on `[0, max c]`, keeps the one with the
/// smallest `|f|` (q = 2) or `|h|` (q = inf), rescans its neighbourhood with a
/// ten times finer step, and rebuilds `x` from the chosen duals. Inputs of
/// any sign are reflected first.
pub fn oracle_dual_grid(
    c: &GroupedVector,
    spec: &BallSpec,
    grid_resolution: usize,
) -> Result<ProjectionResult> {
    if grid_resolution < 1000 {
        return Err(Error::InvalidParameter(format!(
            "grid resolution {grid_resolution} is below 1000"
        )));
    }
    let (reflected, mask) = c.reflect_to_positive();
    let (region, _) = classify_region(&reflected, spec)?;
    if region != Region::RegionIII {
        return Err(Error::InconsistentRegion(format!(
            "grid oracle needs a region III instance, got {region}"
        )));
    }

    let value = |lambda2: f64| -> Option<f64> {
        match spec.q {
            GroupNorm::L12 => eval_f(&reflected, lambda2, spec.tau1, spec.tau2).map(|v| v.f),
            GroupNorm::L1Inf => Some(eval_h(&reflected, lambda2, spec.tau1, spec.tau2).h),
        }
    };

    let top = reflected.max_abs();
    let step = top / grid_resolution as f64;
    let mut best: Option<(f64, f64)> = None;
    let (mut saw_positive, mut saw_nonpositive) = (false, false);
    for k in 0..=grid_resolution {
        let lambda2 = k as f64 * step;
        match value(lambda2) {
            Some(v) => {
                if v > 0.0 {
                    saw_positive = true;
                } else {
                    saw_nonpositive = true;
                }
                if best.is_none_or(|(_, b)| v.abs() < b.abs()) {
                    best = Some((lambda2, v));
                }
            }
            None => saw_nonpositive = true,
        }
    }
    let (mut lambda2, mut v_best) = match best {
        Some(b) if saw_positive && saw_nonpositive => b,
        _ => {
            return Err(Error::InconsistentRegion(
                "auxiliary function does not change sign on the grid".into(),
            ))
        }
    };
    let fine = step / 10.0;
    let centre = lambda2;
    for k in -10i32..=10 {
        let l = (centre + k as f64 * fine).clamp(0.0, top);
        if let Some(v) = value(l) {
            if v.abs() < v_best.abs() {
                lambda2 = l;
                v_best = v;
            }
        }
    }

    let (x, duals, caps) = match spec.q {
        GroupNorm::L12 => {
            let fv = eval_f(&reflected, lambda2, spec.tau1, spec.tau2)
                .expect("selected grid point has a defined f");
            let duals = DualPair {
                lambda1: fv.lambda1,
                lambda2,
            };
            (
                crate::composite::reconstruct_l12(&reflected, duals),
                duals,
                None,
            )
        }
        GroupNorm::L1Inf => {
            let hv = eval_h(&reflected, lambda2, spec.tau1, spec.tau2);
            let x = crate::composite::reconstruct_l1inf(&reflected, lambda2, &hv.caps);
            let duals = DualPair {
                lambda1: hv.lambda1,
                lambda2,
            };
            (x, duals, Some(hv.caps))
        }
    };
    Ok(ProjectionResult {
        x: mask.restore(&x)?,
        duals,
        region,
        iterations: grid_resolution + 21,
        residual: v_best.abs(),
        caps,
    })
}
