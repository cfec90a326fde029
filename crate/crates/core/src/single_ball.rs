//! Euclidean projections onto a single l1, l1,2 or l1,inf ball.
//!
//! All three accept arbitrary signs: they work on magnitudes and copy the
//! input signs back, which is exact because the projection of a point onto
//! any of these balls never flips a coordinate's sign.

use crate::error::{Error, Result};
use crate::grouped::{rescale_factor, scale_radius, GroupedVector};

/// Output of a single-ball projection.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleBallResult {
    pub x: GroupedVector,
    /// Soft-threshold (dual) value; zero iff the input was already feasible.
    pub threshold: f64,
    /// Entries (l1) or groups (l1,2 and l1,inf) left nonzero.
    pub active_count: usize,
}

/// Output of the l1,inf projection: the projected point plus the per-group caps.
#[derive(Debug, Clone, PartialEq)]
pub struct L1InfProjection {
    /// `ball.threshold` equals `lambda1`.
    pub ball: SingleBallResult,
    /// Cap `d_i` on the magnitudes of group `i`.
    pub caps: Vec<f64>,
    /// Common amount of l1 mass removed from every active group.
    pub lambda1: f64,
}

impl SingleBallResult {
    fn unscale(mut self, inv: f64) -> Self {
        self.x = self.x.map_values(|v| v * inv);
        self.threshold *= inv;
        self
    }
}

pub(crate) fn check_radius(tau: f64) -> Result<()> {
    if tau.is_finite() && tau >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidRadius(tau))
    }
}

/// Projection onto `{x : ||x||_1 <= tau}`.
///
/// `tol` is the slack allowed when deciding that the input is already inside.
pub fn project_l1(c: &GroupedVector, tau: f64, tol: f64) -> Result<SingleBallResult> {
    check_radius(tau)?;
    if let Some(s) = rescale_factor(c.max_abs()) {
        let r = project_l1(&c.map_values(|v| v * s), scale_radius(tau, s), tol * s)?;
        return Ok(r.unscale(1.0 / s));
    }
    let norm = c.l1_norm();
    if norm <= tau + tol {
        return Ok(SingleBallResult {
            x: c.clone(),
            threshold: 0.0,
            active_count: c.values().iter().filter(|v| **v != 0.0).count(),
        });
    }
    if tau == 0.0 {
        return Ok(SingleBallResult {
            x: c.zeros_like(),
            threshold: c.max_abs(),
            active_count: 0,
        });
    }
    let mags: Vec<f64> = c.values().iter().map(|v| v.abs()).collect();
    let theta = simplex_threshold(&mags, tau);
    let x = c.map_values(|&v| v.signum() * (v.abs() - theta).max(0.0));
    let active_count = mags.iter().filter(|&&m| m > theta).count();
    Ok(SingleBallResult {
        x,
        threshold: theta,
        active_count,
    })
}

/// Projection onto `{x : sum_i ||x_i||_2 <= tau1}`.
///
/// The group norms are projected onto the l1 ball and each group is rescaled
/// to its new norm.
pub fn project_l12(c: &GroupedVector, tau1: f64, tol: f64) -> Result<SingleBallResult> {
    check_radius(tau1)?;
    if let Some(s) = rescale_factor(c.max_abs()) {
        let r = project_l12(&c.map_values(|v| v * s), scale_radius(tau1, s), tol * s)?;
        return Ok(r.unscale(1.0 / s));
    }
    let norms = c.group_l2_norms();
    let total: f64 = norms.iter().sum();
    if total <= tau1 + tol {
        return Ok(SingleBallResult {
            x: c.clone(),
            threshold: 0.0,
            active_count: norms.iter().filter(|r| **r > 0.0).count(),
        });
    }
    if tau1 == 0.0 {
        return Ok(SingleBallResult {
            x: c.zeros_like(),
            threshold: norms.iter().fold(0.0, |m: f64, r| m.max(*r)),
            active_count: 0,
        });
    }
    let theta = simplex_threshold(&norms, tau1);
    let mut values = Vec::with_capacity(c.len());
    let mut active_count = 0;
    for (grp, &r) in c.groups().zip(&norms) {
        let scale = if r > theta { 1.0 - theta / r } else { 0.0 };
        if scale > 0.0 {
            active_count += 1;
        }
        values.extend(grp.iter().map(|v| v * scale));
    }
    Ok(SingleBallResult {
        x: GroupedVector::from_parts_unchecked(values, c.offsets().to_vec()),
        threshold: theta,
        active_count,
    })
}

/// Projection onto `{x : sum_i max_j |x_ij| <= tau1}`.
///
/// Every group is clamped at a cap `d_i`; the caps are chosen so that each
/// active group loses the same l1 mass `lambda1` and `sum_i d_i = tau1`.
/// Sort-based, `O(n log n)`.
pub fn project_l1inf(c: &GroupedVector, tau1: f64, tol: f64) -> Result<L1InfProjection> {
    check_radius(tau1)?;
    if let Some(s) = rescale_factor(c.max_abs()) {
        let r = project_l1inf(&c.map_values(|v| v * s), scale_radius(tau1, s), tol * s)?;
        let inv = 1.0 / s;
        return Ok(L1InfProjection {
            ball: r.ball.unscale(inv),
            caps: r.caps.iter().map(|d| d * inv).collect(),
            lambda1: r.lambda1 * inv,
        });
    }
    let (mags, _) = c.reflect_to_positive();
    let (caps, lambda1) = if c.l1inf_norm() <= tau1 + tol {
        (group_maxima(&mags), 0.0)
    } else if tau1 == 0.0 {
        let widest = mags
            .groups()
            .map(|g| g.iter().sum::<f64>())
            .fold(0.0, f64::max);
        (vec![0.0; c.group_count()], widest)
    } else {
        l1inf_caps(&mags, tau1)
    };
    let mut values = Vec::with_capacity(c.len());
    for (grp, &d) in c.groups().zip(&caps) {
        values.extend(grp.iter().map(|v| v.signum() * v.abs().min(d)));
    }
    let active_count = caps.iter().filter(|d| **d > 0.0).count();
    Ok(L1InfProjection {
        ball: SingleBallResult {
            x: GroupedVector::from_parts_unchecked(values, c.offsets().to_vec()),
            threshold: lambda1,
            active_count,
        },
        caps,
        lambda1,
    })
}

pub(crate) fn group_maxima(v: &GroupedVector) -> Vec<f64> {
    v.groups()
        .map(|g| g.iter().fold(0.0f64, |m, x| m.max(x.abs())))
        .collect()
}

/// Threshold `theta >= 0` with `sum_i max(a_i - theta, 0) = tau`, for
/// nonnegative `a` with `sum_i a_i > tau > 0`.
pub(crate) fn simplex_threshold(a: &[f64], tau: f64) -> f64 {
    let mut sorted = a.to_vec();
    // ties keep index order; the threshold does not depend on it
    sorted.sort_by(|x, y| y.total_cmp(x));
    // the top entry alone always gives a valid candidate; testing it like the
    // others fails when tau is below its rounding unit
    let mut cumsum = sorted[0];
    let mut theta = sorted[0] - tau;
    for (k, &u) in sorted.iter().enumerate().skip(1) {
        cumsum += u;
        let t = (cumsum - tau) / (k + 1) as f64;
        if u > t {
            theta = t;
        } else {
            break;
        }
    }
    theta.max(0.0)
}

/// Caps and the common removed mass for a nonnegative grouped vector whose
/// l1,inf norm exceeds `tau1 > 0`.
///
/// For a removed mass `lambda`, group `i` sorted descending as `a_1 >= ... >= a_m`
/// with prefix sums `S_k` sits on segment `k` while
/// `S_k - k a_k <= lambda <= S_{k+1} - (k+1) a_{k+1}`, where its cap is
/// `(S_k - lambda) / k`. The group drops out once `lambda >= S_m`. The total
/// cap `sum_i d_i(lambda)` is piecewise linear and decreasing, so a sweep over
/// the sorted breakpoints locates the segment holding `tau1`.
pub(crate) fn l1inf_caps(mags: &GroupedVector, tau1: f64) -> (Vec<f64>, f64) {
    let offsets = mags.offsets();
    let g = mags.group_count();

    // per-group descending sort and prefix sums, stored flat
    let mut sorted = mags.values().to_vec();
    for w in offsets.windows(2) {
        sorted[w[0]..w[1]].sort_unstable_by(|x, y| y.total_cmp(x));
    }
    let mut prefix = Vec::with_capacity(sorted.len());
    for w in offsets.windows(2) {
        let mut s = 0.0;
        for &a in &sorted[w[0]..w[1]] {
            s += a;
            prefix.push(s);
        }
    }

    // (lambda, group) breakpoints; pushed in segment order within a group so the
    // stable sort keeps that order on ties
    let mut events: Vec<(f64, usize)> = Vec::with_capacity(sorted.len());
    for (i, w) in offsets.windows(2).enumerate() {
        let m = w[1] - w[0];
        for k in 2..=m {
            let idx = w[0] + k - 1;
            events.push((prefix[idx] - k as f64 * sorted[idx], i));
        }
        events.push((prefix[w[1] - 1], i));
    }
    events.sort_by(|x, y| x.0.total_cmp(&y.0));

    // segment[i] = number of entries above the cap; 0 once the group is inactive
    let mut segment = vec![1usize; g];
    let mut a_sum: f64 = (0..g).map(|i| prefix[offsets[i]]).sum();
    let mut b_sum = g as f64;
    for &(lambda_e, i) in &events {
        if b_sum > 0.0 && a_sum - lambda_e * b_sum <= tau1 {
            break;
        }
        let k = segment[i];
        let m = offsets[i + 1] - offsets[i];
        let s_old = prefix[offsets[i] + k - 1];
        a_sum -= s_old / k as f64;
        b_sum -= 1.0 / k as f64;
        if k == m {
            segment[i] = 0;
        } else {
            let s_new = prefix[offsets[i] + k];
            segment[i] = k + 1;
            a_sum += s_new / (k + 1) as f64;
            b_sum += 1.0 / (k + 1) as f64;
        }
    }

    // recompute the linear piece from scratch to shed accumulated rounding
    let (mut a, mut b) = (0.0, 0.0);
    for i in 0..g {
        let k = segment[i];
        if k > 0 {
            a += prefix[offsets[i] + k - 1] / k as f64;
            b += 1.0 / k as f64;
        }
    }
    let lambda = if b > 0.0 {
        ((a - tau1) / b).max(0.0)
    } else {
        0.0
    };
    let caps = (0..g)
        .map(|i| {
            let k = segment[i];
            if k == 0 {
                0.0
            } else {
                let top = sorted[offsets[i]];
                ((prefix[offsets[i] + k - 1] - lambda) / k as f64).clamp(0.0, top)
            }
        })
        .collect();
    (caps, lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gv(values: &[f64], sizes: &[usize]) -> GroupedVector {
        GroupedVector::new(values.to_vec(), sizes).unwrap()
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn l1_example_matches_grid_scan() {
        // oracle: scan theta on a fine grid for max(3-t,0)+max(1-t,0)=2
        let mut best = (f64::INFINITY, 0.0);
        for k in 0..=300_000 {
            let t = k as f64 * 1e-5;
            let r = ((3.0 - t).max(0.0) + (1.0 - t).max(0.0) - 2.0).abs();
            if r < best.0 {
                best = (r, t);
            }
        }
        assert!((best.1 - 1.0).abs() < 1e-5);

        let r = project_l1(&gv(&[3.0, 1.0], &[2]), 2.0, 0.0).unwrap();
        assert_close(r.x.values(), &[2.0, 0.0], 1e-12);
        assert!((r.threshold - 1.0).abs() < 1e-12);
        assert_eq!(r.active_count, 1);
    }

    #[test]
    fn l1_feasible_and_symmetric() {
        let c = gv(&[0.5, 0.5], &[1, 1]);
        let r = project_l1(&c, 2.0, 0.0).unwrap();
        assert_eq!(r.x, c);
        assert_eq!(r.threshold, 0.0);

        let r = project_l1(&gv(&[1.0; 4], &[4]), 2.0, 0.0).unwrap();
        assert_close(r.x.values(), &[0.5; 4], 1e-15);
    }

    #[test]
    fn l1_signs_and_zero_radius() {
        let r = project_l1(&gv(&[-3.0, 1.0], &[2]), 2.0, 0.0).unwrap();
        assert_close(r.x.values(), &[-2.0, 0.0], 1e-12);
        let r = project_l1(&gv(&[-3.0, 1.0], &[2]), 0.0, 0.0).unwrap();
        assert_eq!(r.x.values(), &[0.0, 0.0]);
        assert_eq!(r.threshold, 3.0);
        assert_eq!(
            project_l1(&gv(&[1.0], &[1]), -1.0, 0.0),
            Err(Error::InvalidRadius(-1.0))
        );
        assert!(project_l1(&gv(&[1.0], &[1]), f64::NAN, 0.0).is_err());
    }

    #[test]
    fn l12_examples() {
        let r = project_l12(&gv(&[3.0, 4.0, 0.0, 0.0], &[2, 2]), 2.5, 0.0).unwrap();
        assert_close(r.x.values(), &[1.5, 2.0, 0.0, 0.0], 1e-12);
        assert!((r.threshold - 2.5).abs() < 1e-12);

        let r = project_l12(&gv(&[3.0, 4.0], &[2]), 1.0, 0.0).unwrap();
        assert_close(r.x.values(), &[0.6, 0.8], 1e-12);

        let c = gv(&[0.1, -0.2, 0.3], &[1, 2]);
        assert_eq!(project_l12(&c, 5.0, 0.0).unwrap().x, c);
        assert!(project_l12(&c, -0.5, 0.0).is_err());
    }

    #[test]
    fn l1inf_examples() {
        let r = project_l1inf(&gv(&[3.0, 1.0], &[2]), 2.0, 0.0).unwrap();
        assert_close(r.ball.x.values(), &[2.0, 1.0], 1e-12);
        assert_close(&r.caps, &[2.0], 1e-12);
        assert!((r.lambda1 - 1.0).abs() < 1e-12);

        // minimize (d1-4)^2 + (d2-3)^2 s.t. d1 + d2 = 3 -> d = (2, 1)
        let r = project_l1inf(&gv(&[4.0, 3.0], &[1, 1]), 3.0, 0.0).unwrap();
        assert_close(&r.caps, &[2.0, 1.0], 1e-12);
        assert_close(r.ball.x.values(), &[2.0, 1.0], 1e-12);

        let c = gv(&[0.5, -1.0, 0.25], &[2, 1]);
        let r = project_l1inf(&c, 5.0, 0.0).unwrap();
        assert_eq!(r.ball.x, c);
        assert_eq!(r.caps, vec![1.0, 0.25]);
        assert_eq!(r.lambda1, 0.0);
    }

    #[test]
    fn l1inf_zero_groups_and_ties() {
        let c = gv(&[0.0, 0.0, 5.0, 5.0, 5.0, -1.0], &[2, 4]);
        let r = project_l1inf(&c, 2.0, 0.0).unwrap();
        assert_close(&r.caps, &[0.0, 2.0], 1e-12);
        assert_close(r.ball.x.values(), &[0.0, 0.0, 2.0, 2.0, 2.0, -1.0], 1e-12);
        assert!((r.lambda1 - 9.0).abs() < 1e-12);

        let r = project_l1inf(&c, 0.0, 0.0).unwrap();
        assert!(r.ball.x.values().iter().all(|v| *v == 0.0));
        assert_eq!(r.lambda1, 16.0);
    }

    #[test]
    fn simplex_threshold_ties() {
        assert!((simplex_threshold(&[2.0, 2.0, 2.0], 3.0) - 1.0).abs() < 1e-15);
        assert!((simplex_threshold(&[5.0, 0.0], 1.0) - 4.0).abs() < 1e-15);
    }
}
