//! Synthetic sparse-group regression data.
//!
//! Ten equal blocks; the first six carry a leading run of `±1` coefficients,
//! the last four are zero. Design rows are standard Gaussian with correlation
//! 0.2 inside a block (one shared factor per block), and the response gets
//! `N(0, 4^2)` noise.

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::Serialize;

use super::RegressionProblem;
use crate::composite::{BallSpec, GroupNorm};
use crate::error::Result;
use crate::grouped::GroupedVector;

const BLOCKS: usize = 10;
const WITHIN_GROUP_CORRELATION: f64 = 0.2;
const NOISE_SD: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetSize {
    /// 100 coefficients, 200 observations.
    Small,
    /// 1000 coefficients, 4000 observations.
    Medium,
}

impl DatasetSize {
    fn block_len(self) -> usize {
        match self {
            DatasetSize::Small => 10,
            DatasetSize::Medium => 100,
        }
    }

    fn observations(self) -> usize {
        match self {
            DatasetSize::Small => 200,
            DatasetSize::Medium => 4000,
        }
    }

    /// Nonzeros in each of the ten blocks.
    pub fn support_per_block(self) -> [usize; BLOCKS] {
        match self {
            DatasetSize::Small => [10, 8, 6, 4, 2, 1, 0, 0, 0, 0],
            DatasetSize::Medium => [100, 80, 60, 40, 20, 10, 0, 0, 0, 0],
        }
    }
}

impl std::str::FromStr for DatasetSize {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(DatasetSize::Small),
            "medium" => Ok(DatasetSize::Medium),
            other => Err(crate::Error::InvalidParameter(format!(
                "unknown dataset size {other:?}"
            ))),
        }
    }
}

/// Draws a problem and its true coefficients. The radii are set to the true
/// coefficients' own norms, so the truth is feasible.
///
/// Draw order (for reproducibility): coefficient signs in index order, then
/// the design row by row (per block: shared factor, then one own draw per
/// column), then the noise.
pub fn generate_synthetic_regression(
    size: DatasetSize,
    q: GroupNorm,
    seed: u64,
) -> Result<(RegressionProblem, GroupedVector)> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let block = size.block_len();
    let n = block * BLOCKS;
    let rows = size.observations();

    let mut w = vec![0.0; n];
    for (b, &k) in size.support_per_block().iter().enumerate() {
        for j in 0..k {
            w[b * block + j] = if rng.random::<bool>() { 1.0 } else { -1.0 };
        }
    }

    let shared = WITHIN_GROUP_CORRELATION.sqrt();
    let own = (1.0 - WITHIN_GROUP_CORRELATION).sqrt();
    let mut design = Array2::<f64>::zeros((rows, n));
    for mut row in design.rows_mut() {
        for b in 0..BLOCKS {
            let factor: f64 = rng.sample(StandardNormal);
            for j in 0..block {
                let z: f64 = rng.sample(StandardNormal);
                row[b * block + j] = shared * factor + own * z;
            }
        }
    }
    let truth = Array1::from_vec(w.clone());
    let mut response = design.dot(&truth);
    for y in response.iter_mut() {
        let e: f64 = rng.sample(StandardNormal);
        *y += NOISE_SD * e;
    }

    let sizes = vec![block; BLOCKS];
    let true_w = GroupedVector::new(w, &sizes)?;
    let spec = BallSpec::new(q, q.norm_of(&true_w), true_w.l1_norm())?;
    Ok((
        RegressionProblem::new(design, response, spec, sizes)?,
        true_w,
    ))
}

/// Share of `w`'s l1 mass that sits on the support of `truth`.
pub fn support_mass(w: &GroupedVector, truth: &GroupedVector) -> f64 {
    let total = w.l1_norm();
    if total == 0.0 {
        return 0.0;
    }
    let on: f64 = w
        .values()
        .iter()
        .zip(truth.values())
        .filter(|(_, t)| **t != 0.0)
        .map(|(v, _)| v.abs())
        .sum();
    on / total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nnz(v: &GroupedVector) -> usize {
        v.values().iter().filter(|x| **x != 0.0).count()
    }

    #[test]
    fn small_shape_and_support() {
        let (p, w) = generate_synthetic_regression(DatasetSize::Small, GroupNorm::L12, 7).unwrap();
        assert_eq!(nnz(&w), 31);
        assert_eq!(p.design().dim(), (200, 100));
        assert_eq!(p.response().len(), 200);
        assert!(w.values().iter().all(|v| [-1.0, 0.0, 1.0].contains(v)));
        assert_eq!(p.spec().tau2, 31.0);
    }

    #[test]
    fn medium_shape_and_support() {
        let (p, w) =
            generate_synthetic_regression(DatasetSize::Medium, GroupNorm::L1Inf, 1).unwrap();
        assert_eq!(nnz(&w), 310);
        assert_eq!(p.design().dim(), (4000, 1000));
        assert_eq!(p.spec().tau1, 6.0);
    }

    #[test]
    fn same_seed_same_problem() {
        let (a, wa) =
            generate_synthetic_regression(DatasetSize::Small, GroupNorm::L12, 42).unwrap();
        let (b, wb) =
            generate_synthetic_regression(DatasetSize::Small, GroupNorm::L12, 42).unwrap();
        assert_eq!(wa, wb);
        assert!(a
            .design()
            .iter()
            .zip(b.design())
            .all(|(x, y)| x.to_bits() == y.to_bits()));
        assert!(a
            .response()
            .iter()
            .zip(b.response())
            .all(|(x, y)| x.to_bits() == y.to_bits()));
        let (c, _) = generate_synthetic_regression(DatasetSize::Small, GroupNorm::L12, 43).unwrap();
        assert_ne!(a.response(), c.response());
    }

    #[test]
    fn within_block_correlation_near_target() {
        let (p, _) = generate_synthetic_regression(DatasetSize::Medium, GroupNorm::L12, 3).unwrap();
        let x = p.design();
        let corr = |a: usize, b: usize| {
            let ca = x.column(a);
            let cb = x.column(b);
            ca.dot(&cb) / (ca.dot(&ca).sqrt() * cb.dot(&cb).sqrt())
        };
        assert!((corr(0, 1) - 0.2).abs() < 0.06);
        assert!(corr(0, 150).abs() < 0.06);
    }

    #[test]
    fn support_mass_metric() {
        let truth = GroupedVector::new(vec![1.0, 0.0, -1.0, 0.0], &[2, 2]).unwrap();
        let w = GroupedVector::new(vec![0.5, 0.25, -0.25, 0.0], &[2, 2]).unwrap();
        assert!((support_mass(&w, &truth) - 0.75).abs() < 1e-15);
        assert_eq!(support_mass(&truth.zeros_like(), &truth), 0.0);
    }
}
