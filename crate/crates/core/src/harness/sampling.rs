//! Seeded instance generation.
//!
//! The generator is xoshiro256++ seeded through SplitMix64
//! (`Xoshiro256PlusPlus::seed_from_u64`). Uniform reals take the top 53 bits
//! of one `next_u64` output: `u = (x >> 11) * 2^-53`, so a point in
//! `[-1000, 1000)` is `-1000 + 2000 u`, coordinates drawn in index order.
//! Any implementation of the same generator reproduces the region tallies.

use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::composite::{classify_region, BallSpec, GroupNorm, Region};
use crate::error::{Error, Result};
use crate::grouped::{even_group_sizes, GroupedVector};

pub type HarnessRng = Xoshiro256PlusPlus;

/// Half-width of the sampling box for the region and benchmark instances.
pub const SAMPLE_RANGE: f64 = 1e3;

const REJECTION_LIMIT: usize = 100_000;

pub fn seeded_rng(seed: u64) -> HarnessRng {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Uniform on `[0, 1)` with 53 random bits.
pub fn uniform01(rng: &mut HarnessRng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// `n` coordinates uniform on `[-SAMPLE_RANGE, SAMPLE_RANGE)`, split into `g`
/// near-equal contiguous groups.
pub fn uniform_point(rng: &mut HarnessRng, g: usize, n: usize) -> Result<GroupedVector> {
    let sizes = even_group_sizes(n, g)?;
    let values = (0..n)
        .map(|_| -SAMPLE_RANGE + 2.0 * SAMPLE_RANGE * uniform01(rng))
        .collect();
    GroupedVector::new(values, &sizes)
}

/// A uniform point that falls in region III for `spec`, by rejection.
pub fn region_iii_instance(
    rng: &mut HarnessRng,
    g: usize,
    n: usize,
    spec: &BallSpec,
) -> Result<GroupedVector> {
    for _ in 0..REJECTION_LIMIT {
        let c = uniform_point(rng, g, n)?;
        if classify_region(&c.reflect_to_positive().0, spec)?.0 == Region::RegionIII {
            return Ok(c);
        }
    }
    Err(Error::InvalidParameter(format!(
        "no region III point among {REJECTION_LIMIT} samples"
    )))
}

/// Small mixed instance for property checks: `g <= max_g` groups of random
/// sizes, `n <= max_n` entries in `[-5, 5]` with planted zeros and ties, and
/// radii set to log-uniform fractions of the input's own norms so that every
/// region occurs.
pub fn random_instance(
    rng: &mut HarnessRng,
    q: GroupNorm,
    max_n: usize,
    max_g: usize,
) -> Result<(GroupedVector, BallSpec)> {
    if max_g == 0 || max_n < max_g {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= max_g <= max_n, got g {max_g}, n {max_n}"
        )));
    }
    let g = rng.random_range(1..=max_g);
    let n = rng.random_range(g..=max_n);
    // random composition of n into g positive parts
    let mut cuts: Vec<usize> = (1..n).collect();
    for i in 0..g - 1 {
        let j = rng.random_range(i..cuts.len());
        cuts.swap(i, j);
    }
    cuts.truncate(g - 1);
    cuts.sort_unstable();
    let mut sizes = Vec::with_capacity(g);
    let mut prev = 0;
    for cut in cuts.into_iter().chain(std::iter::once(n)) {
        sizes.push(cut - prev);
        prev = cut;
    }

    let mut values: Vec<f64> = Vec::with_capacity(n);
    for _ in 0..n {
        let v = match rng.random_range(0..10) {
            0 => 0.0,
            1 if !values.is_empty() => {
                let k = rng.random_range(0..values.len());
                if rng.random::<bool>() {
                    values[k]
                } else {
                    -values[k]
                }
            }
            _ => rng.random_range(-5.0..5.0),
        };
        values.push(v);
    }
    if values.iter().all(|v| *v == 0.0) {
        values[0] = 1.0;
    }
    let c = GroupedVector::new(values, &sizes)?;
    let mut fraction = || 10f64.powf(rng.random_range(-1.7..0.1));
    let tau1 = fraction() * q.norm_of(&c);
    let tau2 = fraction() * c.l1_norm();
    Ok((c, BallSpec::new(q, tau1, tau2)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_draw_is_reproducible_and_in_range() {
        let mut a = seeded_rng(5);
        let mut b = seeded_rng(5);
        let pa = uniform_point(&mut a, 3, 10).unwrap();
        let pb = uniform_point(&mut b, 3, 10).unwrap();
        assert_eq!(pa, pb);
        assert_eq!(pa.group_sizes(), vec![4, 3, 3]);
        assert!(pa.values().iter().all(|v| (-1e3..1e3).contains(v)));
    }

    #[test]
    fn uniform01_uses_top_bits() {
        let mut rng = seeded_rng(0);
        let mut copy = rng.clone();
        let u = uniform01(&mut rng);
        assert_eq!(u, (copy.next_u64() >> 11) as f64 / 9007199254740992.0);
    }

    #[test]
    fn random_instances_cover_every_region() {
        let mut rng = seeded_rng(11);
        for q in [GroupNorm::L12, GroupNorm::L1Inf] {
            let mut seen = std::collections::HashSet::new();
            for _ in 0..400 {
                let (c, spec) = random_instance(&mut rng, q, 50, 10).unwrap();
                assert!(c.len() <= 50 && c.group_count() <= 10);
                seen.insert(
                    classify_region(&c.reflect_to_positive().0, &spec)
                        .unwrap()
                        .0,
                );
            }
            for r in [
                Region::Inside,
                Region::RegionI,
                Region::RegionII,
                Region::RegionIII,
            ] {
                assert!(seen.contains(&r), "{q}: missing {r}");
            }
        }
    }

    #[test]
    fn rejection_sampler_hits_region_iii() {
        let spec = BallSpec::l12(5.0, 6.0).unwrap();
        let mut rng = seeded_rng(1);
        let c = region_iii_instance(&mut rng, 10, 100, &spec).unwrap();
        assert_eq!(
            classify_region(&c.reflect_to_positive().0, &spec)
                .unwrap()
                .0,
            Region::RegionIII
        );
    }
}
