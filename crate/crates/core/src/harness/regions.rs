//! Monte Carlo estimate of how much of the sampling box falls in each region.

use serde::Serialize;

use super::sampling::{seeded_rng, uniform_point};
use crate::composite::{classify_region, BallSpec, Region};
use crate::error::{Error, Result};
use crate::grouped::GroupedVector;

const BATCH: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionCounts {
    #[serde(rename = "INSIDE")]
    pub inside: usize,
    #[serde(rename = "REGION_I")]
    pub region_i: usize,
    #[serde(rename = "REGION_II")]
    pub region_ii: usize,
    #[serde(rename = "REGION_III")]
    pub region_iii: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionFractions {
    #[serde(rename = "INSIDE")]
    pub inside: f64,
    #[serde(rename = "REGION_I")]
    pub region_i: f64,
    #[serde(rename = "REGION_II")]
    pub region_ii: f64,
    #[serde(rename = "REGION_III")]
    pub region_iii: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionTally {
    pub g: usize,
    pub n: usize,
    pub q: String,
    pub tau1: f64,
    pub tau2: f64,
    pub seed: u64,
    pub samples: usize,
    pub counts: RegionCounts,
}

impl RegionTally {
    pub fn fractions(&self) -> RegionFractions {
        let s = self.samples as f64;
        RegionFractions {
            inside: self.counts.inside as f64 / s,
            region_i: self.counts.region_i as f64 / s,
            region_ii: self.counts.region_ii as f64 / s,
            region_iii: self.counts.region_iii as f64 / s,
        }
    }
}

fn classify(points: &[GroupedVector], spec: &BallSpec) -> Result<Vec<Region>> {
    points
        .iter()
        .map(|c| Ok(classify_region(&c.reflect_to_positive().0, spec)?.0))
        .collect()
}

/// Draws `samples` uniform points (see the sampling module for the exact
/// generator) and counts their regions. Points are drawn sequentially and
/// classified in parallel, so the tally depends only on the seed.
pub fn tally_regions(
    g: usize,
    n: usize,
    spec: &BallSpec,
    samples: usize,
    seed: u64,
) -> Result<RegionTally> {
    BallSpec::new(spec.q, spec.tau1, spec.tau2)?;
    if spec.tau1 <= 0.0 || spec.tau2 <= 0.0 {
        return Err(Error::InvalidParameter(
            "region tally needs positive radii".into(),
        ));
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    let workers = std::thread::available_parallelism().map_or(1, |w| w.get());
    let mut rng = seeded_rng(seed);
    let mut counts = RegionCounts {
        inside: 0,
        region_i: 0,
        region_ii: 0,
        region_iii: 0,
    };
    let mut remaining = samples;
    while remaining > 0 {
        let take = remaining.min(BATCH * workers);
        remaining -= take;
        let points = (0..take)
            .map(|_| uniform_point(&mut rng, g, n))
            .collect::<Result<Vec<_>>>()?;
        let chunk = take.div_ceil(workers);
        let regions = std::thread::scope(|s| {
            let handles: Vec<_> = points
                .chunks(chunk)
                .map(|part| s.spawn(move || classify(part, spec)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("classification thread panicked"))
                .collect::<Result<Vec<_>>>()
        })?;
        for region in regions.into_iter().flatten() {
            match region {
                Region::Inside => counts.inside += 1,
                Region::RegionI => counts.region_i += 1,
                Region::RegionII => counts.region_ii += 1,
                Region::RegionIII => counts.region_iii += 1,
                Region::Origin => unreachable!("radii are positive"),
            }
        }
    }
    Ok(RegionTally {
        g,
        n,
        q: spec.q.to_string(),
        tau1: spec.tau1,
        tau2: spec.tau2,
        seed,
        samples,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huge_radii_put_everything_inside() {
        let spec = BallSpec::l12(1e12, 1e12).unwrap();
        let t = tally_regions(2, 10, &spec, 300, 1).unwrap();
        assert_eq!(t.counts.inside, 300);
        assert_eq!(t.fractions().inside, 1.0);
    }

    #[test]
    fn counts_sum_and_are_seed_deterministic() {
        let spec = BallSpec::l12(5.0, 6.0).unwrap();
        let a = tally_regions(10, 100, &spec, 700, 9).unwrap();
        let b = tally_regions(10, 100, &spec, 700, 9).unwrap();
        assert_eq!(a, b);
        let c = &a.counts;
        assert_eq!(c.inside + c.region_i + c.region_ii + c.region_iii, 700);
        let f = a.fractions();
        assert!((f.inside + f.region_i + f.region_ii + f.region_iii - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_arguments() {
        let spec = BallSpec::l12(0.0, 6.0).unwrap();
        assert!(tally_regions(10, 100, &spec, 10, 1).is_err());
        let spec = BallSpec::l12(5.0, 6.0).unwrap();
        assert!(tally_regions(10, 100, &spec, 0, 1).is_err());
        assert!(tally_regions(0, 100, &spec, 10, 1).is_err());
    }
}
