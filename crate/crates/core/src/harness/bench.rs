//! Timing of the bisection projection against the alternating baselines on
//! shared region III instances. Times come from a monotonic clock and are
//! machine-relative; the iteration columns are deterministic.

use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use super::sampling::{region_iii_instance, seeded_rng};
use crate::baselines::{
    admm_project, dykstra_project, SweepOrder, ADMM_DEFAULT_RHO, ADMM_MAX_ITERS, DYKSTRA_MAX_ITERS,
};
use crate::composite::{project, BallSpec, ToleranceConfig};
use crate::error::{Error, Result};
use crate::grouped::GroupedVector;

pub const BENCH_DYKSTRA_TOL: f64 = 1e-9;
pub const BENCH_ADMM_TOL: f64 = 1e-8;
const BENCH_EPS_INTERVAL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchMethod {
    Bisect,
    Dykstra,
    Admm,
}

impl BenchMethod {
    pub fn name(self) -> &'static str {
        match self {
            BenchMethod::Bisect => "bisect",
            BenchMethod::Dykstra => "dykstra",
            BenchMethod::Admm => "admm",
        }
    }
}

impl FromStr for BenchMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bisect" => Ok(BenchMethod::Bisect),
            "dykstra" => Ok(BenchMethod::Dykstra),
            "admm" => Ok(BenchMethod::Admm),
            other => Err(Error::InvalidParameter(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub method: String,
    pub g: usize,
    pub n: usize,
    pub q: String,
    pub trials: usize,
    pub mean_ms: f64,
    pub sd_ms: f64,
    pub iterations_mean: f64,
    pub iterations_sd: f64,
    pub iterations_max: usize,
    /// Trials that met their stopping rule before the iteration cap.
    pub converged: usize,
}

/// Sample mean and standard deviation (zero for a single value).
fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn run_once(method: BenchMethod, c: &GroupedVector, spec: &BallSpec) -> Result<(usize, bool)> {
    Ok(match method {
        BenchMethod::Bisect => {
            let tol = ToleranceConfig {
                eps_interval: BENCH_EPS_INTERVAL,
                ..ToleranceConfig::scaled(c, spec)
            };
            (project(c, spec, Some(&tol))?.iterations, true)
        }
        BenchMethod::Dykstra => {
            let r = dykstra_project(
                c,
                spec,
                SweepOrder::L1First,
                BENCH_DYKSTRA_TOL,
                DYKSTRA_MAX_ITERS,
            )?;
            (r.iterations, r.converged)
        }
        BenchMethod::Admm => {
            let r = admm_project(c, spec, ADMM_DEFAULT_RHO, BENCH_ADMM_TOL, ADMM_MAX_ITERS)?;
            (r.iterations, r.converged)
        }
    })
}

/// Draws `trials` region III instances from `seed`, then runs every method on
/// each of them and summarizes per method.
pub fn run_bench(
    methods: &[BenchMethod],
    g: usize,
    n: usize,
    spec: &BallSpec,
    trials: usize,
    seed: u64,
) -> Result<Vec<BenchRecord>> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let mut rng = seeded_rng(seed);
    let instances = (0..trials)
        .map(|_| region_iii_instance(&mut rng, g, n, spec))
        .collect::<Result<Vec<_>>>()?;

    let mut records = Vec::with_capacity(methods.len());
    for &method in methods {
        let mut times = Vec::with_capacity(trials);
        let mut iters = Vec::with_capacity(trials);
        let mut converged = 0;
        for c in &instances {
            let start = Instant::now();
            let (it, ok) = run_once(method, c, spec)?;
            times.push(start.elapsed().as_secs_f64() * 1e3);
            iters.push(it as f64);
            converged += usize::from(ok);
        }
        let (mean_ms, sd_ms) = mean_sd(&times);
        let (iterations_mean, iterations_sd) = mean_sd(&iters);
        records.push(BenchRecord {
            method: method.name().to_string(),
            g,
            n,
            q: spec.q.to_string(),
            trials,
            mean_ms,
            sd_ms,
            iterations_mean,
            iterations_sd,
            iterations_max: iters.iter().fold(0.0f64, |a, b| a.max(*b)) as usize,
            converged,
        });
    }
    Ok(records)
}
