//! Plumbing behind the `normball` CLI: file parsing, seeded instance
//! generation, the Monte Carlo region tally, benchmark timing, the regression
//! driver, and machine-readable output. Every numeric step routes through the
//! library operations; nothing here re-derives projection math.

mod bench;
mod io;
mod output;
mod regions;
mod regress;
mod sampling;

pub use bench::{run_bench, BenchMethod, BenchRecord, BENCH_ADMM_TOL, BENCH_DYKSTRA_TOL};
pub use io::{load_instance, parse_groups, parse_vector, HarnessError, ParseError};
pub use output::{bench_csv, projection_csv, projection_json, regress_json, tally_csv, tally_json};
pub use regions::{tally_regions, RegionCounts, RegionFractions, RegionTally};
pub use regress::{run_regress, RegressConfig, RegressReport, RegressSolver, SolverSummary};
pub use sampling::{
    random_instance, region_iii_instance, seeded_rng, uniform01, uniform_point, HarnessRng,
    SAMPLE_RANGE,
};
