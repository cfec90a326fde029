//! `normball`: projections, region tallies, benchmarks and the regression
//! experiment from the command line.
//!
//! Exit codes: 0 on success, 2 on input or usage errors, 3 when a solver runs
//! out of iterations.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use normball::harness::{
    bench_csv, load_instance, projection_csv, projection_json, regress_json, run_bench,
    run_regress, tally_csv, tally_json, tally_regions, BenchMethod, HarnessError, RegressConfig,
    RegressSolver,
};
use normball::regression::DatasetSize;
use normball::{project, BallSpec, Error, GroupNorm, ToleranceConfig};

const EXIT_INPUT: u8 = 2;
const EXIT_NONCONVERGENCE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "normball",
    version,
    about = "Projection onto the intersection of l1 and l1,q balls"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Project a vector read from files.
    Project(ProjectArgs),
    /// Estimate region fractions from uniform samples.
    Regions(RegionsArgs),
    /// Time the bisection projection against the baselines.
    Bench(BenchArgs),
    /// Run the synthetic constrained regression experiment.
    Regress(RegressArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct ProjectArgs {
    /// Group norm: 2 or inf.
    #[arg(long)]
    q: GroupNorm,
    #[arg(long)]
    tau1: f64,
    #[arg(long)]
    tau2: f64,
    /// One value per line.
    #[arg(long)]
    input: PathBuf,
    /// One group size per line; defaults to a single group.
    #[arg(long)]
    groups: Option<PathBuf>,
    #[arg(long)]
    eps_interval: Option<f64>,
    #[arg(long)]
    eps_residual: Option<f64>,
    #[arg(long, default_value_t = ToleranceConfig::DEFAULT_MAX_ITERS)]
    max_bisection_iters: usize,
    #[arg(long, value_enum, default_value = "json")]
    out: Format,
}

#[derive(Args)]
struct RegionsArgs {
    #[arg(long)]
    g: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: GroupNorm,
    #[arg(long)]
    tau1: f64,
    #[arg(long)]
    tau2: f64,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    out: Format,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated subset of bisect, dykstra, admm.
    #[arg(long, value_delimiter = ',', default_value = "bisect,dykstra,admm")]
    methods: Vec<BenchMethod>,
    #[arg(long)]
    g: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: GroupNorm,
    /// Defaults to 5 for both norms.
    #[arg(long)]
    tau1: Option<f64>,
    /// Defaults to 6 for q = 2 and 10 for q = inf.
    #[arg(long)]
    tau2: Option<f64>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum SizeArg {
    Small,
    Medium,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Pg,
    Nesterov,
}

#[derive(Args)]
struct RegressArgs {
    #[arg(long, value_enum, default_value = "small")]
    size: SizeArg,
    #[arg(long, value_enum, default_value = "pg")]
    solver: SolverArg,
    #[arg(long, default_value = "2")]
    q: GroupNorm,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stop once an iteration moves w by at most this much; 0 disables.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iters: usize,
    /// Also run the other solver and report the objective gap.
    #[arg(long)]
    compare: bool,
}

fn positive_radii(tau1: f64, tau2: f64) -> Result<(), HarnessError> {
    for tau in [tau1, tau2] {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidRadius(tau).into());
        }
    }
    Ok(())
}

fn cmd_project(a: ProjectArgs) -> Result<String, HarnessError> {
    positive_radii(a.tau1, a.tau2)?;
    let spec = BallSpec::new(a.q, a.tau1, a.tau2)?;
    let c = load_instance(&a.input, a.groups.as_deref())?;
    let defaults = ToleranceConfig::scaled(&c, &spec);
    let tol = ToleranceConfig {
        eps_interval: a.eps_interval.unwrap_or(defaults.eps_interval),
        eps_residual: a.eps_residual.unwrap_or(defaults.eps_residual),
        max_bisection_iters: a.max_bisection_iters,
    };
    let r = project(&c, &spec, Some(&tol))?;
    match a.out {
        Format::Json => projection_json(&r),
        Format::Csv => projection_csv(&r),
    }
}

fn cmd_regions(a: RegionsArgs) -> Result<String, HarnessError> {
    positive_radii(a.tau1, a.tau2)?;
    let spec = BallSpec::new(a.q, a.tau1, a.tau2)?;
    let t = tally_regions(a.g, a.n, &spec, a.samples, a.seed)?;
    match a.out {
        Format::Json => tally_json(&t),
        Format::Csv => tally_csv(&t),
    }
}

fn cmd_bench(a: BenchArgs) -> Result<String, HarnessError> {
    let tau1 = a.tau1.unwrap_or(5.0);
    let tau2 = a.tau2.unwrap_or(match a.q {
        GroupNorm::L12 => 6.0,
        GroupNorm::L1Inf => 10.0,
    });
    positive_radii(tau1, tau2)?;
    let spec = BallSpec::new(a.q, tau1, tau2)?;
    bench_csv(&run_bench(&a.methods, a.g, a.n, &spec, a.trials, a.seed)?)
}

fn cmd_regress(a: RegressArgs) -> Result<String, HarnessError> {
    let cfg = RegressConfig {
        size: match a.size {
            SizeArg::Small => DatasetSize::Small,
            SizeArg::Medium => DatasetSize::Medium,
        },
        solver: match a.solver {
            SolverArg::Pg => RegressSolver::Pg,
            SolverArg::Nesterov => RegressSolver::Nesterov,
        },
        q: a.q,
        seed: a.seed,
        tol: a.tol,
        max_iters: a.max_iters,
        compare: a.compare,
    };
    regress_json(&run_regress(&cfg)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Project(a) => cmd_project(a),
        Command::Regions(a) => cmd_regions(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Regress(a) => cmd_regress(a),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("normball: {e}");
            ExitCode::from(if e.is_nonconvergence() {
                EXIT_NONCONVERGENCE
            } else {
                EXIT_INPUT
            })
        }
    }
}
