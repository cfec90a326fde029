//! Euclidean projections onto the intersection of an l1 ball and an l1,q
//! mixed-norm ball (q = 2 or q = inf).
//!
//! The main entry point is [`composite::project`], which reflects the input
//! into the nonnegative orthant, settles the easy cases with single-ball
//! projections, and otherwise bisects on the l1 multiplier. Around it sit the
//! single-ball projections, two alternating-projection baselines, two
//! reference oracles, projected-gradient regression solvers that use the
//! projection as their inner step, and the harness behind the `normball` CLI.
//!
//! ```
//! use normball::{project, BallSpec, GroupedVector};
//!
//! let c = GroupedVector::single_group(vec![4.0, 1.0]).unwrap();
//! let spec = BallSpec::l12(2.0, 2.2).unwrap();
//! let r = project(&c, &spec, None).unwrap();
//! assert!((r.x.values()[0] - 1.98882).abs() < 1e-5);
//! ```

pub mod baselines;
pub mod composite;
mod error;
pub mod grouped;
pub mod harness;
pub mod oracle;
pub mod regression;
pub mod single_ball;

pub use composite::{
    classify_region, project, BallSpec, DualPair, GroupNorm, ProjectionResult, Region,
    ToleranceConfig,
};
pub use error::{Error, Result};
pub use grouped::{GroupedVector, Norms, Sign, SignMask};
