//! Exact and certified verification of lower bounds on the probability that
//! a binomial (or Poisson) variable reaches its mean.
//!
//! Binomial quantities are exact rationals. Quantities involving square roots
//! or `e` are enclosed in outward-rounded intervals whose precision is raised
//! on demand until a comparison is decided.

pub mod binomial;
pub mod bounds;
pub mod error;
pub mod harness;
pub mod interval;
pub mod orders;
pub mod poisson;
pub mod rational;
pub mod verdict;

pub use binomial::{BinomialLaw, BinomialParams};
pub use bounds::BoundKind;
pub use error::{Error, Result};
pub use harness::{
    run_claim_sweep, GridSpec, Margin, RunOptions, Subject, SweepReport, SweepSummary,
    VerificationRecord,
};
pub use interval::{PrecisionPolicy, ProbInterval};
pub use orders::{OrderCheckReport, OrderKind};
pub use poisson::PoissonParams;
pub use rational::{parse_rational, Rational};
pub use verdict::Verdict;
