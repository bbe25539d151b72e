//! Fixed inputs shared by the benchmarks.

use exceedance_core::rational::{rat, Rational};
use exceedance_core::{BinomialParams, GridSpec};

/// Points spanning small, moderate and large `n`, all inside the core domain.
pub fn binomial_points() -> Vec<BinomialParams> {
    [(10, 1, 3), (60, 5, 12), (200, 7, 24)]
        .into_iter()
        .map(|(n, a, b)| BinomialParams::new(n, rat(a, b)).expect("valid fixture"))
        .collect()
}

pub fn poisson_means() -> Vec<Rational> {
    vec![rat(1, 2), rat(7, 3), rat(67, 6)]
}

/// A grid small enough to sweep in a benchmark iteration.
pub fn small_grid() -> GridSpec {
    GridSpec::new(2, 20, 8).expect("valid fixture")
}
