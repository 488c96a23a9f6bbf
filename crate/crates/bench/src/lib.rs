//! Fixtures shared by the benchmarks.

use citeconc_core::synthgen::{scenario, GenParams, Schedule};
use citeconc_core::YearSpan;

/// A stationary corpus of `per_year` articles over twenty years.
pub fn bench_params(per_year: f64) -> GenParams {
    GenParams {
        span: YearSpan::new(1990, 2009),
        articles_per_year: Schedule::constant(per_year),
        seed: 7,
        ..scenario("stationary").expect("preset exists")
    }
}
