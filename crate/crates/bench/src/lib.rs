//! Fixtures shared by the benchmarks.

use fuzzdec::{FuzzyRelation, SampleSpec};

/// A seeded relation on `n` elements with degrees drawn uniformly from `[0,1]`.
pub fn relation(n: usize, seed: u64) -> FuzzyRelation {
    SampleSpec {
        count: 1,
        size: n,
        seed,
        levels: None,
    }
    .relations()
    .remove(0)
}
