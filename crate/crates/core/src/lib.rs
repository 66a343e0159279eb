//! Decomposition of fuzzy binary relations into a strict-preference part and
//! an indifference part, built on triangular norms and conorms.
//!
//! The crate is organised bottom-up:
//!
//! * [`ops`]: t-norms / t-conorms, the operator spec grammar and property checks.
//! * [`divisors`]: the level sets `D¹_S(w)` and `D⁰_T(w)` and the strong
//!   existence / uniqueness predicates built on them.
//! * [`relation`]: finite fuzzy relations, their predicates and the text file format.
//! * [`decompose`]: the residual operator, canonical decompositions, verification
//!   and a brute-force enumerator used as a uniqueness oracle.
//! * [`preference`]: fuzzy preference axioms FP1–FP6 and decomposition rules.
//! * [`region`]: the sets of decomposable value pairs rasterised on a grid.
//! * [`tables`]: regeneration of the decomposability and decomposition-rule tables.

pub mod decompose;
pub mod divisors;
pub mod error;
pub mod grid;
pub mod ops;
pub mod preference;
pub mod region;
pub mod relation;
pub mod tables;
pub mod verdict;

pub use decompose::{Decomposition, Mode, Residual};
pub use divisors::DegreeInterval;
pub use error::{Error, Result};
pub use grid::{Grid, SampleSpec};
pub use ops::{BinaryOp, Family, Kind, Lambda};
pub use preference::{FpReport, PreferenceTriplet, RuleVerdict};
pub use region::RegionGrid;
pub use relation::FuzzyRelation;
pub use tables::{Table, TableKind};
pub use verdict::{TriState, Witness};

/// Absolute tolerance used when comparing computed degrees.
pub const EPS: f64 = 1e-9;
