//! Equitable partitions of graphs into induced forests ("equitable
//! tree-colorings"), with a focus on 1-plane drawings whose crossings are
//! independent (IC-plane graphs).
//!
//! * [`graph`]: simple graphs, girth, degeneracy, induced subgraphs.
//! * [`drawing`]: crossings, IC validation, planarization, density bounds.
//! * [`coloring`]: partitions and the verifier.
//! * [`exact`]: exhaustive search and the `va_eq` / `va_eq*` thresholds.
//! * [`constructive`]: padding, relay and exchange moves, and the
//!   orchestrating [`constructive::solve`].
//! * [`generator`]: seeded corpora and the named extremal families.
//! * [`io`]: the JSON document formats, DIMACS input and report tables.
//! * [`experiment`]: the corpus harness behind the `experiment` command.

pub mod coloring;
pub mod constructive;
pub mod drawing;
mod dsu;
pub mod exact;
pub mod experiment;
pub mod generator;
pub mod graph;
pub mod io;
pub mod scalar;

pub use coloring::{verify, ClassPredicate, Partition, VerifyReport};
pub use drawing::{Crossing, DensityReport, Drawing, Edge};
pub use exact::{SolveOutcome, UnknownReason};
pub use graph::{Girth, Graph};
pub use scalar::Scalar;

/// Exact rational type used for every pass/fail density comparison.
pub type ExactBound = num_rational::Rational64;

/// Density report with exact bounds.
pub type ExactDensityReport = DensityReport<ExactBound>;

/// Density report with floating-point bounds, for display.
pub type FloatDensityReport = DensityReport<f64>;
