//! Exact and numerical machinery for upper tails of subgraph and
//! arithmetic-progression counts.

pub mod ap;
pub mod bitset;
pub mod cores;
pub mod cube;
pub mod error;
pub mod extremal;
pub mod graph;
pub mod model;
pub mod moments;
pub mod montecarlo;
pub mod scalar;
pub mod variational;

pub use error::{Error, Result};
pub use graph::Graph;
pub use scalar::Scalar;

/// Exact rational scalar used by every exact engine.
pub type Rational = num_rational::BigRational;

/// Exact law of a count, with rational probabilities.
pub type ExactDist = moments::Distribution<Rational>;
