//! Fractional independence, embedding-count bounds and the constructive
//! stability extractors built on them.

mod bounds;
mod dense;
mod frac;
mod qfamily;

pub use bounds::{embedding_bound, falling_u64, small_full_side, star_side, BoundExtra, BoundKind, BoundReport};
pub use dense::{
    clique_deficit, extract_dense_subgraph, split_high_degree, star_witness, DenseSubgraph, SplitReport, StarWitness,
};
pub use frac::{fractional_independence, CoverPart, FracIndepResult, Half};
pub use qfamily::{alpha_inequality, for_each_subgraph, has_saturated_side, in_q_family, is_isomorphic, q_family, AlphaInequality};
