//! Exact distributions, factorial moments, Poisson-side bounds, cluster
//! censuses and the covering inequality behind entropic stability.

mod clusters;
mod dist;
mod factorial;
mod janson;
mod stability;

pub use clusters::{
    am_condition, am_upper_bound, ap_cluster_union_count, dependency_clusters, dependency_graph, for_each_connected_set,
    is_cluster, ClusterCensus, Hypergraph,
};
pub use dist::{exact_distribution, exact_distribution_with_limit, Distribution, MAX_EXACT_COORDS};
pub use factorial::{
    check_markov, factorial_moments, falling_factorial_log, poisson_markov_bound, tuple_moment, FactorialMoments,
    MarkovBound, MarkovCheck, TUPLE_BUDGET,
};
pub use janson::{hypergeometric_janson_check, JansonJson, JansonReport};
pub use stability::{stability_check, StabilityJson, StabilityReport};
