//! Label-mapping algorithms over the K-partite graph: greedy clique cover,
//! pairwise Hungarian assignment, randomized local search, and an exact
//! brute-force oracle for small instances.

mod brute;
mod cliques;
mod greedy;
mod hungarian;
mod pairwise;
mod rls;

pub use brute::{brute_force_optimum, DEFAULT_PARTITION_CAP};
pub use cliques::{enumerate_maximal_cliques, MaximalCliques, DEFAULT_CLIQUE_BUDGET};
pub use greedy::map_labels_greedy;
pub use hungarian::{hungarian_assign, Assignment};
pub use pairwise::{
    map_labels_pairwise, map_labels_pairwise_graph, merge_hypotheses, sort_by_avg_der,
    PairwiseMapping,
};
pub use rls::{map_labels_rls, RlsConfig, RlsOutcome};

use alloc::string::String;

use crate::graph::VertexId;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MappingError {
    #[error("clique enumeration needs {needed} cliques, budget is {budget}; \
             consider the pairwise mapper instead")]
    CliqueBudgetExceeded { needed: u128, budget: u64 },
    #[error("{candidates} orthogonal partitions exceed the brute-force cap of {cap}")]
    TooManyPartitions { candidates: u128, cap: u64 },
    #[error("graph is not complete (part sizes differ); pad it first")]
    IncompleteGraph,
    #[error("weight matrix must be non-empty and rectangular")]
    MalformedMatrix,
    #[error("weight matrix entry ({row}, {col}) is not a finite non-negative number")]
    InvalidMatrixEntry { row: usize, col: usize },
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("label map sends speakers '{a}' and '{b}' of one hypothesis to the same label")]
    MapCollision { a: String, b: String },
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
    #[error(transparent)]
    Hypothesis(#[from] crate::hypothesis::HypothesisError),
    #[error(transparent)]
    Scoring(#[from] crate::scoring::ScoringError),
}

/// Weight of a clique: the sum of its internal edge weights, accumulated in
/// sorted vertex-pair order.
pub(crate) fn clique_weight(graph: &crate::graph::MappingGraph, clique: &[VertexId]) -> f64 {
    let mut total = 0.0;
    for (i, &u) in clique.iter().enumerate() {
        for &v in &clique[i + 1..] {
            total += graph.weight(u, v);
        }
    }
    total
}
