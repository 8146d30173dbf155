//! Greedy label mapping: repeatedly take the heaviest maximal clique.

use alloc::vec::Vec;

use super::cliques::{clique_count, for_each_maximal_clique};
use super::{clique_weight, MappingError};
use crate::graph::{MappingGraph, Partition, VertexId};

/// Maps labels by repeatedly enumerating the maximal cliques of the remaining
/// vertices, adding the heaviest one to the partition and removing its
/// vertices. Exact on each pick, exponential in the number of parts: a
/// complete graph with C vertices per part enumerates C^K cliques in the
/// first round alone.
///
/// `budget` caps the total number of cliques enumerated across all rounds
/// (see [`super::DEFAULT_CLIQUE_BUDGET`]); exceeding it aborts with
/// [`MappingError::CliqueBudgetExceeded`], in which case the pairwise mapper
/// is the intended fallback. Ties between equally heavy cliques resolve
/// toward the earliest clique in member order, so runs are reproducible.
pub fn map_labels_greedy(graph: &MappingGraph, budget: u64) -> Result<Partition, MappingError> {
    let mut remaining: Vec<Vec<usize>> = graph
        .part_sizes()
        .iter()
        .map(|&size| (0..size).collect())
        .collect();

    // the whole run shares one budget; predict each round before enumerating
    let mut spent: u128 = 0;
    let mut cliques: Vec<Vec<VertexId>> = Vec::new();
    let mut scratch: Vec<VertexId> = Vec::new();

    while remaining.iter().any(|m| !m.is_empty()) {
        let round = clique_count(&remaining);
        spent = spent.saturating_add(round);
        if spent > budget as u128 {
            return Err(MappingError::CliqueBudgetExceeded {
                needed: spent,
                budget,
            });
        }

        let mut best: Option<(f64, Vec<VertexId>)> = None;
        for_each_maximal_clique(&remaining, &mut scratch, |clique| {
            let weight = clique_weight(graph, clique);
            let better = match &best {
                None => true,
                Some((best_weight, _)) => weight > *best_weight,
            };
            if better {
                best = Some((weight, clique.to_vec()));
            }
        });
        let (_, picked) = best.expect("non-empty remainder yields at least one clique");

        for &v in &picked {
            remaining[v.part].retain(|&m| m != v.member);
        }
        cliques.push(picked);
    }

    Ok(Partition::new(cliques))
}
