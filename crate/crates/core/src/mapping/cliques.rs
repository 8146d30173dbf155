//! Maximal-clique enumeration for K-partite graphs.
//!
//! Because every cross-part vertex pair is an edge, the maximal cliques are
//! exactly the selections of one vertex from each non-empty part; a complete
//! graph with C vertices per part therefore has C^K of them. Enumeration is a
//! guarded cartesian product rather than a general clique search.

use alloc::vec::Vec;

use super::MappingError;
use crate::graph::{MappingGraph, VertexId};

/// Default cap on the number of cliques an enumeration (or a whole greedy
/// run) may produce before aborting.
pub const DEFAULT_CLIQUE_BUDGET: u64 = 10_000_000;

/// Number of maximal cliques in the sub-graph induced by the given per-part
/// member lists: the product over non-empty parts.
pub(crate) fn clique_count(members_per_part: &[Vec<usize>]) -> u128 {
    members_per_part
        .iter()
        .filter(|m| !m.is_empty())
        .fold(1u128, |acc, m| acc.saturating_mul(m.len() as u128))
}

/// Streams every maximal clique of the graph. Fails upfront if the clique
/// count exceeds `budget`.
pub fn enumerate_maximal_cliques(
    graph: &MappingGraph,
    budget: u64,
) -> Result<MaximalCliques, MappingError> {
    let members: Vec<Vec<usize>> = graph
        .part_sizes()
        .iter()
        .map(|&size| (0..size).collect())
        .collect();
    let needed = clique_count(&members);
    if needed > budget as u128 {
        return Err(MappingError::CliqueBudgetExceeded { needed, budget });
    }
    Ok(MaximalCliques::new(members))
}

/// Odometer over one member choice per non-empty part.
#[derive(Debug)]
pub struct MaximalCliques {
    parts: Vec<usize>,
    members: Vec<Vec<usize>>,
    cursor: Vec<usize>,
    done: bool,
}

impl MaximalCliques {
    pub(crate) fn new(members_per_part: Vec<Vec<usize>>) -> Self {
        let mut parts = Vec::new();
        let mut members = Vec::new();
        for (part, list) in members_per_part.into_iter().enumerate() {
            if !list.is_empty() {
                parts.push(part);
                members.push(list);
            }
        }
        let done = parts.is_empty();
        let cursor = alloc::vec![0; parts.len()];
        Self {
            parts,
            members,
            cursor,
            done,
        }
    }
}

impl Iterator for MaximalCliques {
    type Item = Vec<VertexId>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let clique = self
            .cursor
            .iter()
            .zip(self.parts.iter().zip(&self.members))
            .map(|(&pos, (&part, list))| VertexId::new(part, list[pos]))
            .collect();
        // advance, least-significant position last
        let mut i = self.cursor.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.cursor[i] += 1;
            if self.cursor[i] < self.members[i].len() {
                break;
            }
            self.cursor[i] = 0;
        }
        Some(clique)
    }
}

/// Calls `visit` with each maximal clique of the induced sub-graph, without
/// allocating per clique. `scratch` is reused between calls.
pub(crate) fn for_each_maximal_clique(
    members_per_part: &[Vec<usize>],
    scratch: &mut Vec<VertexId>,
    mut visit: impl FnMut(&[VertexId]),
) {
    let active: Vec<(usize, &Vec<usize>)> = members_per_part
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_empty())
        .collect();
    if active.is_empty() {
        return;
    }
    let mut cursor = alloc::vec![0usize; active.len()];
    loop {
        scratch.clear();
        scratch.extend(
            cursor
                .iter()
                .zip(&active)
                .map(|(&pos, &(part, list))| VertexId::new(part, list[pos])),
        );
        visit(scratch);
        let mut i = cursor.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            cursor[i] += 1;
            if cursor[i] < active[i].1.len() {
                break;
            }
            cursor[i] = 0;
        }
    }
}
