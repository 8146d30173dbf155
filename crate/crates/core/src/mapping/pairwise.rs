//! Pairwise Hungarian label mapping with turn-level merging.
//!
//! Hypotheses are folded left to right: at each step a bipartite assignment
//! matches the speakers of the next hypothesis against the running merged
//! hypothesis, matched speakers join that clique and the underlying turns
//! are merged (interval union, never weight addition), and edge weights for
//! the following step are recomputed from the merged turns on the fly. The
//! whole pass is linear in the number of hypotheses.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{hungarian_assign, MappingError};
use crate::graph::{overlap_weight, MappingGraph, Partition, VertexId, WeightMode};
use crate::hypothesis::Hypothesis;
use crate::scoring::{compute_der, ScoreOptions};

/// Result of [`map_labels_pairwise`]: the partition over the input vertices
/// plus the hypothesis processing order that produced it (identity unless
/// error-rate sorting was requested).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairwiseMapping {
    pub partition: Partition,
    pub order: Vec<usize>,
}

/// Relabels both hypotheses through `mapping` (labels not in the map stay as
/// they are) and merges the results into one normalized hypothesis: turns of
/// speakers that share an output label are unioned at the interval level.
///
/// Fails if the map sends two speakers of the *same* hypothesis to one
/// label; merging across the two hypotheses is the point.
pub fn merge_hypotheses(
    h1: &Hypothesis,
    h2: &Hypothesis,
    mapping: &BTreeMap<String, String>,
) -> Result<Hypothesis, MappingError> {
    for hyp in [h1, h2] {
        let mut outputs: BTreeMap<&str, &str> = BTreeMap::new();
        for speaker in hyp.speakers() {
            let output = mapping.get(speaker).map_or(speaker.as_str(), |m| m.as_str());
            if let Some(previous) = outputs.insert(output, speaker) {
                return Err(MappingError::MapCollision {
                    a: previous.into(),
                    b: speaker.clone(),
                });
            }
        }
    }
    let rename = |map: &BTreeMap<String, String>, label: &str| -> String {
        map.get(label).cloned().unwrap_or_else(|| label.into())
    };
    let mut turns = h1.relabeled(|s| rename(mapping, s)).turns().to_vec();
    turns.extend(h2.relabeled(|s| rename(mapping, s)).turns().to_vec());
    Ok(Hypothesis::new(h1.recording_id(), turns)?)
}

/// Orders hypotheses by their mean error rate when scored against every
/// other hypothesis as reference, ascending; ties keep the input order.
pub fn sort_by_avg_der(hypotheses: &[Hypothesis]) -> Result<Vec<usize>, MappingError> {
    let mut scored: Vec<(f64, usize)> = Vec::with_capacity(hypotheses.len());
    for (k, hypothesis) in hypotheses.iter().enumerate() {
        let mut total = 0.0;
        for (j, reference) in hypotheses.iter().enumerate() {
            if j != k {
                total += compute_der(reference, hypothesis, &ScoreOptions::default())?.der();
            }
        }
        scored.push((total / (hypotheses.len() - 1) as f64, k));
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0)); // stable, ties keep order
    Ok(scored.into_iter().map(|(_, k)| k).collect())
}

/// Pairwise label mapping over an ensemble of hypotheses for one recording.
///
/// With `sort` set, hypotheses are processed in ascending average-error
/// order (the partition still refers to the original indexes). The running
/// merged hypothesis carries one speaker per clique; its activity is the
/// union of all turns mapped there so far, and each step's assignment matrix
/// is computed fresh from it.
pub fn map_labels_pairwise(
    hypotheses: &[Hypothesis],
    mode: WeightMode,
    sort: bool,
) -> Result<PairwiseMapping, MappingError> {
    if hypotheses.len() < 2 {
        return Err(MappingError::Graph(crate::graph::GraphError::NotEnoughParts(
            hypotheses.len(),
        )));
    }
    for (index, hypothesis) in hypotheses.iter().enumerate() {
        if hypothesis.speaker_count() == 0 {
            return Err(MappingError::Graph(crate::graph::GraphError::EmptyPart {
                index,
            }));
        }
    }

    let order = if sort {
        sort_by_avg_der(hypotheses)?
    } else {
        (0..hypotheses.len()).collect()
    };

    // clique labels live in their own namespace so incoming speaker names
    // can never capture them
    let clique_label = |c: usize| format!("c{c}");

    let first = &hypotheses[order[0]];
    let mut assignment: BTreeMap<VertexId, usize> = BTreeMap::new();
    for member in 0..first.speaker_count() {
        assignment.insert(VertexId::new(order[0], member), member);
    }
    let mut merged = first.relabeled(|label| {
        let member = first.speakers().iter().position(|s| s == label).unwrap();
        clique_label(member)
    });
    let mut clique_count = first.speaker_count();

    for &k in &order[1..] {
        let incoming = hypotheses[k].relabeled(|label| format!("in:{label}"));
        let incoming_activity = incoming.speaker_activity();
        let matrix: Vec<Vec<f64>> = (0..clique_count)
            .map(|c| {
                let clique_activity = merged
                    .active_intervals(&clique_label(c))
                    .expect("every clique label is present in the merged hypothesis");
                incoming_activity
                    .iter()
                    .map(|speaker| overlap_weight(&clique_activity, speaker, mode))
                    .collect()
            })
            .collect();

        // rows are cliques, columns the incoming speakers; every column that
        // the assignment leaves unmatched opens a fresh clique
        let local = hungarian_assign(&matrix)?;
        let mut column_to_clique: Vec<Option<usize>> =
            alloc::vec![None; incoming.speaker_count()];
        for (row, column) in local.pairs() {
            column_to_clique[column] = Some(row);
        }
        let mut mapping: BTreeMap<String, String> = BTreeMap::new();
        for (column, speaker) in incoming.speakers().iter().enumerate() {
            let clique = column_to_clique[column].unwrap_or_else(|| {
                let fresh = clique_count;
                clique_count += 1;
                fresh
            });
            mapping.insert(speaker.clone(), clique_label(clique));
            assignment.insert(VertexId::new(k, column), clique);
        }
        merged = merge_hypotheses(&merged, &incoming, &mapping)?;
    }

    let mut cliques: Vec<Vec<VertexId>> = alloc::vec![Vec::new(); clique_count];
    for (vertex, clique) in assignment {
        cliques[clique].push(vertex);
    }
    Ok(PairwiseMapping {
        partition: Partition::new(cliques),
        order,
    })
}

/// Pairwise label mapping directly on a weighted graph. Where the
/// hypothesis-level mapper merges speaker turns, this variant re-estimates a
/// merged vertex's edges by *adding* the weights of its members' edges —
/// the right semantics for arbitrary weight functions, and the one whose
/// cover weight is guaranteed to reach `w(G) / C`.
pub fn map_labels_pairwise_graph(graph: &MappingGraph) -> Result<Partition, MappingError> {
    let k = graph.part_count();
    let mut cliques: Vec<Vec<VertexId>> = (0..graph.part_size(0))
        .map(|member| alloc::vec![VertexId::new(0, member)])
        .collect();

    for part in 1..k {
        let matrix: Vec<Vec<f64>> = cliques
            .iter()
            .map(|clique| {
                (0..graph.part_size(part))
                    .map(|j| {
                        clique
                            .iter()
                            .map(|&u| graph.weight(u, VertexId::new(part, j)))
                            .sum()
                    })
                    .collect()
            })
            .collect();
        let local = hungarian_assign(&matrix)?;
        let mut clique_of_column: Vec<Option<usize>> = alloc::vec![None; graph.part_size(part)];
        for (row, column) in local.pairs() {
            clique_of_column[column] = Some(row);
        }
        for (j, clique) in clique_of_column.into_iter().enumerate() {
            let vertex = VertexId::new(part, j);
            match clique {
                Some(c) => cliques[c].push(vertex),
                None => cliques.push(alloc::vec![vertex]),
            }
        }
    }

    Ok(Partition::new(cliques))
}
