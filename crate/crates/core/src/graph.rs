//! The K-partite label-mapping graph and its partition objective.
//!
//! Each hypothesis contributes one independent set of vertices (its
//! speakers); every pair of vertices from different hypotheses is joined by
//! an edge weighted by the temporal overlap of the two speakers. Label
//! mapping then asks for an orthogonal clique partition of maximum total
//! intra-clique weight.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

use crate::hypothesis::Hypothesis;
use crate::time::Millis;

/// Vertex `member` of independent set `part`: speaker `member` (in sorted
/// label order) of hypothesis `part`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId {
    pub part: usize,
    pub member: usize,
}

impl VertexId {
    pub const fn new(part: usize, member: usize) -> Self {
        Self { part, member }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.part, self.member)
    }
}

/// How edge weights are derived from speaker activity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WeightMode {
    /// Jaccard overlap `|a ∩ b| / |a ∪ b|`, in `[0, 1]`; `0/0` counts as 0.
    #[default]
    Relative,
    /// Raw overlap duration in seconds.
    Absolute,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("need at least 2 hypotheses, got {0}")]
    NotEnoughParts(usize),
    #[error("recording id mismatch: '{first}' vs '{other}'")]
    RecordingMismatch { first: String, other: String },
    #[error("hypothesis {index} has no speakers")]
    EmptyPart { index: usize },
    #[error("edge weight for ({u}, {v}) is not a finite non-negative number")]
    InvalidWeight { u: VertexId, v: VertexId },
    #[error("vertex {0} does not exist in this graph")]
    UnknownVertex(VertexId),
    #[error("vertex {0} appears in more than one clique")]
    DuplicateVertex(VertexId),
    #[error("clique {clique} holds two vertices from part {part}")]
    NotOrthogonal { clique: usize, part: usize },
    #[error("vertex {0} is not covered by the partition")]
    NotCovering(VertexId),
}

/// The weighted K-partite graph built from an ensemble of hypotheses (or
/// from synthetic weights). Immutable once constructed.
#[derive(Clone, Debug, PartialEq)]
pub struct MappingGraph {
    part_sizes: Vec<usize>,
    /// First dummy member index per part; everything below is a real vertex.
    real_sizes: Vec<usize>,
    offsets: Vec<usize>,
    /// Dense symmetric weight matrix over global vertex indices. Entries
    /// within a part are never written and stay 0.
    weights: Vec<f64>,
    recording_id: Option<String>,
}

impl MappingGraph {
    /// Builds the mapping graph of an ensemble. Vertex `(k, i)` is the `i`-th
    /// speaker (sorted label order) of `hypotheses[k]`.
    pub fn from_hypotheses(
        hypotheses: &[Hypothesis],
        mode: WeightMode,
    ) -> Result<Self, GraphError> {
        if hypotheses.len() < 2 {
            return Err(GraphError::NotEnoughParts(hypotheses.len()));
        }
        for (index, hyp) in hypotheses.iter().enumerate() {
            if hyp.recording_id() != hypotheses[0].recording_id() {
                return Err(GraphError::RecordingMismatch {
                    first: hypotheses[0].recording_id().into(),
                    other: hyp.recording_id().into(),
                });
            }
            if hyp.speaker_count() == 0 {
                return Err(GraphError::EmptyPart { index });
            }
        }

        let activity: Vec<Vec<crate::intervals::IntervalSet>> =
            hypotheses.iter().map(|h| h.speaker_activity()).collect();
        let part_sizes: Vec<usize> = hypotheses.iter().map(|h| h.speaker_count()).collect();

        let mut graph = Self::zeroed(&part_sizes, Some(hypotheses[0].recording_id().into()));
        for k in 0..part_sizes.len() {
            for kk in (k + 1)..part_sizes.len() {
                for i in 0..part_sizes[k] {
                    for j in 0..part_sizes[kk] {
                        let w = overlap_weight(&activity[k][i], &activity[kk][j], mode);
                        graph.set_weight(VertexId::new(k, i), VertexId::new(kk, j), w);
                    }
                }
            }
        }
        Ok(graph)
    }

    /// Builds a graph from explicit part sizes and a weight function, called
    /// once per cross-part vertex pair with `u.part < v.part`. Used for
    /// synthetic instances.
    pub fn from_weight_fn(
        part_sizes: &[usize],
        mut weight: impl FnMut(VertexId, VertexId) -> f64,
    ) -> Result<Self, GraphError> {
        if part_sizes.len() < 2 {
            return Err(GraphError::NotEnoughParts(part_sizes.len()));
        }
        if let Some(index) = part_sizes.iter().position(|&s| s == 0) {
            return Err(GraphError::EmptyPart { index });
        }
        let mut graph = Self::zeroed(part_sizes, None);
        for k in 0..part_sizes.len() {
            for kk in (k + 1)..part_sizes.len() {
                for i in 0..part_sizes[k] {
                    for j in 0..part_sizes[kk] {
                        let u = VertexId::new(k, i);
                        let v = VertexId::new(kk, j);
                        let w = weight(u, v);
                        if !w.is_finite() || w < 0.0 {
                            return Err(GraphError::InvalidWeight { u, v });
                        }
                        graph.set_weight(u, v, w);
                    }
                }
            }
        }
        Ok(graph)
    }

    fn zeroed(part_sizes: &[usize], recording_id: Option<String>) -> Self {
        let mut offsets = Vec::with_capacity(part_sizes.len());
        let mut total = 0;
        for &size in part_sizes {
            offsets.push(total);
            total += size;
        }
        Self {
            part_sizes: part_sizes.to_vec(),
            real_sizes: part_sizes.to_vec(),
            offsets,
            weights: vec![0.0; total * total],
            recording_id,
        }
    }

    fn global_index(&self, v: VertexId) -> usize {
        self.offsets[v.part] + v.member
    }

    fn set_weight(&mut self, u: VertexId, v: VertexId, w: f64) {
        let (a, b) = (self.global_index(u), self.global_index(v));
        let n = self.vertex_count();
        self.weights[a * n + b] = w;
        self.weights[b * n + a] = w;
    }

    /// Number of parts (hypotheses), `K`.
    pub fn part_count(&self) -> usize {
        self.part_sizes.len()
    }

    pub fn part_sizes(&self) -> &[usize] {
        &self.part_sizes
    }

    pub fn part_size(&self, part: usize) -> usize {
        self.part_sizes[part]
    }

    /// Largest part size, `C`.
    pub fn max_part_size(&self) -> usize {
        self.part_sizes.iter().copied().max().unwrap_or(0)
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.last().map_or(0, |o| o + self.part_sizes[self.part_sizes.len() - 1])
    }

    /// True when every part has exactly `C` vertices.
    pub fn is_complete(&self) -> bool {
        let c = self.max_part_size();
        self.part_sizes.iter().all(|&s| s == c)
    }

    pub fn is_dummy(&self, v: VertexId) -> bool {
        v.member >= self.real_sizes[v.part]
    }

    pub fn recording_id(&self) -> Option<&str> {
        self.recording_id.as_deref()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.part < self.part_sizes.len() && v.member < self.part_sizes[v.part]
    }

    /// Weight of the edge between two vertices of *different* parts.
    pub fn weight(&self, u: VertexId, v: VertexId) -> f64 {
        debug_assert!(u.part != v.part, "no edges within a part");
        let n = self.vertex_count();
        self.weights[self.global_index(u) * n + self.global_index(v)]
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.part_sizes
            .iter()
            .enumerate()
            .flat_map(|(part, &size)| (0..size).map(move |member| VertexId::new(part, member)))
    }

    /// All cross-part vertex pairs `(u, v)` with `u.part < v.part`, in
    /// lexicographic order, with their weights. Zero-weight edges included.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, f64)> + '_ {
        let parts = self.part_sizes.len();
        (0..parts).flat_map(move |k| {
            ((k + 1)..parts).flat_map(move |kk| {
                (0..self.part_sizes[k]).flat_map(move |i| {
                    (0..self.part_sizes[kk]).map(move |j| {
                        let u = VertexId::new(k, i);
                        let v = VertexId::new(kk, j);
                        (u, v, self.weight(u, v))
                    })
                })
            })
        })
    }

    /// Total edge weight `w(G)`.
    pub fn total_weight(&self) -> f64 {
        self.edges().map(|(_, _, w)| w).sum()
    }

    /// Balances all parts to `C` vertices by appending dummy vertices whose
    /// incident edges weigh 0. Partition weights over real vertices are
    /// unchanged. Returns the graph as-is if it is already complete.
    pub fn pad_to_complete(&self) -> MappingGraph {
        if self.is_complete() {
            return self.clone();
        }
        let c = self.max_part_size();
        let padded_sizes: Vec<usize> = self.part_sizes.iter().map(|_| c).collect();
        let mut padded = Self::zeroed(&padded_sizes, self.recording_id.clone());
        padded.real_sizes = self.real_sizes.clone();
        for (u, v, w) in self.edges() {
            padded.set_weight(u, v, w);
        }
        padded
    }

    /// Plain-text edge list, one `k.i k'.j weight` line per edge.
    pub fn edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v, w) in self.edges() {
            let _ = writeln!(out, "{u} {v} {w}");
        }
        out
    }
}

pub(crate) fn overlap_weight(
    a: &crate::intervals::IntervalSet,
    b: &crate::intervals::IntervalSet,
    mode: WeightMode,
) -> f64 {
    let inter = a.intersection(b).total();
    match mode {
        WeightMode::Absolute => inter.seconds_f64(),
        WeightMode::Relative => {
            // |a ∪ b| = |a| + |b| - |a ∩ b|, exact in milliseconds
            let union = a.total() + b.total() - inter;
            if union == Millis::ZERO {
                0.0
            } else {
                inter.as_ms() as f64 / union.as_ms() as f64
            }
        }
    }
}

/// An orthogonal clique set: disjoint vertex groups, each holding at most one
/// vertex per part. Produced by the label-mapping algorithms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    cliques: Vec<Vec<VertexId>>,
}

impl Partition {
    /// Keeps clique order, sorts each clique internally, drops empty cliques.
    pub fn new(cliques: Vec<Vec<VertexId>>) -> Self {
        let mut cliques: Vec<Vec<VertexId>> =
            cliques.into_iter().filter(|c| !c.is_empty()).collect();
        for clique in &mut cliques {
            clique.sort_unstable();
        }
        Self { cliques }
    }

    pub fn cliques(&self) -> &[Vec<VertexId>] {
        &self.cliques
    }

    pub fn clique_count(&self) -> usize {
        self.cliques.len()
    }

    /// Lookup table vertex → clique index.
    pub fn clique_index(&self) -> BTreeMap<VertexId, usize> {
        let mut map = BTreeMap::new();
        for (c, clique) in self.cliques.iter().enumerate() {
            for &v in clique {
                map.insert(v, c);
            }
        }
        map
    }

    /// Checks the partition against a graph: every listed vertex exists, no
    /// vertex appears twice, cliques are orthogonal (at most one vertex per
    /// part), and every non-dummy vertex is covered. Dummy vertices may be
    /// included or left out.
    pub fn validate(&self, graph: &MappingGraph) -> Result<(), GraphError> {
        let mut seen: BTreeMap<VertexId, ()> = BTreeMap::new();
        for (c, clique) in self.cliques.iter().enumerate() {
            let mut parts_here: Vec<usize> = Vec::with_capacity(clique.len());
            for &v in clique {
                if !graph.contains(v) {
                    return Err(GraphError::UnknownVertex(v));
                }
                if seen.insert(v, ()).is_some() {
                    return Err(GraphError::DuplicateVertex(v));
                }
                if parts_here.contains(&v.part) {
                    return Err(GraphError::NotOrthogonal { clique: c, part: v.part });
                }
                parts_here.push(v.part);
            }
        }
        for v in graph.vertices() {
            if !graph.is_dummy(v) && !seen.contains_key(&v) {
                return Err(GraphError::NotCovering(v));
            }
        }
        Ok(())
    }

    /// Restriction to the real vertices of `graph`: drops dummy and
    /// out-of-range members, then empty cliques. Useful after mapping on a
    /// padded graph.
    pub fn restrict_to_real(&self, graph: &MappingGraph) -> Partition {
        Partition::new(
            self.cliques
                .iter()
                .map(|clique| {
                    clique
                        .iter()
                        .copied()
                        .filter(|&v| graph.contains(v) && !graph.is_dummy(v))
                        .collect()
                })
                .collect(),
        )
    }
}

/// The partition objective: total weight of edges inside cliques,
/// `w(Φ) = Σ_c Σ_{e ∈ E(V_c)} w(e)`. Validates the partition first.
pub fn partition_weight(graph: &MappingGraph, partition: &Partition) -> Result<f64, GraphError> {
    partition.validate(graph)?;
    let mut total = 0.0;
    for clique in partition.cliques() {
        for (i, &u) in clique.iter().enumerate() {
            for &v in &clique[i + 1..] {
                total += graph.weight(u, v);
            }
        }
    }
    Ok(total)
}

/// Edges whose endpoints do not share a clique (edges incident to an
/// unassigned vertex count as crossing). Complements [`partition_weight`]:
/// the returned weights plus `w(Φ)` account for every edge of the graph.
pub fn cross_clique_edges(
    graph: &MappingGraph,
    partition: &Partition,
) -> Result<Vec<(VertexId, VertexId, f64)>, GraphError> {
    partition.validate(graph)?;
    let index = partition.clique_index();
    Ok(graph
        .edges()
        .filter(|(u, v, _)| match (index.get(u), index.get(v)) {
            (Some(a), Some(b)) => a != b,
            _ => true,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypothesis::SpeakerTurn;

    fn ms(v: i64) -> Millis {
        Millis::from_ms(v)
    }

    fn turn(speaker: &str, start: i64, end: i64) -> SpeakerTurn {
        SpeakerTurn::new(speaker, ms(start), ms(end - start))
    }

    fn hyp(rec: &str, turns: Vec<SpeakerTurn>) -> Hypothesis {
        Hypothesis::new(rec, turns).unwrap()
    }

    #[test]
    fn relative_weights_from_overlap() {
        // H1 = {A:[0,10)}, H2 = {X:[0,5), Y:[5,10)}
        let h1 = hyp("r", vec![turn("A", 0, 10_000)]);
        let h2 = hyp("r", vec![turn("X", 0, 5000), turn("Y", 5000, 10_000)]);
        let g = MappingGraph::from_hypotheses(&[h1, h2], WeightMode::Relative).unwrap();
        assert_eq!(g.weight(VertexId::new(0, 0), VertexId::new(1, 0)), 0.5);
        assert_eq!(g.weight(VertexId::new(0, 0), VertexId::new(1, 1)), 0.5);
    }

    #[test]
    fn identical_speakers_weigh_one() {
        let h1 = hyp("r", vec![turn("A", 0, 10_000)]);
        let h2 = hyp("r", vec![turn("A", 0, 10_000)]);
        let g = MappingGraph::from_hypotheses(&[h1, h2], WeightMode::Relative).unwrap();
        assert_eq!(g.weight(VertexId::new(0, 0), VertexId::new(1, 0)), 1.0);
    }

    #[test]
    fn disjoint_speakers_weigh_zero() {
        let h1 = hyp("r", vec![turn("A", 0, 5000)]);
        let h2 = hyp("r", vec![turn("X", 6000, 9000)]);
        let g = MappingGraph::from_hypotheses(&[h1, h2], WeightMode::Relative).unwrap();
        assert_eq!(g.weight(VertexId::new(0, 0), VertexId::new(1, 0)), 0.0);
    }

    #[test]
    fn absolute_mode_reports_seconds() {
        let h1 = hyp("r", vec![turn("A", 0, 10_000)]);
        let h2 = hyp("r", vec![turn("X", 2000, 5000)]);
        let g = MappingGraph::from_hypotheses(&[h1, h2], WeightMode::Absolute).unwrap();
        assert_eq!(g.weight(VertexId::new(0, 0), VertexId::new(1, 0)), 3.0);
    }

    #[test]
    fn build_rejects_bad_ensembles() {
        let h1 = hyp("r1", vec![turn("A", 0, 1000)]);
        let h2 = hyp("r2", vec![turn("B", 0, 1000)]);
        assert!(matches!(
            MappingGraph::from_hypotheses(&[h1.clone(), h2], WeightMode::Relative),
            Err(GraphError::RecordingMismatch { .. })
        ));
        assert!(matches!(
            MappingGraph::from_hypotheses(&[h1], WeightMode::Relative),
            Err(GraphError::NotEnoughParts(1))
        ));
    }

    #[test]
    fn padding_balances_parts_with_zero_edges() {
        let g = MappingGraph::from_weight_fn(&[2, 1], |_, _| 1.0).unwrap();
        let padded = g.pad_to_complete();
        assert_eq!(padded.part_sizes(), &[2, 2]);
        let dummy = VertexId::new(1, 1);
        assert!(padded.is_dummy(dummy));
        assert_eq!(padded.weight(VertexId::new(0, 0), dummy), 0.0);
        assert_eq!(padded.weight(VertexId::new(0, 1), dummy), 0.0);
        assert_eq!(padded.total_weight(), g.total_weight());
    }

    #[test]
    fn padding_complete_graph_is_identity() {
        let g = MappingGraph::from_weight_fn(&[2, 2], |_, _| 0.25).unwrap();
        assert_eq!(g.pad_to_complete(), g);
    }

    #[test]
    fn padding_preserves_partition_weight() {
        let g = MappingGraph::from_weight_fn(&[2, 1, 2], |u, v| {
            (u.member + v.member + u.part) as f64 * 0.1
        })
        .unwrap();
        let partition = Partition::new(vec![
            vec![VertexId::new(0, 0), VertexId::new(1, 0), VertexId::new(2, 1)],
            vec![VertexId::new(0, 1), VertexId::new(2, 0)],
        ]);
        let before = partition_weight(&g, &partition).unwrap();
        let after = partition_weight(&g.pad_to_complete(), &partition).unwrap();
        assert_eq!(before, after);
    }

    #[test]
    fn partition_weight_sums_clique_edges() {
        // one clique {u,v,t} with pairwise weights 0.2/0.3/0.5, rest singletons
        let g = MappingGraph::from_weight_fn(&[2, 2, 2], |u, v| {
            match (u, v) {
                (VertexId { part: 0, member: 0 }, VertexId { part: 1, member: 0 }) => 0.2,
                (VertexId { part: 0, member: 0 }, VertexId { part: 2, member: 0 }) => 0.3,
                (VertexId { part: 1, member: 0 }, VertexId { part: 2, member: 0 }) => 0.5,
                _ => 0.0,
            }
        })
        .unwrap();
        let partition = Partition::new(vec![
            vec![VertexId::new(0, 0), VertexId::new(1, 0), VertexId::new(2, 0)],
            vec![VertexId::new(0, 1)],
            vec![VertexId::new(1, 1)],
            vec![VertexId::new(2, 1)],
        ]);
        assert_eq!(partition_weight(&g, &partition).unwrap(), 1.0);
        // only intra-clique edges carry weight here, so nothing crosses
        for (_, _, w) in cross_clique_edges(&g, &partition).unwrap() {
            assert_eq!(w, 0.0);
        }
    }

    #[test]
    fn partition_weight_matches_an_independent_summation() {
        // K=3, C=2 with pseudo-random weights: re-derive the objective by
        // filtering the flat edge list through the clique lookup
        let mut counter = 0u32;
        let g = MappingGraph::from_weight_fn(&[2, 2, 2], |_, _| {
            counter += 1;
            (counter as f64 * 0.37).fract()
        })
        .unwrap();
        let partition = Partition::new(vec![
            vec![VertexId::new(0, 0), VertexId::new(1, 1), VertexId::new(2, 0)],
            vec![VertexId::new(0, 1), VertexId::new(1, 0), VertexId::new(2, 1)],
        ]);
        let index = partition.clique_index();
        let expected: f64 = g
            .edges()
            .filter(|(u, v, _)| index[u] == index[v])
            .map(|(_, _, w)| w)
            .sum();
        let got = partition_weight(&g, &partition).unwrap();
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn all_singletons_weigh_zero_and_cross_everything() {
        let g = MappingGraph::from_weight_fn(&[2, 2], |u, v| (1 + u.member + v.member) as f64)
            .unwrap();
        let singletons = Partition::new(g.vertices().map(|v| vec![v]).collect());
        assert_eq!(partition_weight(&g, &singletons).unwrap(), 0.0);
        let cross = cross_clique_edges(&g, &singletons).unwrap();
        assert_eq!(cross.len(), g.edges().count());
    }

    #[test]
    fn cross_weight_complements_partition_weight() {
        let g = MappingGraph::from_weight_fn(&[3, 3, 3], |u, v| {
            ((u.part * 7 + v.part * 3 + u.member * 5 + v.member * 2) % 11) as f64 / 11.0
        })
        .unwrap();
        let partition = Partition::new(vec![
            vec![VertexId::new(0, 0), VertexId::new(1, 2), VertexId::new(2, 1)],
            vec![VertexId::new(0, 1), VertexId::new(1, 0), VertexId::new(2, 2)],
            vec![VertexId::new(0, 2), VertexId::new(1, 1), VertexId::new(2, 0)],
        ]);
        let intra = partition_weight(&g, &partition).unwrap();
        let cross: f64 = cross_clique_edges(&g, &partition)
            .unwrap()
            .iter()
            .map(|(_, _, w)| w)
            .sum();
        let total = g.total_weight();
        assert!((intra + cross - total).abs() < 1e-9 * total.max(1.0));
    }

    #[test]
    fn validation_rejects_bad_partitions() {
        let g = MappingGraph::from_weight_fn(&[2, 2], |_, _| 1.0).unwrap();
        // same part twice in one clique
        let bad = Partition::new(vec![
            vec![VertexId::new(0, 0), VertexId::new(0, 1)],
            vec![VertexId::new(1, 0), VertexId::new(1, 1)],
        ]);
        assert!(matches!(
            bad.validate(&g),
            Err(GraphError::NotOrthogonal { .. })
        ));
        // missing vertex
        let partial = Partition::new(vec![vec![VertexId::new(0, 0), VertexId::new(1, 0)]]);
        assert!(matches!(
            partial.validate(&g),
            Err(GraphError::NotCovering(_))
        ));
        // duplicated vertex
        let dup = Partition::new(vec![
            vec![VertexId::new(0, 0), VertexId::new(1, 0)],
            vec![VertexId::new(0, 1), VertexId::new(1, 0)],
            vec![VertexId::new(1, 1)],
        ]);
        assert!(matches!(dup.validate(&g), Err(GraphError::DuplicateVertex(_))));
    }

    #[test]
    fn edge_list_dump_format() {
        let g = MappingGraph::from_weight_fn(&[1, 1], |_, _| 0.5).unwrap();
        assert_eq!(g.edge_list(), "0.0 1.0 0.5\n");
    }
}
