//! Region-wise weighted voting over mapped hypotheses.
//!
//! After label mapping, every hypothesis speaks the same label language, so
//! the timeline can be cut into regions at turn boundaries and each region
//! voted independently: estimate how many speakers are active, then emit the
//! labels with the highest summed hypothesis weight. Vote weights are exact
//! integer rationals, so outcomes never depend on float rounding.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::graph::{Partition, VertexId};
use crate::hypothesis::{Hypothesis, SpeakerTurn};
use crate::intervals::IntervalSet;
use crate::time::Millis;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VotingError {
    #[error("speaker '{speaker}' of hypothesis {part} (vertex {vertex}) is not covered by the partition")]
    MissingVertex {
        part: usize,
        speaker: String,
        vertex: VertexId,
    },
    #[error("voting needs at least 2 hypotheses, got {0}")]
    NotEnoughHypotheses(usize),
    #[error("recording id mismatch: '{first}' vs '{other}'")]
    RecordingMismatch { first: String, other: String },
}

/// Voting weights. Uniform by default; with `rank_weighting` hypothesis `k`
/// (0-based input position) weighs `1/(k+1)`, normalized — pass hypotheses
/// in their quality order for that to mean anything. Count ties (x.5)
/// round up; label ties resolve by label order (length, then lexicographic).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VoteConfig {
    pub rank_weighting: bool,
}

/// Renames every speaker to the 1-based index of its clique, so all
/// hypotheses share one label space. Cliques holding no real vertex are
/// skipped when numbering; turn timings are untouched.
pub fn apply_partition(
    hypotheses: &[Hypothesis],
    partition: &Partition,
) -> Result<Vec<Hypothesis>, VotingError> {
    // number only the cliques that carry real vertices
    let mut label_of_clique: BTreeMap<usize, String> = BTreeMap::new();
    let mut next = 0usize;
    for (c, clique) in partition.cliques().iter().enumerate() {
        let has_real = clique.iter().any(|v| {
            v.part < hypotheses.len() && v.member < hypotheses[v.part].speaker_count()
        });
        if has_real {
            next += 1;
            label_of_clique.insert(c, next.to_string());
        }
    }

    let clique_of = partition.clique_index();
    let mut relabeled = Vec::with_capacity(hypotheses.len());
    for (part, hypothesis) in hypotheses.iter().enumerate() {
        let mut rename: BTreeMap<&str, &str> = BTreeMap::new();
        for (member, speaker) in hypothesis.speakers().iter().enumerate() {
            let vertex = VertexId::new(part, member);
            let clique = clique_of
                .get(&vertex)
                .ok_or_else(|| VotingError::MissingVertex {
                    part,
                    speaker: speaker.clone(),
                    vertex,
                })?;
            rename.insert(speaker.as_str(), label_of_clique[clique].as_str());
        }
        relabeled.push(hypothesis.relabeled(|s| rename[s].to_string()));
    }
    Ok(relabeled)
}

/// Combines relabeled hypotheses into one consensus hypothesis.
///
/// The timeline is split into regions at every turn boundary. Per region,
/// the estimated speaker count is the weighted mean of the hypotheses'
/// active-label counts (rounded, halves up), and that many labels are
/// emitted in descending vote order. Adjacent same-label regions merge in
/// normalization.
pub fn combine(
    relabeled: &[Hypothesis],
    config: &VoteConfig,
) -> Result<Hypothesis, VotingError> {
    if relabeled.len() < 2 {
        return Err(VotingError::NotEnoughHypotheses(relabeled.len()));
    }
    let recording_id = relabeled[0].recording_id().to_string();
    for hypothesis in relabeled {
        if hypothesis.recording_id() != recording_id {
            return Err(VotingError::RecordingMismatch {
                first: recording_id,
                other: hypothesis.recording_id().to_string(),
            });
        }
    }

    // weight of hypothesis k as an exact fraction scale_k / denominator
    let scales: Vec<u128> = if config.rank_weighting {
        let lcm = (1..=relabeled.len() as u128).fold(1u128, lcm);
        (1..=relabeled.len() as u128).map(|rank| lcm / rank).collect()
    } else {
        alloc::vec![1u128; relabeled.len()]
    };
    let denominator: u128 = scales.iter().sum();

    // (hypothesis, label) activity, plus the set of boundaries
    let mut activity: Vec<BTreeMap<&str, IntervalSet>> = Vec::with_capacity(relabeled.len());
    let mut boundaries: BTreeSet<Millis> = BTreeSet::new();
    for hypothesis in relabeled {
        let mut per_label = BTreeMap::new();
        for (label, set) in hypothesis
            .speakers()
            .iter()
            .zip(hypothesis.speaker_activity())
        {
            for &(start, end) in set.spans() {
                boundaries.insert(start);
                boundaries.insert(end);
            }
            per_label.insert(label.as_str(), set);
        }
        activity.push(per_label);
    }

    let boundaries: Vec<Millis> = boundaries.into_iter().collect();
    let mut emitted: BTreeMap<&str, Vec<(Millis, Millis)>> = BTreeMap::new();
    for window in boundaries.windows(2) {
        let (start, end) = (window[0], window[1]);
        // weighted active-label counts and per-label scores
        let mut count_sum: u128 = 0;
        let mut scores: BTreeMap<&str, u128> = BTreeMap::new();
        for (hyp_activity, &scale) in activity.iter().zip(&scales) {
            for (&label, set) in hyp_activity {
                if set.contains(start) {
                    count_sum += scale;
                    *scores.entry(label).or_insert(0) += scale;
                }
            }
        }
        if count_sum == 0 {
            continue;
        }
        // round(count_sum / denominator) with halves up
        let estimated = ((2 * count_sum + denominator) / (2 * denominator)) as usize;
        if estimated == 0 {
            continue;
        }
        let mut ranked: Vec<(&str, u128)> = scores.into_iter().collect();
        ranked.sort_by(|(label_a, score_a), (label_b, score_b)| {
            score_b
                .cmp(score_a)
                .then_with(|| label_order(label_a, label_b))
        });
        for &(label, _) in ranked.iter().take(estimated) {
            emitted.entry(label).or_default().push((start, end));
        }
    }

    let mut turns = Vec::new();
    for (label, spans) in emitted {
        for &(start, end) in IntervalSet::from_spans(spans).spans() {
            turns.push(SpeakerTurn::new(label, start, end - start));
        }
    }
    Ok(Hypothesis::new(recording_id, turns).expect("voted spans are valid turns"))
}

/// Shorter labels first, then lexicographic: numeric order for the canonical
/// clique labels.
fn label_order(a: &str, b: &str) -> core::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn lcm(a: u128, b: u128) -> u128 {
    a / gcd(a, b) * b
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
