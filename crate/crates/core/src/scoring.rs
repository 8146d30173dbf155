//! Diarization error rate against a reference, with optimal speaker mapping.
//!
//! Scoring is per-instant with overlap: at every moment the reference and
//! hypothesis speaker counts are compared as multisets under the
//! maximum-overlap speaker mapping. The denominator is total reference
//! speaker time (overlap counted per speaker), so identical inputs score 0
//! and a hypothesis with no speech scores 1.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::hypothesis::Hypothesis;
use crate::intervals::IntervalSet;
use crate::mapping::hungarian_assign;
use crate::time::Millis;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScoringError {
    #[error("reference for recording '{0}' has no scoreable speech; DER is undefined")]
    EmptyReference(String),
    #[error("recording id mismatch: reference '{reference}' vs hypothesis '{hypothesis}'")]
    RecordingMismatch {
        reference: String,
        hypothesis: String,
    },
}

/// Scoring options. The collar removes `± collar` around every reference
/// turn boundary from scoring; overlap regions are always scored.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScoreOptions {
    pub collar: Millis,
}

/// Error decomposition for one (reference, hypothesis) pair. Components are
/// exact milliseconds; ratios are relative to total reference speaker time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DerReport {
    pub missed_speech: Millis,
    pub false_alarm: Millis,
    pub speaker_error: Millis,
    pub total_reference_speech: Millis,
}

impl DerReport {
    pub fn missed_ratio(&self) -> f64 {
        self.ratio(self.missed_speech)
    }

    pub fn false_alarm_ratio(&self) -> f64 {
        self.ratio(self.false_alarm)
    }

    pub fn speaker_error_ratio(&self) -> f64 {
        self.ratio(self.speaker_error)
    }

    /// `(missed + false alarm + speaker error) / total reference speech`.
    pub fn der(&self) -> f64 {
        self.ratio(self.missed_speech + self.false_alarm + self.speaker_error)
    }

    fn ratio(&self, part: Millis) -> f64 {
        part.as_ms() as f64 / self.total_reference_speech.as_ms() as f64
    }
}

/// Maximum-total-overlap assignment of hypothesis speakers to reference
/// speakers. Speakers on the larger side may stay unmatched.
pub fn optimal_speaker_map(
    reference: &Hypothesis,
    hypothesis: &Hypothesis,
) -> Result<BTreeMap<String, String>, ScoringError> {
    let ref_activity = named_activity(reference);
    let hyp_activity = named_activity(hypothesis);
    Ok(overlap_assignment(&ref_activity, &hyp_activity)
        .into_iter()
        .map(|(h, r)| {
            (
                hyp_activity[h].0.clone(),
                ref_activity[r].0.clone(),
            )
        })
        .collect())
}

/// Computes the DER decomposition for a (reference, hypothesis) pair on the
/// same recording.
pub fn compute_der(
    reference: &Hypothesis,
    hypothesis: &Hypothesis,
    options: &ScoreOptions,
) -> Result<DerReport, ScoringError> {
    if reference.recording_id() != hypothesis.recording_id() {
        return Err(ScoringError::RecordingMismatch {
            reference: reference.recording_id().into(),
            hypothesis: hypothesis.recording_id().into(),
        });
    }

    let mut ref_activity = named_activity(reference);
    let mut hyp_activity = named_activity(hypothesis);
    if options.collar > Millis::ZERO {
        let excluded = collar_exclusion(reference, options.collar);
        for (_, set) in ref_activity.iter_mut().chain(hyp_activity.iter_mut()) {
            *set = set.difference(&excluded);
        }
    }

    let total_reference_speech: Millis = ref_activity.iter().map(|(_, s)| s.total()).sum();
    if total_reference_speech == Millis::ZERO {
        return Err(ScoringError::EmptyReference(reference.recording_id().into()));
    }

    // timeline of count deltas: (reference, hypothesis, correctly attributed)
    let mut deltas: BTreeMap<Millis, (i64, i64, i64)> = BTreeMap::new();
    let mut bump = |set: &IntervalSet, pick: usize| {
        for &(start, end) in set.spans() {
            let d = deltas.entry(start).or_default();
            match pick {
                0 => d.0 += 1,
                1 => d.1 += 1,
                _ => d.2 += 1,
            }
            let d = deltas.entry(end).or_default();
            match pick {
                0 => d.0 -= 1,
                1 => d.1 -= 1,
                _ => d.2 -= 1,
            }
        }
    };
    for (_, set) in &ref_activity {
        bump(set, 0);
    }
    for (_, set) in &hyp_activity {
        bump(set, 1);
    }
    for (h, r) in overlap_assignment(&ref_activity, &hyp_activity) {
        bump(&hyp_activity[h].1.intersection(&ref_activity[r].1), 2);
    }

    let mut missed = 0i64;
    let mut false_alarm = 0i64;
    let mut confusion = 0i64;
    let (mut n_ref, mut n_hyp, mut n_correct) = (0i64, 0i64, 0i64);
    let mut previous: Option<Millis> = None;
    for (&at, &(d_ref, d_hyp, d_correct)) in &deltas {
        if let Some(start) = previous {
            let span = (at - start).as_ms();
            missed += span * (n_ref - n_hyp).max(0);
            false_alarm += span * (n_hyp - n_ref).max(0);
            confusion += span * (n_ref.min(n_hyp) - n_correct);
        }
        n_ref += d_ref;
        n_hyp += d_hyp;
        n_correct += d_correct;
        previous = Some(at);
    }

    Ok(DerReport {
        missed_speech: Millis::from_ms(missed),
        false_alarm: Millis::from_ms(false_alarm),
        speaker_error: Millis::from_ms(confusion),
        total_reference_speech,
    })
}

fn named_activity(hypothesis: &Hypothesis) -> Vec<(String, IntervalSet)> {
    hypothesis
        .speakers()
        .iter()
        .cloned()
        .zip(hypothesis.speaker_activity())
        .collect()
}

/// `± collar` around every reference turn boundary.
fn collar_exclusion(reference: &Hypothesis, collar: Millis) -> IntervalSet {
    IntervalSet::from_spans(reference.turns().iter().flat_map(|turn| {
        [
            (turn.onset - collar, turn.onset + collar),
            (turn.end() - collar, turn.end() + collar),
        ]
    }))
}

/// Pairs hypothesis speaker indexes with reference speaker indexes by
/// maximum total overlap. Zero-overlap pairs are pruned from the result.
fn overlap_assignment(
    ref_activity: &[(String, IntervalSet)],
    hyp_activity: &[(String, IntervalSet)],
) -> Vec<(usize, usize)> {
    if ref_activity.is_empty() || hyp_activity.is_empty() {
        return Vec::new();
    }
    let matrix: Vec<Vec<f64>> = hyp_activity
        .iter()
        .map(|(_, h)| {
            ref_activity
                .iter()
                .map(|(_, r)| h.intersection(r).total().as_ms() as f64)
                .collect()
        })
        .collect();
    let assignment = hungarian_assign(&matrix)
        .expect("overlap matrix is rectangular, finite and non-negative");
    assignment
        .pairs()
        .filter(|&(h, r)| matrix[h][r] > 0.0)
        .collect()
}
