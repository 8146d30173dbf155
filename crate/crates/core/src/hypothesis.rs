//! Diarization hypotheses: labeled speaker turns for one recording.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::intervals::IntervalSet;
use crate::time::Millis;

/// One labeled speech interval from one hypothesis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpeakerTurn {
    pub speaker: String,
    pub onset: Millis,
    pub duration: Millis,
}

impl SpeakerTurn {
    pub fn new(speaker: impl Into<String>, onset: Millis, duration: Millis) -> Self {
        Self {
            speaker: speaker.into(),
            onset,
            duration,
        }
    }

    pub fn end(&self) -> Millis {
        self.onset + self.duration
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HypothesisError {
    #[error("turn for speaker '{speaker}' has non-positive duration {duration}")]
    NonPositiveDuration { speaker: String, duration: Millis },
    #[error("turn for speaker '{speaker}' has negative onset {onset}")]
    NegativeOnset { speaker: String, onset: Millis },
    #[error("unknown speaker '{0}'")]
    UnknownSpeaker(String),
}

/// One system's output for one recording, held in normalized form: turns of
/// the same speaker are pairwise disjoint (overlapping or touching turns are
/// merged) and sorted by onset. Turns of *different* speakers may overlap —
/// input is overlap-aware.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypothesis {
    recording_id: String,
    turns: Vec<SpeakerTurn>,
    speakers: Vec<String>,
}

impl Hypothesis {
    /// Validates and normalizes a set of turns. Normalizing twice is a no-op.
    pub fn new(
        recording_id: impl Into<String>,
        turns: Vec<SpeakerTurn>,
    ) -> Result<Self, HypothesisError> {
        for turn in &turns {
            if turn.duration <= Millis::ZERO {
                return Err(HypothesisError::NonPositiveDuration {
                    speaker: turn.speaker.clone(),
                    duration: turn.duration,
                });
            }
            if turn.onset < Millis::ZERO {
                return Err(HypothesisError::NegativeOnset {
                    speaker: turn.speaker.clone(),
                    onset: turn.onset,
                });
            }
        }

        let mut by_speaker: BTreeMap<String, Vec<(Millis, Millis)>> = BTreeMap::new();
        for turn in turns {
            by_speaker
                .entry(turn.speaker)
                .or_default()
                .push((turn.onset, turn.onset + turn.duration));
        }

        let mut normalized = Vec::new();
        let mut speakers = Vec::with_capacity(by_speaker.len());
        for (speaker, spans) in by_speaker {
            let merged = IntervalSet::from_spans(spans);
            for &(start, end) in merged.spans() {
                normalized.push(SpeakerTurn::new(speaker.clone(), start, end - start));
            }
            speakers.push(speaker);
        }
        normalized.sort_by(|a, b| (a.onset, &a.speaker).cmp(&(b.onset, &b.speaker)));

        Ok(Self {
            recording_id: recording_id.into(),
            turns: normalized,
            speakers,
        })
    }

    pub fn empty(recording_id: impl Into<String>) -> Self {
        Self {
            recording_id: recording_id.into(),
            turns: Vec::new(),
            speakers: Vec::new(),
        }
    }

    pub fn recording_id(&self) -> &str {
        &self.recording_id
    }

    pub fn turns(&self) -> &[SpeakerTurn] {
        &self.turns
    }

    /// Distinct speaker labels, sorted. The position of a label in this slice
    /// is its vertex member index when a mapping graph is built.
    pub fn speakers(&self) -> &[String] {
        &self.speakers
    }

    pub fn speaker_count(&self) -> usize {
        self.speakers.len()
    }

    /// Union of the given speaker's turns as a disjoint interval set.
    pub fn active_intervals(&self, speaker: &str) -> Result<IntervalSet, HypothesisError> {
        if !self.speakers.iter().any(|s| s == speaker) {
            return Err(HypothesisError::UnknownSpeaker(speaker.to_string()));
        }
        Ok(IntervalSet::from_spans(
            self.turns
                .iter()
                .filter(|t| t.speaker == speaker)
                .map(|t| (t.onset, t.end())),
        ))
    }

    /// Activity sets for all speakers, aligned with [`Self::speakers`].
    pub fn speaker_activity(&self) -> Vec<IntervalSet> {
        let mut sets: BTreeMap<&str, Vec<(Millis, Millis)>> = self
            .speakers
            .iter()
            .map(|s| (s.as_str(), Vec::new()))
            .collect();
        for turn in &self.turns {
            sets.get_mut(turn.speaker.as_str())
                .expect("turn speaker is registered")
                .push((turn.onset, turn.end()));
        }
        self.speakers
            .iter()
            .map(|s| IntervalSet::from_spans(sets.remove(s.as_str()).unwrap_or_default()))
            .collect()
    }

    /// Rewrites every speaker label through `rename`. Labels that collide
    /// after renaming are merged by normalization.
    pub fn relabeled(&self, mut rename: impl FnMut(&str) -> String) -> Self {
        let turns = self
            .turns
            .iter()
            .map(|t| SpeakerTurn::new(rename(&t.speaker), t.onset, t.duration))
            .collect();
        Self::new(self.recording_id.clone(), turns).expect("relabeling preserves turn validity")
    }
}
