//! RTTM (Rich Transcription Time Marked) reading and writing.
//!
//! Only `SPEAKER` records are meaningful here:
//!
//! ```text
//! SPEAKER <recording> <channel> <onset> <duration> <NA> <NA> <speaker> <NA> [<NA>]
//! ```
//!
//! Lines starting with `;;` are comments. Onsets and durations are seconds;
//! they are quantized to whole milliseconds on parse (turns shorter than half
//! a millisecond vanish) and rendered back with three decimals, so a write
//! followed by a parse reproduces the hypothesis exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use diacomb::{Hypothesis, Millis, SpeakerTurn};

#[derive(Debug, thiserror::Error)]
pub enum RttmError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Hypothesis(#[from] diacomb::hypothesis::HypothesisError),
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Parses one RTTM document into one hypothesis per recording id. An empty
/// document gives an empty map.
pub fn parse_rttm(text: &str) -> Result<BTreeMap<String, Hypothesis>, RttmError> {
    let mut turns: BTreeMap<String, Vec<SpeakerTurn>> = BTreeMap::new();
    for (number, raw) in text.lines().enumerate() {
        let line = number + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with(";;") {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() < 9 {
            return Err(RttmError::Parse {
                line,
                reason: format!("expected at least 9 fields, found {}", fields.len()),
            });
        }
        if fields[0] != "SPEAKER" {
            return Err(RttmError::Parse {
                line,
                reason: format!("unsupported record type '{}'", fields[0]),
            });
        }
        let onset: f64 = fields[3].parse().map_err(|_| RttmError::Parse {
            line,
            reason: format!("onset '{}' is not a number", fields[3]),
        })?;
        let duration: f64 = fields[4].parse().map_err(|_| RttmError::Parse {
            line,
            reason: format!("duration '{}' is not a number", fields[4]),
        })?;
        if !duration.is_finite() || duration <= 0.0 {
            return Err(RttmError::Parse {
                line,
                reason: format!("duration must be positive, got {}", fields[4]),
            });
        }
        let onset = Millis::from_seconds(onset).ok_or_else(|| RttmError::Parse {
            line,
            reason: format!("onset must be non-negative, got {}", fields[3]),
        })?;
        let duration = Millis::from_seconds(duration).ok_or_else(|| RttmError::Parse {
            line,
            reason: format!("duration '{}' is out of range", fields[4]),
        })?;
        if duration == Millis::ZERO {
            // shorter than the millisecond grid
            continue;
        }
        turns
            .entry(fields[1].to_string())
            .or_default()
            .push(SpeakerTurn::new(fields[7], onset, duration));
    }

    let mut hypotheses = BTreeMap::new();
    for (recording, turns) in turns {
        let hypothesis = Hypothesis::new(recording.clone(), turns)?;
        hypotheses.insert(recording, hypothesis);
    }
    Ok(hypotheses)
}

/// Renders a hypothesis back to RTTM text, one `SPEAKER` line per turn,
/// sorted by (onset, speaker), channel fixed to `1`.
pub fn write_rttm(hypothesis: &Hypothesis) -> String {
    let mut out = String::new();
    for turn in hypothesis.turns() {
        let _ = writeln!(
            out,
            "SPEAKER {} 1 {} {} <NA> <NA> {} <NA> <NA>",
            hypothesis.recording_id(),
            turn.onset,
            turn.duration,
            turn.speaker
        );
    }
    out
}

/// Renders several hypotheses (for instance one per recording) into one
/// document, in the order given.
pub fn write_rttm_all<'a>(hypotheses: impl IntoIterator<Item = &'a Hypothesis>) -> String {
    hypotheses.into_iter().map(write_rttm).collect()
}

/// Reads and parses an RTTM file.
pub fn read_rttm_file(path: &Path) -> Result<BTreeMap<String, Hypothesis>, RttmError> {
    let text = std::fs::read_to_string(path).map_err(|source| RttmError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_rttm(&text)
}
