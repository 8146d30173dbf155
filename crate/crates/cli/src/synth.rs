//! Synthetic ensembles: a random overlap-aware reference plus noisy copies.
//!
//! Desk-scale stand-in for real system outputs. Every artifact is a pure
//! function of the seed, so generated files are byte-identical across runs.

use diacomb::{Hypothesis, Millis, SpeakerTurn};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Corruption applied to each copy of the reference. `ramp` scales the noise
/// per hypothesis (copy `k` gets `1 + ramp * k`), so an ensemble can mix
/// clean and sloppy members; copies are shuffled afterwards, so position
/// carries no information.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseParams {
    /// Maximum boundary shift per turn edge.
    pub jitter: Millis,
    /// Probability of dropping a turn.
    pub p_delete: f64,
    /// Probability (per reference turn) of inserting a spurious turn.
    pub p_insert: f64,
    /// Probability of under-clustering: two speakers collapse into one label.
    pub p_merge: f64,
    /// Probability of over-clustering: one speaker's turns split over two labels.
    pub p_split: f64,
    /// Per-copy noise growth factor.
    pub ramp: f64,
}

impl NoiseParams {
    pub fn silent() -> Self {
        Self {
            jitter: Millis::ZERO,
            p_delete: 0.0,
            p_insert: 0.0,
            p_merge: 0.0,
            p_split: 0.0,
            ramp: 0.0,
        }
    }

    /// Moderate corruption: enough to tell systems apart, mild enough that
    /// voting still helps.
    pub fn moderate() -> Self {
        Self {
            jitter: Millis::from_ms(250),
            p_delete: 0.08,
            p_insert: 0.05,
            p_merge: 0.12,
            p_split: 0.08,
            ramp: 0.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthConfig {
    pub recording_id: String,
    /// Reference speaker count, `C`.
    pub speakers: usize,
    /// Ensemble size, `K`.
    pub hypotheses: usize,
    pub duration: Millis,
    pub seed: u64,
    pub noise: NoiseParams,
}

impl SynthConfig {
    pub fn new(speakers: usize, hypotheses: usize, seed: u64) -> Self {
        Self {
            recording_id: "synthetic".into(),
            speakers,
            hypotheses,
            duration: Millis::from_ms(120_000),
            seed,
            noise: NoiseParams::moderate(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthEnsemble {
    pub reference: Hypothesis,
    pub hypotheses: Vec<Hypothesis>,
}

/// Builds the reference and `K` perturbed copies. Copies carry permuted
/// speaker labels (diarization output has no absolute identities) and are
/// shuffled into a random order.
pub fn gen_synthetic(config: &SynthConfig) -> SynthEnsemble {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let reference = gen_reference(
        &config.recording_id,
        config.speakers,
        config.duration,
        &mut rng,
    );
    let mut hypotheses: Vec<Hypothesis> = (0..config.hypotheses)
        .map(|k| {
            let scale = 1.0 + config.noise.ramp * k as f64;
            perturb(&reference, &config.noise, scale, &mut rng)
        })
        .collect();
    hypotheses.shuffle(&mut rng);
    SynthEnsemble {
        reference,
        hypotheses,
    }
}

/// Random overlap-aware reference: each speaker alternates gaps and turns
/// independently, so cross-speaker overlap happens on its own.
pub fn gen_reference(
    recording_id: &str,
    speakers: usize,
    duration: Millis,
    rng: &mut impl Rng,
) -> Hypothesis {
    let mut turns = Vec::new();
    for speaker in 0..speakers {
        let label = format!("spk{speaker}");
        let mut at = Millis::from_ms(rng.random_range(0..4000));
        loop {
            let gap = Millis::from_ms(rng.random_range(500..8000));
            let length = Millis::from_ms(rng.random_range(1500..8000));
            let onset = at + gap;
            if onset + length > duration {
                break;
            }
            turns.push(SpeakerTurn::new(label.clone(), onset, length));
            at = onset + length;
        }
    }
    Hypothesis::new(recording_id, turns).expect("generated turns are valid")
}

/// One corrupted copy: per-turn deletion, boundary jitter, spurious
/// insertions, occasional speaker merges/splits (under-/over-clustering),
/// and a random relabeling of the speakers.
pub fn perturb(
    reference: &Hypothesis,
    noise: &NoiseParams,
    scale: f64,
    rng: &mut impl Rng,
) -> Hypothesis {
    let p_delete = (noise.p_delete * scale).clamp(0.0, 0.95);
    let p_insert = (noise.p_insert * scale).clamp(0.0, 0.95);
    let p_merge = (noise.p_merge * scale).clamp(0.0, 0.95);
    let p_split = (noise.p_split * scale).clamp(0.0, 0.95);
    let jitter = Millis::from_ms((noise.jitter.as_ms() as f64 * scale) as i64);

    let mut turns = Vec::new();
    for turn in reference.turns() {
        if rng.random_bool(p_delete) {
            continue;
        }
        let mut onset = turn.onset;
        let mut end = turn.end();
        if jitter > Millis::ZERO {
            let bound = jitter.as_ms();
            onset += Millis::from_ms(rng.random_range(-bound..=bound));
            end += Millis::from_ms(rng.random_range(-bound..=bound));
        }
        let onset = onset.max(Millis::ZERO);
        let end = end.max(onset + Millis::from_ms(100));
        turns.push(SpeakerTurn::new(turn.speaker.clone(), onset, end - onset));

        if rng.random_bool(p_insert) {
            let speaker = rng.random_range(0..reference.speaker_count());
            let length = Millis::from_ms(rng.random_range(300..2500));
            let at = Millis::from_ms(rng.random_range(0..turn.end().as_ms().max(1)));
            turns.push(SpeakerTurn::new(format!("spk{speaker}"), at, length));
        }
    }
    if turns.is_empty() {
        // deletion wiped the copy; keep one turn so the hypothesis stays usable
        let first = &reference.turns()[0];
        turns.push(SpeakerTurn::new(
            first.speaker.clone(),
            first.onset,
            first.duration,
        ));
    }

    // under-clustering: two speakers collapse onto one label
    if reference.speaker_count() >= 2 && rng.random_bool(p_merge) {
        let a = rng.random_range(0..reference.speaker_count());
        let mut b = rng.random_range(0..reference.speaker_count() - 1);
        if b >= a {
            b += 1;
        }
        let (from, to) = (format!("spk{a}"), format!("spk{b}"));
        for turn in &mut turns {
            if turn.speaker == from {
                turn.speaker = to.clone();
            }
        }
    }
    // over-clustering: a speaker's turns scatter over a fresh second label
    if rng.random_bool(p_split) {
        let victim = format!("spk{}", rng.random_range(0..reference.speaker_count()));
        let fresh = format!("spk{}", reference.speaker_count());
        for turn in &mut turns {
            if turn.speaker == victim && rng.random_bool(0.5) {
                turn.speaker = fresh.clone();
            }
        }
    }

    // diarization labels carry no identity: permute whatever labels remain
    let hypothesis =
        Hypothesis::new(reference.recording_id(), turns).expect("perturbed turns are valid");
    let mut targets: Vec<usize> = (0..hypothesis.speaker_count()).collect();
    targets.shuffle(rng);
    let labels: Vec<String> = hypothesis.speakers().to_vec();
    hypothesis.relabeled(|speaker| {
        let member = labels.iter().position(|s| s == speaker).unwrap();
        format!("spk{}", targets[member])
    })
}
