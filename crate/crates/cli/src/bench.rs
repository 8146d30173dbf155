//! Bench harness: mapping-time growth, objective-vs-error studies, and
//! empirical approximation ratios, all emitted as CSV on stdout.

use std::io::Write;
use std::time::Instant;

use anyhow::{Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use diacomb::graph::partition_weight;
use diacomb::mapping::{
    brute_force_optimum, map_labels_greedy, map_labels_pairwise, map_labels_pairwise_graph,
    map_labels_rls, MappingError, RlsConfig, DEFAULT_CLIQUE_BUDGET, DEFAULT_PARTITION_CAP,
};
use diacomb::scoring::{compute_der, ScoreOptions};
use diacomb::{MappingGraph, WeightMode};

use crate::pipeline::{combine_recording, CombineOptions};
use crate::stats::spearman;
use crate::synth::{gen_synthetic, NoiseParams, SynthConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchMode {
    Timing,
    WeightVsDer,
    Approx,
}

#[derive(Clone, Copy, Debug)]
pub struct BenchParams {
    pub speakers: usize,
    pub max_k: usize,
    pub trials: usize,
    pub seed: u64,
}

pub fn run_bench(
    mode: BenchMode,
    params: &BenchParams,
    out: &mut dyn Write,
    log: &mut dyn Write,
) -> Result<()> {
    match mode {
        BenchMode::Timing => timing(params, out, log),
        BenchMode::WeightVsDer => weight_vs_der(params, out, log),
        BenchMode::Approx => approx(params, out, log),
    }
}

/// Median mapping time per ensemble size for the greedy and pairwise
/// mappers. Greedy rows stop once the clique budget is exhausted.
fn timing(params: &BenchParams, out: &mut dyn Write, log: &mut dyn Write) -> Result<()> {
    writeln!(out, "k,method,median_ms")?;
    let mut greedy_alive = true;
    for k in 2..=params.max_k {
        let ensemble = gen_synthetic(&SynthConfig {
            noise: NoiseParams::moderate(),
            ..SynthConfig::new(params.speakers, k, params.seed)
        });
        let graph = MappingGraph::from_hypotheses(&ensemble.hypotheses, WeightMode::Relative)?;
        let padded = graph.pad_to_complete();

        if greedy_alive {
            match median_ms(|| {
                map_labels_greedy(&padded, DEFAULT_CLIQUE_BUDGET).map(|_| ())
            }) {
                Ok(ms) => writeln!(out, "{k},greedy,{ms:.3}")?,
                Err(MappingError::CliqueBudgetExceeded { needed, budget }) => {
                    writeln!(
                        log,
                        "greedy mapping infeasible from k={k}: {needed} cliques exceed \
                         the budget of {budget}"
                    )?;
                    greedy_alive = false;
                }
                Err(other) => return Err(other.into()),
            }
        }

        let hypotheses = ensemble.hypotheses.clone();
        let ms = median_ms(|| {
            map_labels_pairwise(&hypotheses, WeightMode::Relative, false).map(|_| ())
        })?;
        writeln!(out, "{k},pairwise,{ms:.3}")?;
    }
    Ok(())
}

/// Runs `work` once warm and then seven times; returns the median in
/// milliseconds or the first error.
fn median_ms<E>(mut work: impl FnMut() -> Result<(), E>) -> Result<f64, E> {
    work()?;
    let mut samples: Vec<f64> = Vec::with_capacity(7);
    for _ in 0..7 {
        let started = Instant::now();
        work()?;
        samples.push(started.elapsed().as_secs_f64() * 1e3);
    }
    samples.sort_by(f64::total_cmp);
    Ok(samples[samples.len() / 2])
}

/// Combines increasingly corrupted copies of one reference and reports the
/// mapping objective against the resulting error rate, plus a Spearman
/// correlation footer.
fn weight_vs_der(params: &BenchParams, out: &mut dyn Write, log: &mut dyn Write) -> Result<()> {
    writeln!(out, "trial,weight,der")?;
    let k = params.max_k.max(2);
    let mut weights = Vec::with_capacity(params.trials);
    let mut ders = Vec::with_capacity(params.trials);
    for trial in 0..params.trials {
        let ramp = if params.trials > 1 {
            trial as f64 / (params.trials - 1) as f64
        } else {
            0.0
        };
        let base = NoiseParams::moderate();
        let level = 0.25 + 2.25 * ramp;
        let noise = NoiseParams {
            jitter: diacomb::Millis::from_ms((base.jitter.as_ms() as f64 * level) as i64),
            p_delete: base.p_delete * level,
            p_insert: base.p_insert * level,
            p_merge: base.p_merge * level,
            p_split: base.p_split * level,
            ramp: 0.0,
        };
        let ensemble = gen_synthetic(&SynthConfig {
            noise,
            // one recording, re-corrupted per trial
            seed: params.seed ^ (trial as u64).wrapping_mul(0x9e37_79b9),
            ..SynthConfig::new(params.speakers, k, params.seed)
        });
        let outcome = combine_recording(&ensemble.hypotheses, &CombineOptions::default())
            .context("combining a synthetic ensemble")?;
        let report = compute_der(&ensemble.reference, &outcome.combined, &ScoreOptions::default())?;
        writeln!(out, "{trial},{},{}", outcome.weight, report.der())?;
        weights.push(outcome.weight);
        ders.push(report.der());
    }
    let rho = spearman(&weights, &ders);
    writeln!(out, "# spearman,{rho}")?;
    writeln!(log, "spearman(weight, der) = {rho:.3} over {} trials", params.trials)?;
    Ok(())
}

/// Compares every mapper against the exact optimum on random complete
/// instances with uniform weights.
fn approx(params: &BenchParams, out: &mut dyn Write, log: &mut dyn Write) -> Result<()> {
    writeln!(out, "trial,w_pairwise,w_rls,w_greedy,w_opt,w_g")?;
    let k = params.max_k.max(2);
    for trial in 0..params.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ trial as u64);
        let graph =
            MappingGraph::from_weight_fn(&vec![params.speakers; k], |_, _| rng.random::<f64>())?;

        let (_, w_opt) = match brute_force_optimum(&graph, DEFAULT_PARTITION_CAP) {
            Ok(found) => found,
            Err(MappingError::TooManyPartitions { candidates, cap }) => {
                writeln!(
                    log,
                    "trial {trial}: skipped, {candidates} partitions exceed the oracle cap {cap}"
                )?;
                continue;
            }
            Err(other) => return Err(other.into()),
        };

        let pairwise = map_labels_pairwise_graph(&graph)?;
        let w_pairwise = partition_weight(&graph, &pairwise)?;
        let rls = map_labels_rls(
            &graph,
            &RlsConfig {
                seed: params.seed ^ trial as u64,
                ..RlsConfig::default()
            },
        )?;
        let greedy = map_labels_greedy(&graph, DEFAULT_CLIQUE_BUDGET)?;
        let w_greedy = partition_weight(&graph, &greedy)?;

        writeln!(
            out,
            "{trial},{w_pairwise},{},{w_greedy},{w_opt},{}",
            rls.weight,
            graph.total_weight()
        )?;
    }
    Ok(())
}
