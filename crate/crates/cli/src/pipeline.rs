//! End-to-end combination of one recording's ensemble: build the mapping
//! graph, map labels with the selected method, relabel, and vote.

use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use diacomb::graph::partition_weight;
use diacomb::mapping::{
    map_labels_greedy, map_labels_pairwise, map_labels_rls, MappingError, RlsConfig,
};
use diacomb::voting::{apply_partition, combine, VoteConfig};
use diacomb::{Hypothesis, MappingGraph, Partition, WeightMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    Greedy,
    #[default]
    Pairwise,
    Rls,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Greedy => "greedy",
            Method::Pairwise => "pairwise",
            Method::Rls => "rls",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CombineOptions {
    pub method: Method,
    pub sort_by_der: bool,
    pub weight_mode: WeightMode,
    pub seed: u64,
    pub rls_epochs: u32,
    pub rls_iters: Option<u32>,
    pub patience: u32,
    pub clique_budget: u64,
    pub rank_weighting: bool,
}

impl Default for CombineOptions {
    fn default() -> Self {
        let rls = RlsConfig::default();
        Self {
            method: Method::Pairwise,
            sort_by_der: true,
            weight_mode: WeightMode::Relative,
            seed: 0,
            rls_epochs: rls.epochs,
            rls_iters: rls.iters,
            patience: rls.patience,
            clique_budget: diacomb::mapping::DEFAULT_CLIQUE_BUDGET,
            rank_weighting: false,
        }
    }
}

#[derive(Debug)]
pub struct CombineOutcome {
    pub combined: Hypothesis,
    pub partition: Partition,
    /// Objective value of the mapping on this recording's graph.
    pub weight: f64,
    /// Wall time of the label-mapping step alone.
    pub mapping_time: Duration,
}

/// Runs the full pipeline on one recording's hypotheses.
pub fn combine_recording(
    hypotheses: &[Hypothesis],
    options: &CombineOptions,
) -> Result<CombineOutcome> {
    let graph = MappingGraph::from_hypotheses(hypotheses, options.weight_mode)
        .context("building the mapping graph")?;

    let started = Instant::now();
    let (partition, order, weight) = match options.method {
        Method::Greedy => {
            let padded = graph.pad_to_complete();
            let partition = match map_labels_greedy(&padded, options.clique_budget) {
                Ok(partition) => partition,
                Err(MappingError::CliqueBudgetExceeded { needed, budget }) => bail!(
                    "greedy mapping needs {needed} cliques but the budget is {budget}; \
                     raise --clique-budget or fall back to --method pairwise"
                ),
                Err(other) => return Err(other.into()),
            };
            let weight = partition_weight(&padded, &partition)?;
            (partition, None, weight)
        }
        Method::Pairwise => {
            let mapped =
                map_labels_pairwise(hypotheses, options.weight_mode, options.sort_by_der)?;
            let weight = partition_weight(&graph, &mapped.partition)?;
            (mapped.partition, Some(mapped.order), weight)
        }
        Method::Rls => {
            let padded = graph.pad_to_complete();
            let config = RlsConfig {
                epochs: options.rls_epochs,
                iters: options.rls_iters,
                seed: options.seed,
                patience: options.patience,
            };
            let outcome = map_labels_rls(&padded, &config)?;
            (outcome.partition, None, outcome.weight)
        }
    };
    let mapping_time = started.elapsed();

    let relabeled = apply_partition(hypotheses, &partition)?;
    let vote = VoteConfig {
        rank_weighting: options.rank_weighting,
    };
    // rank weights follow the processing order when sorting was involved
    let combined = match order {
        Some(order) if options.rank_weighting => {
            let ranked: Vec<Hypothesis> =
                order.iter().map(|&k| relabeled[k].clone()).collect();
            combine(&ranked, &vote)?
        }
        _ => combine(&relabeled, &vote)?,
    };

    Ok(CombineOutcome {
        combined,
        partition,
        weight,
        mapping_time,
    })
}
