//! File formats, synthetic data, benchmarks, and the CLI for `diacomb`.

pub mod bench;
pub mod cli;
pub mod pipeline;
pub mod rttm;
pub mod stats;
pub mod synth;
