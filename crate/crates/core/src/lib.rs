//! Combination of overlap-aware speaker diarization hypotheses.
//!
//! Combining the outputs of several diarization systems requires mapping each
//! system's anonymous speaker labels into a common label space before any
//! region-wise voting can happen. This crate models that label-mapping problem
//! as a K-partite weighted graph whose vertices are the per-hypothesis
//! speakers and whose edge weights measure temporal overlap, and provides
//! three solvers over it:
//!
//! * [`mapping::map_labels_greedy`] — globally-informed greedy search over
//!   maximal cliques (exponential in the number of hypotheses),
//! * [`mapping::map_labels_pairwise`] — pairwise Hungarian assignment with
//!   turn-level merging (linear in the number of hypotheses),
//! * [`mapping::map_labels_rls`] — randomized local search with restarts.
//!
//! [`voting`] turns a mapped ensemble into a single consensus hypothesis and
//! [`scoring`] computes diarization error rates against a reference. All time
//! arithmetic is integer milliseconds so results are exactly reproducible.
//!
//! The crate is `no_std` (with `alloc`); file formats and the command-line
//! front end live in the companion `diacomb-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod graph;
pub mod hypothesis;
pub mod intervals;
pub mod mapping;
pub mod scoring;
pub mod time;
pub mod voting;

pub use graph::{MappingGraph, Partition, VertexId, WeightMode};
pub use hypothesis::{Hypothesis, SpeakerTurn};
pub use intervals::IntervalSet;
pub use time::Millis;
