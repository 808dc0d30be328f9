//! Detection of gap-opening papers in bibliographic corpora.
//!
//! The pipeline ingests paper records ([`corpus`]), builds cumulative
//! per-discipline concept co-occurrence networks ([`concept_net`]), computes
//! the persistent homology of their flag complexes ([`topology`]), labels
//! every paper by whether it introduced a cycle-opening concept pair
//! ([`classify`]), and derives the scientometric indicators used to compare
//! the categories ([`metrics`]). [`pipeline`] runs the stages end to end.

pub mod classify;
pub mod concept_net;
pub mod corpus;
pub mod error;
pub mod metrics;
pub mod pipeline;
pub mod synth;
pub mod topology;

mod rng;

pub use error::{Error, Result};
