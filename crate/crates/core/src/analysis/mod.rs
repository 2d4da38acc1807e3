//! Exact analyses on small populations: stable-computation verdicts from the
//! full configuration graph, the agent configuration graph with its r-values,
//! and fitted space bounds.
//!
//! A fair execution of a finite system eventually stays inside one bottom
//! strongly connected component of the configuration graph and visits all of
//! it, so a protocol stably computes `b` on an input iff every bottom component
//! has every agent outputting `b`.

mod agent_graph;
mod explore;
mod space;

pub use agent_graph::{
    build_agent_config_graph, compute_r_values, identity_embedding, input_multisets,
    verify_q_property, AgentConfigGraph, EmbeddingFailure, LabeledEdge, QReport, Role,
};
pub use explore::{
    exhaustive_verify, explore, explore_with, verify_terminal_property, Canonical, CapHit,
    Counterexample, Exploration, ExploreOptions, FailReason, PropertyVerdict, Verdict,
    VerificationResult,
};
pub use space::{ceil_log2, space_audit, Scale, SpaceFit};

use alloc::boxed::Box;
use thiserror::Error;

use crate::machine::{AgentConfiguration, MachineError};
use crate::population::PopulationError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("tape extent {cells} exceeds the cell cap {cap}")]
    CellCapExceeded { cells: usize, cap: usize },
    #[error("configuration cap reached after {explored} configurations ({frontier} unexpanded)")]
    ConfigCapExceeded { explored: usize, frontier: usize },
    #[error("no r-value for agent configuration {0:?}")]
    UnassignedNode(Box<AgentConfiguration>),
    #[error(transparent)]
    Population(#[from] PopulationError),
}

impl From<MachineError> for AnalysisError {
    fn from(e: MachineError) -> Self {
        AnalysisError::Population(e.into())
    }
}
