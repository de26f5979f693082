//! Coherent splitting maps over X = P × K × (ω+1).
//!
//! A two-valued map on X is *coherent* when, for every pair (p, k), the value
//! at the limit point (p, k, ω) is the p-limit of the values along the
//! column {(p, k, n) : n ∈ ℕ}. Equivalently: the agreement set
//! {n : f(p,k,n) = f(p,k,ω)} is decided "∈ p" by the oracle for p.
//!
//! This module provides:
//!
//! - [`Column`] / [`CoherentMap`]: eventually periodic column descriptions
//!   with decidable agreement sets, and [`extend_coherently`] computing the
//!   unique coherent extension of omega-less columns;
//! - [`Condition`]: finite approximations ⟨P, K, f⟩ to a coherent map,
//!   ordered by extension ([`Condition::leq`]);
//! - [`DenseGoal`] / [`meet_dense`]: the dense sets of the forcing poset and
//!   the constructive step descending into each one;
//! - [`forcing_split`]: the chain recursion folding a goal schedule into a
//!   certificate, and [`coherent_split`], the dispatcher choosing between
//!   the finite-star-trace path ([`split_finite_trace`]) and the forcing
//!   path, with an automatic heuristic;
//! - [`clopen_certificate`]: classification of a family by the two clopen
//!   classes of a coherent map.

mod certificate;
mod column;
mod condition;
mod dispatch;
mod finite;
mod forcing;

pub use certificate::{BucketStat, SplitCert, SplitDetail, SplitStats};
pub(crate) use certificate::replay_transcripts;
pub use column::{extend_coherently, CoherentMap, Column, PartialColumn};
pub use condition::Condition;
pub use dispatch::{clopen_certificate, coherent_split, PartitionReport, SplitOptions, StarMode};
pub use finite::split_finite_trace;
pub use forcing::{forcing_split, meet_dense, ChainRun, ChainStep, DenseGoal, HitWitness};

use thiserror::Error;

use crate::group::EvalError;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SplitError {
    /// No element of the available stream prefix carries a star point outside
    /// the forbidden set of the goal. This is the desk-scale rendering of the
    /// hypothesis that the stream's star trace is infinite.
    #[error("no admissible witness in the available prefix for goal {goal_index}")]
    NoWitness { goal_index: usize },
    /// A constructed condition or map failed its own coherence certification.
    /// This is an internal invariant violation, never a caller error.
    #[error("coherence certification failed: {0}")]
    IncoherentResult(String),
    #[error("input stream is empty")]
    EmptyInput,
    #[error("stream elements must be pairwise distinct")]
    DuplicateElement,
    #[error("schedule length {requested} is shorter than the {prelude} prelude goals")]
    ScheduleTooShort { requested: usize, prelude: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}
