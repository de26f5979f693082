//! boolsplit: a desk-scale engine for splitting families of elements of free
//! Boolean groups by coherent two-valued maps.
//!
//! The engine works over the structured point set X = P × K × (ω+1), where P
//! indexes simulated free ultrafilters on ℕ and K indexes generator columns.
//! Its pieces:
//!
//! - [`periodic`]: exact algebra of eventually periodic subsets of ℕ, the
//!   ground representation for every "set of naturals" in the engine.
//! - [`oracle`]: a lazy, consistency-preserving simulation of a free
//!   ultrafilter, with p-limits of finitely-valued sequences.
//! - [`group`]: the free Boolean group B(X) — elements are finite point sets
//!   under symmetric difference — and homomorphism evaluation of two-valued
//!   point maps.
//! - [`splitter`]: an online greedy splitter guaranteeing both classes grow
//!   at least half as fast as the steerable elements.
//! - [`coherent`]: coherent maps (the ω-value of every column is the p-limit
//!   of its finite values), coherent extension, a finite forcing poset with
//!   dense goals, the chain recursion meeting a scheduled goal list, the
//!   finite-star-trace splitting path, and the dispatcher combining them.
//! - [`sim`]: a finite-stage simulator producing selective-pseudocompactness
//!   witnesses and convergence refutations over a finite coordinate pool.
//! - [`cert`]: self-contained, hash-guarded, replayable certificates for all
//!   of the above, plus the verifier.
//! - [`stream`]: seeded generators for distinct element streams.
//!
//! Every run is deterministic: outputs are a function of inputs, flags and
//! seed. Certificates embed the oracle transcripts they depend on and replay
//! bit-exactly.
//!
//! See the `examples/` directory for one runnable walkthrough per capability,
//! and the `boolsplit` binary for the file-based command line interface.

pub mod cert;
pub mod coherent;
pub mod group;
pub mod manifest;
pub mod oracle;
pub mod periodic;
pub mod sim;
pub mod splitter;
pub mod stream;

pub use cert::{Certificate, CertificatePayload, FeedLogCert, VerifyFailure};
pub use coherent::{
    clopen_certificate, coherent_split, extend_coherently, forcing_split, meet_dense,
    split_finite_trace, BucketStat, ChainRun, ChainStep, CoherentMap, Column, Condition,
    DenseGoal, HitWitness, PartialColumn, PartitionReport, SplitCert, SplitDetail, SplitError,
    SplitOptions, SplitStats, StarMode,
};
pub use group::{
    Bit, EvalError, ExtNat, GeneratorId, GroupElement, Point, TwoValuedMap, UltrafilterId,
};
pub use manifest::RunManifest;
pub use oracle::{
    FiniteValuedSequence, OracleBank, OracleError, OracleState, PLimitError, TranscriptEntry,
};
pub use periodic::{PeriodicSet, PeriodicSetError};
pub use sim::{
    CoordId, CoordLimitCert, OpenBox, RefutationCert, SelectiveCert, Sim, SimConfig, SimError,
    SimPoint, TargetSpec,
};
pub use splitter::{FeedError, FeedKind, FeedReport, SplitterState};
pub use stream::{generate, read_jsonl, write_jsonl, StreamKind, StreamProfile};
