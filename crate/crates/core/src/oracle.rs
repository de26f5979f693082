//! Lazy simulation of a free ultrafilter on ℕ.
//!
//! An [`OracleState`] answers membership queries "is S in p?" by committing
//! answers on demand while keeping the family of committed sets consistent:
//! the meet (intersection) of all commitments stays infinite, so every finite
//! subfamily has infinite intersection. Queries whose answer is already
//! forced by the meet are answered without new commitments; in the genuinely
//! free case the oracle commits the queried set and answers yes.
//!
//! The full answer transcript is a function of the initial state and the
//! query order. Different query orders may decide the same set differently —
//! each state simulates *some* free ultrafilter, not a canonical one.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{Bit, UltrafilterId};
use crate::periodic::PeriodicSet;

/// One query record, sufficient for bit-exact replay.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub oracle: UltrafilterId,
    pub query: PeriodicSet,
    pub answer: Bit,
    /// The set committed by this query; `None` when the answer was forced.
    pub committed: Option<PeriodicSet>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("seed commitments have finite intersection")]
    InconsistentSeed,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PLimitError {
    #[error("cells do not partition ℕ: {0}")]
    MalformedPartition(&'static str),
}

/// A growing, consistent list of commitments "S ∈ p" indexed by an opaque id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleState {
    id: UltrafilterId,
    commitments: Vec<PeriodicSet>,
    meet: PeriodicSet,
    transcript: Vec<TranscriptEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    seeds: Vec<PeriodicSet>,
}

impl OracleState {
    /// A fresh state with no commitments; the meet is all of ℕ.
    pub fn fresh(id: UltrafilterId) -> OracleState {
        OracleState {
            id,
            commitments: Vec::new(),
            meet: PeriodicSet::all(),
            transcript: Vec::new(),
            seeds: Vec::new(),
        }
    }

    /// A state pre-committed to the given sets, e.g. when replaying a
    /// certificate that was produced from a seeded configuration.
    pub fn with_seeds(
        id: UltrafilterId,
        seeds: Vec<PeriodicSet>,
    ) -> Result<OracleState, OracleError> {
        let mut meet = PeriodicSet::all();
        for s in &seeds {
            meet = meet.intersect(s);
        }
        if !meet.is_infinite() {
            return Err(OracleError::InconsistentSeed);
        }
        Ok(OracleState {
            id,
            commitments: seeds.clone(),
            meet,
            transcript: Vec::new(),
            seeds,
        })
    }

    pub fn id(&self) -> UltrafilterId {
        self.id
    }

    pub fn meet(&self) -> &PeriodicSet {
        &self.meet
    }

    pub fn commitments(&self) -> &[PeriodicSet] {
        &self.commitments
    }

    pub fn transcript(&self) -> &[TranscriptEntry] {
        &self.transcript
    }

    pub fn seeds(&self) -> &[PeriodicSet] {
        &self.seeds
    }

    /// Decides "S ∈ p?".
    ///
    /// Forced answers (the meet is contained in S, or meets S only finitely)
    /// are returned without new commitments. Otherwise the queried set itself
    /// is committed and the answer is yes. Freeness is built in: a finite set
    /// can never contain the infinite meet and never meets it infinitely, so
    /// it always answers 0.
    pub fn query(&mut self, set: &PeriodicSet) -> Bit {
        let (answer, committed) = if self.meet.is_subset_of(set) {
            (Bit::ONE, None)
        } else {
            let inter = self.meet.intersect(set);
            if inter.is_infinite() {
                self.commitments.push(set.clone());
                self.meet = inter;
                (Bit::ONE, Some(set.clone()))
            } else {
                (Bit::ZERO, None)
            }
        };
        debug_assert!(self.meet.is_infinite(), "oracle meet must stay infinite");
        self.transcript.push(TranscriptEntry {
            oracle: self.id,
            query: set.clone(),
            answer,
            committed,
        });
        answer
    }

    /// The p-limit of a finitely-valued sequence, given as labelled cells
    /// partitioning ℕ: returns the label of the unique cell decided "∈ p".
    /// Cells are queried in list order.
    pub fn p_limit<L: Clone>(&mut self, seq: &FiniteValuedSequence<L>) -> Result<L, PLimitError> {
        seq.validate()?;
        for (label, cell) in &seq.cells {
            if self.query(cell).is_one() {
                return Ok(label.clone());
            }
        }
        unreachable!("some cell of a partition of ℕ meets the infinite meet infinitely")
    }
}

/// A sequence taking finitely many values, described by the cells on which
/// each value is attained. The cells must partition ℕ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteValuedSequence<L> {
    cells: Vec<(L, PeriodicSet)>,
}

impl<L> FiniteValuedSequence<L> {
    pub fn new(cells: Vec<(L, PeriodicSet)>) -> FiniteValuedSequence<L> {
        FiniteValuedSequence { cells }
    }

    pub fn cells(&self) -> &[(L, PeriodicSet)] {
        &self.cells
    }

    fn validate(&self) -> Result<(), PLimitError> {
        let mut union = PeriodicSet::empty();
        for (i, (_, cell)) in self.cells.iter().enumerate() {
            for (_, earlier) in &self.cells[..i] {
                if !cell.intersect(earlier).is_empty() {
                    return Err(PLimitError::MalformedPartition("cells overlap"));
                }
            }
            union = union.union(cell);
        }
        if union != PeriodicSet::all() {
            return Err(PLimitError::MalformedPartition("cells do not cover ℕ"));
        }
        Ok(())
    }
}

impl FiniteValuedSequence<Bit> {
    /// The two-valued sequence that is 1 exactly on `ones`, with the ones
    /// cell listed first.
    pub fn indicator(ones: PeriodicSet) -> FiniteValuedSequence<Bit> {
        let zeros = ones.complement();
        FiniteValuedSequence { cells: vec![(Bit::ONE, ones), (Bit::ZERO, zeros)] }
    }
}

/// A keyed family of independent oracle states. States are created fresh on
/// first use; distinct ids never constrain each other.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleBank {
    states: std::collections::BTreeMap<UltrafilterId, OracleState>,
}

impl OracleBank {
    pub fn new() -> OracleBank {
        OracleBank::default()
    }

    pub fn from_states(states: impl IntoIterator<Item = OracleState>) -> OracleBank {
        OracleBank {
            states: states.into_iter().map(|s| (s.id(), s)).collect(),
        }
    }

    pub fn state_mut(&mut self, id: UltrafilterId) -> &mut OracleState {
        self.states.entry(id).or_insert_with(|| OracleState::fresh(id))
    }

    pub fn get(&self, id: UltrafilterId) -> Option<&OracleState> {
        self.states.get(&id)
    }

    pub fn states(&self) -> impl Iterator<Item = &OracleState> {
        self.states.values()
    }

    /// All transcripts, keyed by oracle id. Ids without queries are omitted.
    pub fn transcripts(
        &self,
    ) -> std::collections::BTreeMap<UltrafilterId, Vec<TranscriptEntry>> {
        self.states
            .iter()
            .filter(|(_, s)| !s.transcript().is_empty())
            .map(|(id, s)| (*id, s.transcript().to_vec()))
            .collect()
    }

    /// Seed commitments per oracle, for embedding into certificates.
    pub fn seed_sets(&self) -> std::collections::BTreeMap<UltrafilterId, Vec<PeriodicSet>> {
        self.states
            .iter()
            .filter(|(_, s)| !s.seeds().is_empty())
            .map(|(id, s)| (*id, s.seeds().to_vec()))
            .collect()
    }
}
