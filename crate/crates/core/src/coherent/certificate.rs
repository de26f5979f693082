//! The split certificate: a self-contained, replayable record of a splitting
//! run, and its semantic verification.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cert::VerifyFailure;
use crate::group::{Bit, GroupElement, UltrafilterId};
use crate::manifest::RunManifest;
use crate::oracle::{OracleBank, OracleState, TranscriptEntry};
use crate::periodic::PeriodicSet;
use crate::splitter::{FeedReport, SplitterState};

use super::column::CoherentMap;
use super::condition::Condition;
use super::forcing::{ChainStep, DenseGoal, HitWitness};

/// Class sizes and the number of steered elements backing the balance bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitStats {
    pub count0: u64,
    pub count1: u64,
    pub steered: u64,
}

/// Per-bucket statistics of the finite-trace path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BucketStat {
    pub trace: GroupElement,
    pub size: u64,
}

/// Path-specific part of a split certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "path", rename_all = "kebab-case")]
pub enum SplitDetail {
    /// The finite-star-trace path: elements bucketed by star trace, the
    /// dominant bucket split online, the map extended coherently.
    FiniteTrace {
        /// The common star trace I of the dominant bucket.
        selected_trace: GroupElement,
        /// j = f̃(I); a dominant element's class is its non-star class XOR j.
        j: Bit,
        buckets: Vec<BucketStat>,
        /// The splitter feed log over the dominant bucket's non-star parts.
        reports: Vec<FeedReport>,
    },
    /// The forcing path: the descending chain of conditions and the witness
    /// recorded for every hit goal.
    Forcing {
        chain: Vec<ChainStep>,
        witnesses: Vec<HitWitness>,
    },
}

/// A replayable record proving that the contained coherent map splits the
/// recorded family: the map, both classes, the oracle transcripts behind
/// every coherence decision, and the path-specific construction trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCert {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
    pub map: CoherentMap,
    pub class0: Vec<GroupElement>,
    pub class1: Vec<GroupElement>,
    pub stats: SplitStats,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub oracle_seeds: BTreeMap<UltrafilterId, Vec<PeriodicSet>>,
    pub transcripts: BTreeMap<UltrafilterId, Vec<TranscriptEntry>>,
    pub detail: SplitDetail,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

fn fail(check: &str, detail: impl ToString) -> VerifyFailure {
    VerifyFailure { check: check.to_string(), detail: detail.to_string() }
}

/// Rebuilds oracle states from seeds and replays a recorded transcript,
/// checking every answer and commitment bit-exactly.
pub(crate) fn replay_transcripts(
    seeds: &BTreeMap<UltrafilterId, Vec<PeriodicSet>>,
    transcripts: &BTreeMap<UltrafilterId, Vec<TranscriptEntry>>,
) -> Result<OracleBank, VerifyFailure> {
    let mut states = Vec::new();
    for (&id, seed_sets) in seeds {
        states.push(
            OracleState::with_seeds(id, seed_sets.clone())
                .map_err(|e| fail("oracle-seeds", format!("oracle {id}: {e}")))?,
        );
    }
    let mut bank = OracleBank::from_states(states);
    for (&id, entries) in transcripts {
        for (i, entry) in entries.iter().enumerate() {
            if entry.oracle != id {
                return Err(fail(
                    "transcript-replay",
                    format!("oracle {id} entry {i}: mislabelled oracle {}", entry.oracle),
                ));
            }
            let state = bank.state_mut(id);
            let answer = state.query(&entry.query);
            let replayed = state.transcript().last().expect("query just recorded");
            if answer != entry.answer || replayed.committed != entry.committed {
                return Err(fail(
                    "transcript-replay",
                    format!("oracle {id} entry {i}: answer or commitment diverges"),
                ));
            }
        }
    }
    Ok(bank)
}

/// Queries every stored column's agreement set on the replayed states; all
/// must be decided "∈ p".
pub(crate) fn check_map_coherence(
    map: &CoherentMap,
    bank: &mut OracleBank,
) -> Result<(), VerifyFailure> {
    for col in map.columns() {
        if !bank.state_mut(col.p).query(&col.agreement_set()).is_one() {
            return Err(fail(
                "coherence",
                format!("column ({}, {}) agreement set not decided in p", col.p, col.k),
            ));
        }
    }
    Ok(())
}

impl SplitCert {
    /// Full semantic replay: transcripts, coherence of the map, class
    /// evaluations, statistics and the path-specific construction.
    pub fn verify(&self) -> Result<(), VerifyFailure> {
        let mut bank = replay_transcripts(&self.oracle_seeds, &self.transcripts)?;
        check_map_coherence(&self.map, &mut bank)?;

        for (elem, want) in self
            .class0
            .iter()
            .map(|e| (e, Bit::ZERO))
            .chain(self.class1.iter().map(|e| (e, Bit::ONE)))
        {
            if self.map.eval(elem) != want {
                return Err(fail("class-evaluation", format!("{elem:?} is not in class {want}")));
            }
        }
        let mut all: Vec<&GroupElement> = self.class0.iter().chain(&self.class1).collect();
        all.sort();
        let before = all.len();
        all.dedup();
        if all.len() != before {
            return Err(fail("class-evaluation", "classes share an element"));
        }
        if self.stats.count0 != self.class0.len() as u64
            || self.stats.count1 != self.class1.len() as u64
        {
            return Err(fail("stats", "class sizes disagree with recorded counts"));
        }

        match &self.detail {
            SplitDetail::FiniteTrace { selected_trace, j, buckets, reports } => {
                self.verify_finite_trace(selected_trace, *j, buckets, reports)
            }
            SplitDetail::Forcing { chain, witnesses } => {
                self.verify_forcing(chain, witnesses, &mut bank)
            }
        }
    }

    fn verify_finite_trace(
        &self,
        selected_trace: &GroupElement,
        j: Bit,
        buckets: &[BucketStat],
        reports: &[FeedReport],
    ) -> Result<(), VerifyFailure> {
        // j is the map's value on the selected trace.
        if self.map.eval(selected_trace) != j {
            return Err(fail("finite-trace", "j does not match the map's value on the trace"));
        }

        // Replay the online splitter over the recorded feed log; the greedy
        // construction is deterministic, so every report must reproduce.
        let mut splitter = SplitterState::new();
        for (i, report) in reports.iter().enumerate() {
            let replayed = splitter
                .feed(&report.element)
                .map_err(|e| fail("feed-replay", format!("report {i}: {e}")))?;
            if replayed != *report {
                return Err(fail("feed-replay", format!("report {i} diverges on replay")));
            }
            if splitter.min_class() < splitter.steered() / 2 {
                return Err(fail("balance-bound", format!("violated after report {i}")));
            }
        }
        // The coherent map extends the splitter's finite map.
        let final_map = splitter.finalize();
        for report in reports {
            if self.map.eval(&report.element)
                != final_map
                    .hom_eval(&report.element)
                    .expect("finalized map is total")
            {
                return Err(fail("finite-trace", "map disagrees with the splitter's map"));
            }
        }

        // Classification identity for the dominant bucket: the class of a is
        // the class of a minus its trace, corrected by j.
        let mut dominant = (0u64, 0u64);
        let mut recounted: BTreeMap<&GroupElement, u64> = BTreeMap::new();
        let mut traces: Vec<GroupElement> = Vec::new();
        for (elem, class) in self
            .class0
            .iter()
            .map(|e| (e, Bit::ZERO))
            .chain(self.class1.iter().map(|e| (e, Bit::ONE)))
        {
            let trace = elem.star_trace();
            if &trace == selected_trace {
                let reduced = self.map.eval(&elem.minus(selected_trace));
                if reduced ^ j != class {
                    return Err(fail(
                        "finite-trace",
                        format!("classification identity fails on {elem:?}"),
                    ));
                }
                if class.is_zero() {
                    dominant.0 += 1;
                } else {
                    dominant.1 += 1;
                }
            }
            traces.push(trace);
        }
        for trace in &traces {
            *recounted.entry(trace).or_default() += 1;
        }
        for stat in buckets {
            if recounted.get(&stat.trace) != Some(&stat.size) {
                return Err(fail("finite-trace", "bucket statistics disagree with classes"));
            }
        }
        if let Some(max) = buckets.iter().map(|b| b.size).max() {
            let selected = buckets.iter().find(|b| &b.trace == selected_trace);
            if selected.map(|b| b.size) != Some(max) {
                return Err(fail("finite-trace", "selected trace is not a largest bucket"));
            }
        }

        // The balance guarantee applies to the dominant bucket.
        if dominant.0.min(dominant.1) < self.stats.steered / 2 {
            return Err(fail("balance-bound", "dominant bucket classes below ⌊s/2⌋"));
        }
        if self.stats.steered != splitter.steered() {
            return Err(fail("stats", "steered count disagrees with the feed log"));
        }
        Ok(())
    }

    fn verify_forcing(
        &self,
        chain: &[ChainStep],
        witnesses: &[HitWitness],
        bank: &mut OracleBank,
    ) -> Result<(), VerifyFailure> {
        let mut cond = Condition::empty();
        let mut seen_witnesses: Vec<&HitWitness> = Vec::new();
        for (i, step) in chain.iter().enumerate() {
            let prev = cond.clone();
            for p in &step.ultras_added {
                cond.add_ultrafilter(*p);
            }
            for k in &step.gens_added {
                cond.add_generator(*k);
            }
            for col in &step.columns_added {
                cond.insert_column(col.clone())
                    .map_err(|e| fail("chain-order", format!("step {i}: {e}")))?;
                if !bank.state_mut(col.p).query(&col.agreement_set()).is_one() {
                    return Err(fail(
                        "coherence",
                        format!("step {i}: added column not decided coherent"),
                    ));
                }
            }
            if !cond.leq(&prev) {
                return Err(fail("chain-order", format!("step {i} does not extend step {}", i as i64 - 1)));
            }
            match &step.goal {
                DenseGoal::AddUltrafilter { p } => {
                    if !cond.ultras().contains(p) {
                        return Err(fail("goal-satisfaction", format!("step {i}: {p} missing")));
                    }
                }
                DenseGoal::AddGenerator { k } => {
                    if !cond.gens().contains(k) {
                        return Err(fail("goal-satisfaction", format!("step {i}: {k} missing")));
                    }
                }
                DenseGoal::Hit { exclude, target } => {
                    let w = step.witness.as_ref().ok_or_else(|| {
                        fail("goal-satisfaction", format!("step {i}: hit goal without witness"))
                    })?;
                    if w.target != *target || exclude.contains(&w.element) {
                        return Err(fail(
                            "goal-satisfaction",
                            format!("step {i}: witness target or exclusion mismatch"),
                        ));
                    }
                    if !w.steering.is_star()
                        || !w.element.contains(&w.steering)
                        || prev.star_slice_contains(&w.steering)
                        || exclude.iter().any(|b| b.contains(&w.steering))
                    {
                        return Err(fail(
                            "goal-satisfaction",
                            format!("step {i}: steering point not fresh"),
                        ));
                    }
                    if !cond.covers(&w.element) {
                        return Err(fail(
                            "goal-satisfaction",
                            format!("step {i}: witness outside the condition domain"),
                        ));
                    }
                    match cond.eval(&w.element) {
                        Ok(v) if v == *target => {}
                        _ => {
                            return Err(fail(
                                "goal-satisfaction",
                                format!("step {i}: witness does not evaluate to the target"),
                            ))
                        }
                    }
                    seen_witnesses.push(w);
                }
            }
        }
        if seen_witnesses.len() != witnesses.len()
            || seen_witnesses.iter().zip(witnesses).any(|(a, b)| **a != *b)
        {
            return Err(fail("goal-satisfaction", "witness list disagrees with the chain"));
        }
        if cond.to_map() != self.map {
            return Err(fail("chain-order", "final condition map differs from the certificate map"));
        }
        // Classes are exactly the witnesses, split by target.
        let class0: Vec<&GroupElement> =
            witnesses.iter().filter(|w| w.target.is_zero()).map(|w| &w.element).collect();
        let class1: Vec<&GroupElement> =
            witnesses.iter().filter(|w| w.target.is_one()).map(|w| &w.element).collect();
        if class0.len() != self.class0.len()
            || class1.len() != self.class1.len()
            || class0.iter().zip(&self.class0).any(|(a, b)| **a != *b)
            || class1.iter().zip(&self.class1).any(|(a, b)| **a != *b)
        {
            return Err(fail("class-evaluation", "classes disagree with recorded witnesses"));
        }
        if self.stats.steered != witnesses.len() as u64 {
            return Err(fail("stats", "steered count disagrees with the witness count"));
        }
        Ok(())
    }
}
