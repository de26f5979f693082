//! Dense goals of the forcing poset and the chain recursion meeting them.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::group::{Bit, GeneratorId, GroupElement, Point, UltrafilterId};
use crate::oracle::OracleBank;
use crate::periodic::PeriodicSet;

use super::certificate::{SplitCert, SplitDetail, SplitStats};
use super::column::Column;
use super::condition::Condition;
use super::SplitError;

/// A dense subset of the poset of conditions, named by what a condition must
/// contain to lie inside it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum DenseGoal {
    /// Conditions whose ultrafilter set contains `p`.
    AddUltrafilter { p: UltrafilterId },
    /// Conditions whose generator set contains `k`.
    AddGenerator { k: GeneratorId },
    /// Conditions whose domain covers some stream element outside `exclude`
    /// and whose map sends it to `target`.
    Hit { exclude: Vec<GroupElement>, target: Bit },
}

/// The element recorded when a `Hit` goal was met, together with the star
/// point whose fresh column steered its value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HitWitness {
    pub element: GroupElement,
    pub steering: Point,
    pub target: Bit,
}

/// One step of a descending chain: the goal met and exactly what the new
/// condition added on top of the previous one. Added ids carry implicit
/// all-zero columns; only nonzero columns are listed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    pub goal: DenseGoal,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ultras_added: Vec<UltrafilterId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gens_added: Vec<GeneratorId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub columns_added: Vec<Column>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<HitWitness>,
}

/// Finds a condition q ≤ r inside the goal's dense set.
///
/// For the id goals the extension adds implicit all-zero columns, which are
/// coherent for every oracle. For a `Hit` goal the step follows the fresh-
/// column construction: the forbidden set F collects the star points of the
/// excluded elements and the whole ω-slice of r's product; the witness is the
/// first stream element outside `exclude` carrying a star point outside F.
/// That star point's (p₀, k₀) column is new, takes the correcting value l at
/// ω and off the witness, and 0 on the witness's finite points, so the
/// witness evaluates to the target and the column's agreement set is
/// cofinite, hence in p.
///
/// `goal_index` is only used to label errors.
pub fn meet_dense(
    r: &Condition,
    goal: &DenseGoal,
    stream: &[GroupElement],
    bank: &mut OracleBank,
    goal_index: usize,
) -> Result<(Condition, ChainStep), SplitError> {
    match goal {
        DenseGoal::AddUltrafilter { p } => {
            let mut q = r.clone();
            let added = q.add_ultrafilter(*p);
            let step = ChainStep {
                goal: goal.clone(),
                ultras_added: if added { vec![*p] } else { vec![] },
                gens_added: vec![],
                columns_added: vec![],
                witness: None,
            };
            Ok((q, step))
        }
        DenseGoal::AddGenerator { k } => {
            let mut q = r.clone();
            let added = q.add_generator(*k);
            let step = ChainStep {
                goal: goal.clone(),
                ultras_added: vec![],
                gens_added: if added { vec![*k] } else { vec![] },
                columns_added: vec![],
                witness: None,
            };
            Ok((q, step))
        }
        DenseGoal::Hit { exclude, target } => {
            let exclude_set: BTreeSet<&GroupElement> = exclude.iter().collect();
            if exclude_set.len() != exclude.len() {
                return Err(SplitError::DuplicateElement);
            }
            let exclude_stars: BTreeSet<Point> = exclude
                .iter()
                .flat_map(|b| b.star_trace().points().copied().collect::<Vec<_>>())
                .collect();
            let in_forbidden = |pt: &Point| -> bool {
                exclude_stars.contains(pt) || r.star_slice_contains(pt)
            };

            let mut found: Option<(&GroupElement, Point)> = None;
            'scan: for a in stream {
                if exclude_set.contains(a) {
                    continue;
                }
                for pt in a.points().filter(|pt| pt.is_star()) {
                    if !in_forbidden(pt) {
                        found = Some((a, *pt));
                        break 'scan;
                    }
                }
            }
            let (witness, steering) =
                found.ok_or(SplitError::NoWitness { goal_index })?;

            let mut q = r.clone();
            let mut ultras_added = Vec::new();
            let mut gens_added = Vec::new();
            for pt in witness.points() {
                if q.add_ultrafilter(pt.p) {
                    ultras_added.push(pt.p);
                }
                if q.add_generator(pt.k) {
                    gens_added.push(pt.k);
                }
            }

            // The part of the witness already inside r's domain determines
            // the correction l the fresh column must contribute.
            let inside = witness.filter(|pt| r.contains_pair(pt.p, pt.k));
            let j = r.eval(&inside)?;
            let l = *target ^ j;

            let witness_ns: Vec<u64> = witness
                .points()
                .filter(|pt| pt.p == steering.p && pt.k == steering.k)
                .filter_map(|pt| match pt.n {
                    crate::group::ExtNat::Fin(n) => Some(n),
                    crate::group::ExtNat::Omega => None,
                })
                .collect();
            let column = if l.is_one() {
                Column {
                    p: steering.p,
                    k: steering.k,
                    ones: PeriodicSet::finite(witness_ns).complement(),
                    omega: Bit::ONE,
                }
            } else {
                Column::all_zero(steering.p, steering.k)
            };

            let answer = bank.state_mut(steering.p).query(&column.agreement_set());
            if !answer.is_one() {
                return Err(SplitError::IncoherentResult(format!(
                    "steering column ({}, {}) agreement set not in p",
                    steering.p, steering.k
                )));
            }
            let columns_added = if column.is_all_zero() {
                vec![]
            } else {
                q.insert_column(column.clone())?;
                vec![column]
            };

            let value = q.eval(witness)?;
            if value != *target {
                return Err(SplitError::IncoherentResult(format!(
                    "hit witness evaluates to {value}, wanted {target}"
                )));
            }

            let step = ChainStep {
                goal: goal.clone(),
                ultras_added,
                gens_added,
                columns_added,
                witness: Some(HitWitness {
                    element: witness.clone(),
                    steering,
                    target: *target,
                }),
            };
            Ok((q, step))
        }
    }
}

/// A descending chain under construction.
#[derive(Clone, Debug, Default)]
pub struct ChainRun {
    condition: Condition,
    chain: Vec<ChainStep>,
    witnesses: Vec<HitWitness>,
}

impl ChainRun {
    pub fn new() -> ChainRun {
        ChainRun::default()
    }

    pub fn condition(&self) -> &Condition {
        &self.condition
    }

    pub fn chain(&self) -> &[ChainStep] {
        &self.chain
    }

    pub fn witnesses(&self) -> &[HitWitness] {
        &self.witnesses
    }

    pub fn witness_elements(&self) -> Vec<GroupElement> {
        self.witnesses.iter().map(|w| w.element.clone()).collect()
    }

    /// Descends into the goal's dense set, recording the step.
    pub fn meet(
        &mut self,
        goal: &DenseGoal,
        stream: &[GroupElement],
        bank: &mut OracleBank,
    ) -> Result<(), SplitError> {
        let index = self.chain.len();
        let (next, step) = meet_dense(&self.condition, goal, stream, bank, index)?;
        debug_assert!(next.leq(&self.condition), "chain must descend");
        if let Some(w) = &step.witness {
            self.witnesses.push(w.clone());
        }
        self.chain.push(step);
        self.condition = next;
        Ok(())
    }

    /// Packages the chain into a certificate: the union map of the last
    /// condition with default 0 outside, the recorded witnesses as classes,
    /// and the oracle transcripts.
    pub fn into_certificate(self, bank: &OracleBank) -> SplitCert {
        let map = self.condition.to_map();
        let mut class0 = Vec::new();
        let mut class1 = Vec::new();
        for w in &self.witnesses {
            if w.target.is_zero() {
                class0.push(w.element.clone());
            } else {
                class1.push(w.element.clone());
            }
        }
        let stats = SplitStats {
            count0: class0.len() as u64,
            count1: class1.len() as u64,
            steered: self.witnesses.len() as u64,
        };
        SplitCert {
            manifest: None,
            map,
            class0,
            class1,
            stats,
            oracle_seeds: bank.seed_sets(),
            transcripts: bank.transcripts(),
            detail: SplitDetail::Forcing { chain: self.chain, witnesses: self.witnesses },
            flags: Vec::new(),
        }
    }
}

/// Folds a finite goal schedule into a descending chain starting from the
/// empty condition, and returns the certificate of the resulting map. Each
/// `Hit` goal records a witness with the scheduled value; a goal that cannot
/// be met in the available prefix fails with its index.
pub fn forcing_split(
    stream: &[GroupElement],
    schedule: &[DenseGoal],
    bank: &mut OracleBank,
) -> Result<SplitCert, SplitError> {
    let mut run = ChainRun::new();
    for goal in schedule {
        run.meet(goal, stream, bank)?;
    }
    Ok(run.into_certificate(bank))
}
