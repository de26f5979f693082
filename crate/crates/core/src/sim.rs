//! Finite-stage simulator of the product-group construction.
//!
//! The simulated ambient group is Z_2^C for a finite coordinate pool C. Each
//! block id α owns an index set I_α ⊆ C and, per ultrafilter p, a target
//! sequence of points of Z_2^{I_α} described coordinatewise by eventually
//! periodic sets. A family of coherent coordinate maps f_β fills in the
//! coordinates outside the block:
//!
//! ```text
//! z(p,α,n)(β) = target value y_{p,α,n}(β)   if β ∈ I_α
//!             = f_β(p,α,n)                  otherwise
//! ```
//!
//! [`Sim::witness_selective`] picks points of a box sequence whose p-limit
//! lands back in the simulated set, certifying each coordinate limit either
//! by an oracle p-limit (inside the block) or by coherence of f_β (outside).
//! [`Sim::witness_no_convergence`] refutes convergence of a faithfully
//! indexed family: a fresh coordinate β gets a coherent map splitting the
//! family, so the β-th coordinates of the family values hit both 0 and 1
//! infinitely often at desk scale.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::cert::VerifyFailure;
use crate::coherent::{
    coherent_split, CoherentMap, Column, SplitCert, SplitError, SplitOptions, SplitStats, StarMode,
};
use crate::group::{Bit, ExtNat, GeneratorId, GroupElement, UltrafilterId};
use crate::manifest::RunManifest;
use crate::oracle::{FiniteValuedSequence, OracleBank, OracleError, OracleState, TranscriptEntry};
use crate::periodic::PeriodicSet;

/// Identifier of a coordinate of the simulated product.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoordId(pub u32);

crate::group::id_serde!(CoordId, "a coordinate id");

impl fmt::Debug for CoordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

impl fmt::Display for CoordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A point of the finite-stage product Z_2^C, defined on every coordinate of
/// the configuration.
#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimPoint {
    bits: BTreeMap<CoordId, Bit>,
}

impl SimPoint {
    pub fn from_bits(bits: BTreeMap<CoordId, Bit>) -> SimPoint {
        SimPoint { bits }
    }

    pub fn get(&self, coord: CoordId) -> Bit {
        self.bits.get(&coord).copied().unwrap_or(Bit::ZERO)
    }

    pub fn coords(&self) -> impl Iterator<Item = (CoordId, Bit)> + '_ {
        self.bits.iter().map(|(c, b)| (*c, *b))
    }

    pub fn domain(&self) -> BTreeSet<CoordId> {
        self.bits.keys().copied().collect()
    }

    /// Coordinatewise XOR: the group operation of Z_2^C.
    pub fn xor(&self, other: &SimPoint) -> SimPoint {
        let mut bits = self.bits.clone();
        for (c, b) in &other.bits {
            *bits.entry(*c).or_insert(Bit::ZERO) ^= *b;
        }
        SimPoint { bits }
    }
}

impl fmt::Debug for SimPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (c, b)) in self.bits.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c:?}={b}")?;
        }
        write!(f, "]")
    }
}

/// A basic open box of the product: finitely many pinned coordinates,
/// everything else free.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OpenBox {
    pub constraints: BTreeMap<CoordId, Bit>,
}

impl OpenBox {
    pub fn pin(mut self, coord: CoordId, value: Bit) -> OpenBox {
        self.constraints.insert(coord, value);
        self
    }

    pub fn support(&self) -> impl Iterator<Item = CoordId> + '_ {
        self.constraints.keys().copied()
    }

    pub fn satisfied_by(&self, point: &SimPoint) -> bool {
        self.constraints.iter().all(|(c, b)| point.get(*c) == *b)
    }
}

/// Per-(p, α) target data: the set of indices n at which each block
/// coordinate takes value 1. The eventually periodic description makes the
/// coordinatewise p-limit a decidable oracle query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetSpec {
    pub p: UltrafilterId,
    pub alpha: GeneratorId,
    pub cells: BTreeMap<CoordId, PeriodicSet>,
}

/// The simulator configuration: oracle seeds, the generator and coordinate
/// pools, block index sets, block targets and coordinate maps.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SimConfig {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub oracle_seeds: BTreeMap<UltrafilterId, Vec<PeriodicSet>>,
    pub generators: BTreeSet<GeneratorId>,
    pub coords: BTreeSet<CoordId>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub index_sets: BTreeMap<GeneratorId, BTreeSet<CoordId>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub targets: Vec<TargetSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub coord_maps: BTreeMap<CoordId, CoherentMap>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("no target sequence for (p={p}, α={alpha})")]
    MissingTarget { p: UltrafilterId, alpha: GeneratorId },
    #[error("finite stage exhausted: {0}")]
    ConfigExhausted(String),
    #[error("family elements are not faithfully indexed")]
    NotFaithfullyIndexed,
    #[error("family value {index} is not the sum of its points")]
    InconsistentFamily { index: usize },
    #[error("malformed configuration: {0}")]
    MalformedConfig(String),
    #[error("internal invariant violation: {0}")]
    Internal(String),
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// A loaded simulation: validated configuration plus its oracle states.
#[derive(Clone, Debug)]
pub struct Sim {
    cfg: SimConfig,
    bank: OracleBank,
}

impl Sim {
    /// Validates the configuration, seeds the oracles and certifies every
    /// coordinate map coherent.
    pub fn new(cfg: SimConfig) -> Result<Sim, SimError> {
        for (alpha, index_set) in &cfg.index_sets {
            if !cfg.generators.contains(alpha) {
                return Err(SimError::MalformedConfig(format!(
                    "block {alpha} is not in the generator pool"
                )));
            }
            if let Some(c) = index_set.iter().find(|c| !cfg.coords.contains(c)) {
                return Err(SimError::MalformedConfig(format!(
                    "index set of block {alpha} mentions unknown coordinate {c}"
                )));
            }
        }
        if let Some(c) = cfg.coord_maps.keys().find(|c| !cfg.coords.contains(c)) {
            return Err(SimError::MalformedConfig(format!(
                "coordinate map for unknown coordinate {c}"
            )));
        }
        let mut seen = BTreeSet::new();
        for spec in &cfg.targets {
            if !seen.insert((spec.p, spec.alpha)) {
                return Err(SimError::MalformedConfig(format!(
                    "duplicate target for (p={}, α={})",
                    spec.p, spec.alpha
                )));
            }
            let index_set = cfg.index_sets.get(&spec.alpha);
            for c in spec.cells.keys() {
                if index_set.is_none_or(|s| !s.contains(c)) {
                    return Err(SimError::MalformedConfig(format!(
                        "target for (p={}, α={}) mentions coordinate {c} outside the block",
                        spec.p, spec.alpha
                    )));
                }
            }
        }
        let mut states = Vec::new();
        for (id, seeds) in &cfg.oracle_seeds {
            states.push(OracleState::with_seeds(*id, seeds.clone())?);
        }
        let mut bank = OracleBank::from_states(states);
        for map in cfg.coord_maps.values() {
            map.certify(&mut bank)?;
        }
        Ok(Sim { cfg, bank })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn transcripts(&self) -> BTreeMap<UltrafilterId, Vec<TranscriptEntry>> {
        self.bank.transcripts()
    }

    fn target_cells(
        &self,
        p: UltrafilterId,
        alpha: GeneratorId,
    ) -> Option<&BTreeMap<CoordId, PeriodicSet>> {
        self.cfg
            .targets
            .iter()
            .find(|t| t.p == p && t.alpha == alpha)
            .map(|t| &t.cells)
    }

    /// Builds the simulated point z(p, α, n): target values inside the
    /// block's index set, coordinate-map values outside.
    pub fn build_point(
        &mut self,
        p: UltrafilterId,
        alpha: GeneratorId,
        n: ExtNat,
    ) -> Result<SimPoint, SimError> {
        let index_set = self.cfg.index_sets.get(&alpha).cloned().unwrap_or_default();
        let cells = match self.target_cells(p, alpha) {
            Some(cells) => cells.clone(),
            None if index_set.is_empty() => BTreeMap::new(),
            None => return Err(SimError::MissingTarget { p, alpha }),
        };
        let mut bits = BTreeMap::new();
        for &beta in &self.cfg.coords {
            let bit = if index_set.contains(&beta) {
                let cell = cells
                    .get(&beta)
                    .ok_or(SimError::MissingTarget { p, alpha })?;
                match n {
                    ExtNat::Fin(n) => cell.member(n).into(),
                    ExtNat::Omega => {
                        let seq = FiniteValuedSequence::indicator(cell.clone());
                        self.bank
                            .state_mut(p)
                            .p_limit(&seq)
                            .expect("indicator cells partition ℕ")
                    }
                }
            } else {
                self.cfg
                    .coord_maps
                    .get(&beta)
                    .map_or(Bit::ZERO, |m| m.value(p, alpha, n))
            };
            bits.insert(beta, bit);
        }
        Ok(SimPoint { bits })
    }

    /// Produces a selective-pseudocompactness witness for the box sequence:
    /// per-box choices x_n together with their p-limit, all inside the
    /// simulated set, plus a replayable limit certificate per coordinate.
    ///
    /// The finite box list stands in for an infinite sequence by repeating
    /// with period `boxes.len()`, which keeps every target coordinate
    /// sequence eventually periodic.
    pub fn witness_selective(
        &mut self,
        p: UltrafilterId,
        boxes: &[OpenBox],
    ) -> Result<SelectiveCert, SimError> {
        if boxes.is_empty() {
            return Err(SimError::MalformedConfig("box list must be nonempty".into()));
        }
        for (i, b) in boxes.iter().enumerate() {
            if let Some(c) = b.support().find(|c| !self.cfg.coords.contains(c)) {
                return Err(SimError::MalformedConfig(format!(
                    "box {i} pins unknown coordinate {c}"
                )));
            }
        }
        let period = boxes.len() as u64;
        let support_union: BTreeSet<CoordId> = boxes.iter().flat_map(|b| b.support()).collect();

        // The hosting index set: the least block covering the union of
        // supports, else a fresh block assembled from exactly that union.
        let covering_block = self
            .cfg
            .index_sets
            .iter()
            .find(|(_, i)| support_union.is_subset(i))
            .map(|(alpha, i)| (*alpha, i.clone()));
        let index_set = covering_block
            .as_ref()
            .map(|(_, i)| i.clone())
            .unwrap_or_else(|| support_union.clone());

        // Minimal choices y_n: pinned coordinates as constrained, free block
        // coordinates 0. Coordinatewise this is periodic with the box period.
        let mut cells: BTreeMap<CoordId, PeriodicSet> = BTreeMap::new();
        for &beta in &index_set {
            let ones = (0..period).filter(|&m| {
                boxes[m as usize].constraints.get(&beta) == Some(&Bit::ONE)
            });
            let cell = PeriodicSet::new(0, period, ones, []).expect("residues below the period");
            cells.insert(beta, cell);
        }

        // Locate a block carrying exactly these targets, or install them.
        let mut block = None;
        let mut fresh_block = false;
        let candidates: Vec<GeneratorId> = self
            .cfg
            .index_sets
            .iter()
            .filter(|(_, i)| **i == index_set)
            .map(|(alpha, _)| *alpha)
            .collect();
        for alpha in candidates {
            match self.target_cells(p, alpha) {
                Some(existing) if *existing == cells => {
                    block = Some(alpha);
                    break;
                }
                None => {
                    self.cfg.targets.push(TargetSpec { p, alpha, cells: cells.clone() });
                    block = Some(alpha);
                    break;
                }
                Some(_) => continue,
            }
        }
        let block = match block {
            Some(alpha) => alpha,
            None => {
                let alpha = self
                    .cfg
                    .generators
                    .iter()
                    .find(|g| !self.cfg.index_sets.contains_key(g))
                    .copied()
                    .ok_or_else(|| {
                        SimError::ConfigExhausted(
                            "no free generator id to host a fresh block".into(),
                        )
                    })?;
                self.cfg.index_sets.insert(alpha, index_set.clone());
                self.cfg.targets.push(TargetSpec { p, alpha, cells: cells.clone() });
                fresh_block = true;
                alpha
            }
        };

        let mut choices = Vec::with_capacity(boxes.len());
        for n in 0..period {
            let x = self.build_point(p, block, ExtNat::Fin(n))?;
            if !boxes[n as usize].satisfied_by(&x) {
                return Err(SimError::Internal(format!(
                    "chosen point for box {n} violates its constraints"
                )));
            }
            choices.push(x);
        }
        let limit = self.build_point(p, block, ExtNat::Omega)?;

        let mut coord_certs = Vec::new();
        for &beta in &self.cfg.coords {
            let limit_bit = limit.get(beta);
            if index_set.contains(&beta) {
                coord_certs.push(CoordLimitCert::InsideBlock { coord: beta, limit_bit });
            } else {
                let column = self
                    .cfg
                    .coord_maps
                    .get(&beta)
                    .and_then(|m| m.column(p, block))
                    .cloned();
                coord_certs.push(CoordLimitCert::OutsideBlock { coord: beta, column, limit_bit });
            }
        }

        Ok(SelectiveCert {
            manifest: None,
            p,
            boxes: boxes.to_vec(),
            coords: self.cfg.coords.clone(),
            support_union,
            block,
            index_set,
            fresh_block,
            targets: cells,
            choices,
            limit,
            coord_certs,
            oracle_seeds: self.bank.seed_sets(),
            transcripts: self.bank.transcripts(),
        })
    }

    /// Refutes convergence of a faithfully indexed family of group values:
    /// allocates a fresh coordinate β outside every touched block's index
    /// set, splits the family's index elements by a coherent map installed
    /// as f_β, and reports the β-th coordinates of the family, which then
    /// meet both classes.
    pub fn witness_no_convergence(
        &mut self,
        family: &[(SimPoint, GroupElement)],
    ) -> Result<RefutationCert, SimError> {
        {
            let mut elems: Vec<&GroupElement> = family.iter().map(|(_, e)| e).collect();
            elems.sort();
            elems.dedup();
            if elems.len() != family.len() {
                return Err(SimError::NotFaithfullyIndexed);
            }
        }

        // Eq. consistency: each value must be the XOR of its points' z-points.
        for (m, (g, elem)) in family.iter().enumerate() {
            let mut sum =
                SimPoint { bits: self.cfg.coords.iter().map(|&c| (c, Bit::ZERO)).collect() };
            for pt in elem.points() {
                sum = sum.xor(&self.build_point(pt.p, pt.k, pt.n)?);
            }
            if sum != *g {
                return Err(SimError::InconsistentFamily { index: m });
            }
        }

        let touched: BTreeSet<GeneratorId> = family
            .iter()
            .flat_map(|(_, e)| e.points().map(|pt| pt.k).collect::<Vec<_>>())
            .collect();
        let touched_blocks: BTreeMap<GeneratorId, BTreeSet<CoordId>> = touched
            .iter()
            .map(|alpha| {
                (*alpha, self.cfg.index_sets.get(alpha).cloned().unwrap_or_default())
            })
            .collect();
        let excluded: BTreeSet<CoordId> =
            touched_blocks.values().flatten().copied().collect();

        let beta = self
            .cfg
            .coords
            .iter()
            .find(|c| !excluded.contains(c) && !self.cfg.coord_maps.contains_key(c))
            .copied()
            .ok_or_else(|| {
                SimError::ConfigExhausted("no fresh coordinate outside the touched blocks".into())
            })?;

        let stream: Vec<GroupElement> = family.iter().map(|(_, e)| e.clone()).collect();
        let split = coherent_split(
            &stream,
            SplitOptions::new(stream.len(), StarMode::Auto),
            &mut self.bank,
        )?;
        self.cfg.coord_maps.insert(beta, split.map.clone());

        let mut g_beta = Vec::with_capacity(family.len());
        let mut class0 = Vec::new();
        let mut class1 = Vec::new();
        for (m, (_, elem)) in family.iter().enumerate() {
            let bit = split.map.eval(elem);
            g_beta.push(bit);
            if bit.is_zero() {
                class0.push(m);
            } else {
                class1.push(m);
            }
        }
        let stats = SplitStats {
            count0: class0.len() as u64,
            count1: class1.len() as u64,
            steered: split.stats.steered,
        };
        let mut flags = Vec::new();
        if stats.count0.min(stats.count1) == 0 {
            flags.push("insufficient-prefix".to_string());
        }

        Ok(RefutationCert {
            manifest: None,
            family: stream,
            touched_blocks,
            excluded_coords: excluded,
            beta,
            split: Box::new(split),
            g_beta,
            class0,
            class1,
            stats,
            flags,
        })
    }
}

fn fail(check: &str, detail: impl ToString) -> VerifyFailure {
    VerifyFailure { check: check.to_string(), detail: detail.to_string() }
}

/// Per-coordinate limit certification inside a selective witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum CoordLimitCert {
    /// β ∈ I_α: the limit bit is the oracle p-limit of the target cell.
    InsideBlock { coord: CoordId, limit_bit: Bit },
    /// β ∉ I_α: the limit bit is the ω-value of f_β's (p, α) column, whose
    /// coherence certifies the coordinatewise limit. An absent column is the
    /// all-zero column.
    OutsideBlock {
        coord: CoordId,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        column: Option<Column>,
        limit_bit: Bit,
    },
}

/// A replayable selective-pseudocompactness witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectiveCert {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
    pub p: UltrafilterId,
    pub boxes: Vec<OpenBox>,
    pub coords: BTreeSet<CoordId>,
    pub support_union: BTreeSet<CoordId>,
    pub block: GeneratorId,
    pub index_set: BTreeSet<CoordId>,
    pub fresh_block: bool,
    pub targets: BTreeMap<CoordId, PeriodicSet>,
    pub choices: Vec<SimPoint>,
    pub limit: SimPoint,
    pub coord_certs: Vec<CoordLimitCert>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub oracle_seeds: BTreeMap<UltrafilterId, Vec<PeriodicSet>>,
    pub transcripts: BTreeMap<UltrafilterId, Vec<TranscriptEntry>>,
}

impl SelectiveCert {
    pub fn verify(&self) -> Result<(), VerifyFailure> {

        let mut bank = crate::coherent::replay_transcripts(&self.oracle_seeds, &self.transcripts)?;

        if self.boxes.is_empty() {
            return Err(fail("selective", "empty box list"));
        }
        let support: BTreeSet<CoordId> = self.boxes.iter().flat_map(|b| b.support()).collect();
        if support != self.support_union {
            return Err(fail("selective", "support union disagrees with the boxes"));
        }
        if !self.support_union.is_subset(&self.index_set) {
            return Err(fail("selective", "index set does not cover the box supports"));
        }
        if !self.index_set.is_subset(&self.coords) {
            return Err(fail("selective", "index set outside the coordinate pool"));
        }
        let target_domain: BTreeSet<CoordId> = self.targets.keys().copied().collect();
        if target_domain != self.index_set {
            return Err(fail("selective", "targets do not cover the index set exactly"));
        }
        if self.choices.len() != self.boxes.len() {
            return Err(fail("selective", "one choice per box is required"));
        }

        // Coordinate certificates cover the pool exactly, split by the block.
        if self.coord_certs.len() != self.coords.len() {
            return Err(fail("selective", "coordinate certificates do not cover the pool"));
        }
        for (cert, &coord) in self.coord_certs.iter().zip(self.coords.iter()) {
            let (c, inside) = match cert {
                CoordLimitCert::InsideBlock { coord, .. } => (*coord, true),
                CoordLimitCert::OutsideBlock { coord, .. } => (*coord, false),
            };
            if c != coord || inside != self.index_set.contains(&coord) {
                return Err(fail("selective", format!("coordinate certificate mismatch at {c}")));
            }
        }

        for (n, (choice, bx)) in self.choices.iter().zip(&self.boxes).enumerate() {
            if choice.domain() != self.coords {
                return Err(fail("selective", format!("choice {n} not defined on the pool")));
            }
            if !bx.satisfied_by(choice) {
                return Err(fail("box-membership", format!("choice {n} violates its box")));
            }
        }
        if self.limit.domain() != self.coords {
            return Err(fail("selective", "limit point not defined on the pool"));
        }

        for cert in &self.coord_certs {
            match cert {
                CoordLimitCert::InsideBlock { coord, limit_bit } => {
                    let cell = self
                        .targets
                        .get(coord)
                        .ok_or_else(|| fail("selective", format!("no target at {coord}")))?;
                    // Choices follow the (periodically extended) targets.
                    for (n, choice) in self.choices.iter().enumerate() {
                        if choice.get(*coord) != Bit::from(cell.member(n as u64)) {
                            return Err(fail(
                                "limit-replay",
                                format!("choice {n} disagrees with the target at {coord}"),
                            ));
                        }
                    }
                    let seq = FiniteValuedSequence::indicator(cell.clone());
                    let replayed = bank
                        .state_mut(self.p)
                        .p_limit(&seq)
                        .map_err(|e| fail("limit-replay", e))?;
                    if replayed != *limit_bit || self.limit.get(*coord) != *limit_bit {
                        return Err(fail(
                            "limit-replay",
                            format!("p-limit at {coord} does not replay"),
                        ));
                    }
                }
                CoordLimitCert::OutsideBlock { coord, column, limit_bit } => {
                    let (omega, at): (Bit, Box<dyn Fn(u64) -> Bit>) = match column {
                        Some(col) => {
                            if col.p != self.p || col.k != self.block {
                                return Err(fail(
                                    "limit-replay",
                                    format!("column at {coord} owned by the wrong pair"),
                                ));
                            }
                            if !bank.state_mut(col.p).query(&col.agreement_set()).is_one() {
                                return Err(fail(
                                    "coherence",
                                    format!("column at {coord} not decided coherent"),
                                ));
                            }
                            let ones = col.ones.clone();
                            (col.omega, Box::new(move |n| ones.member(n).into()))
                        }
                        None => (Bit::ZERO, Box::new(|_| Bit::ZERO)),
                    };
                    if *limit_bit != omega || self.limit.get(*coord) != omega {
                        return Err(fail(
                            "limit-replay",
                            format!("limit at {coord} disagrees with the column ω-value"),
                        ));
                    }
                    for (n, choice) in self.choices.iter().enumerate() {
                        if choice.get(*coord) != at(n as u64) {
                            return Err(fail(
                                "limit-replay",
                                format!("choice {n} disagrees with the column at {coord}"),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// A replayable refutation of convergence for a family of group values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefutationCert {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
    /// The index elements E_m, in family order.
    pub family: Vec<GroupElement>,
    /// Index sets of every block touched by the family.
    pub touched_blocks: BTreeMap<GeneratorId, BTreeSet<CoordId>>,
    /// The union of the touched index sets; β must avoid it.
    pub excluded_coords: BTreeSet<CoordId>,
    pub beta: CoordId,
    /// The split certificate producing f_β.
    pub split: Box<SplitCert>,
    /// g_m(β) per family member.
    pub g_beta: Vec<Bit>,
    pub class0: Vec<usize>,
    pub class1: Vec<usize>,
    pub stats: SplitStats,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

impl RefutationCert {
    pub fn verify(&self) -> Result<(), VerifyFailure> {

        {
            let mut elems: Vec<&GroupElement> = self.family.iter().collect();
            elems.sort();
            elems.dedup();
            if elems.len() != self.family.len() {
                return Err(fail("faithful-indexing", "family elements repeat"));
            }
        }
        // β lies outside every touched block's index set.
        let excluded: BTreeSet<CoordId> =
            self.touched_blocks.values().flatten().copied().collect();
        if excluded != self.excluded_coords {
            return Err(fail("refutation", "excluded coordinates disagree with the blocks"));
        }
        if self.excluded_coords.contains(&self.beta) {
            return Err(fail("refutation", "β lies inside a touched block"));
        }
        for (m, elem) in self.family.iter().enumerate() {
            if let Some(pt) = elem.points().find(|pt| !self.touched_blocks.contains_key(&pt.k)) {
                return Err(fail(
                    "refutation",
                    format!("family member {m} touches unlisted block {}", pt.k),
                ));
            }
        }

        self.split.verify()?;

        if self.g_beta.len() != self.family.len() {
            return Err(fail("refutation", "one β-value per family member is required"));
        }
        let mut count0 = 0u64;
        let mut count1 = 0u64;
        for (m, (elem, bit)) in self.family.iter().zip(&self.g_beta).enumerate() {
            // The displayed equality chain: with β outside every touched
            // block, g_m(β) is exactly the homomorphism value of f_β on E_m.
            if self.split.map.eval(elem) != *bit {
                return Err(fail(
                    "refutation",
                    format!("g_{m}(β) does not equal the map value on its element"),
                ));
            }
            let in0 = self.class0.contains(&m);
            let in1 = self.class1.contains(&m);
            if in0 == in1 || (bit.is_zero() != in0) {
                return Err(fail("refutation", format!("member {m} misclassified")));
            }
            if bit.is_zero() {
                count0 += 1;
            } else {
                count1 += 1;
            }
        }
        if self.stats.count0 != count0 || self.stats.count1 != count1 {
            return Err(fail("stats", "class sizes disagree with recorded counts"));
        }
        if count0.min(count1) < self.stats.steered / 2 {
            return Err(fail("balance-bound", "refutation classes below ⌊s/2⌋"));
        }
        if self.stats.steered != self.split.stats.steered {
            return Err(fail("stats", "steered count disagrees with the split certificate"));
        }
        Ok(())
    }
}
