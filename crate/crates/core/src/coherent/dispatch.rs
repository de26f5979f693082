//! The splitting dispatcher and clopen classification.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::group::{Bit, GeneratorId, GroupElement, Point, UltrafilterId};
use crate::oracle::OracleBank;

use super::certificate::SplitCert;
use super::column::CoherentMap;
use super::forcing::{ChainRun, DenseGoal};
use super::SplitError;

/// Which splitting path to take.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StarMode {
    /// Pick the forcing path when the prefix carries many distinct star
    /// points (more than ⌈√cutoff⌉), the finite-trace path otherwise.
    Auto,
    Finite,
    Infinite,
}

/// Parameters of a dispatched split run.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SplitOptions {
    /// How many stream elements to process.
    pub cutoff: usize,
    pub mode: StarMode,
    /// Total goals for the forcing path: the id prelude plus the hit goals.
    /// Defaults to the prelude plus cutoff/2 hit goals.
    pub schedule_len: Option<usize>,
}

impl SplitOptions {
    pub fn new(cutoff: usize, mode: StarMode) -> SplitOptions {
        SplitOptions { cutoff, mode, schedule_len: None }
    }
}

/// Splits the first `cutoff` elements of the stream by a coherent map.
///
/// The stream is first restricted to the ids actually occurring (the final
/// map is 0 outside its columns either way). The finite path buckets by star
/// trace; the forcing path runs the canonical schedule: id goals for every
/// ultrafilter and generator occurring in non-star coordinates, then hit
/// goals alternating between target 0 and 1, each excluding the witnesses
/// already recorded. Scheduling id goals only for non-star occurrences keeps
/// the ω-slice of the condition product from swallowing the stream's star
/// points, which the hit goals must consume fresh.
pub fn coherent_split(
    stream: &[GroupElement],
    opts: SplitOptions,
    bank: &mut OracleBank,
) -> Result<SplitCert, SplitError> {
    let elems: Vec<GroupElement> = stream.iter().take(opts.cutoff).cloned().collect();
    if elems.is_empty() {
        return Err(SplitError::EmptyInput);
    }
    {
        let mut sorted: Vec<&GroupElement> = elems.iter().collect();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != elems.len() {
            return Err(SplitError::DuplicateElement);
        }
    }

    let star_points: BTreeSet<Point> = elems
        .iter()
        .flat_map(|a| a.points().filter(|pt| pt.is_star()).copied().collect::<Vec<_>>())
        .collect();
    let infinite_path = match opts.mode {
        StarMode::Finite => false,
        StarMode::Infinite => true,
        StarMode::Auto => star_points.len() > (opts.cutoff as f64).sqrt().ceil() as usize,
    };

    if !infinite_path {
        return super::finite::split_finite_trace(&elems, opts.cutoff, bank);
    }

    let mut occurring_p: BTreeSet<UltrafilterId> = BTreeSet::new();
    let mut occurring_k: BTreeSet<GeneratorId> = BTreeSet::new();
    for a in &elems {
        for pt in a.points().filter(|pt| !pt.is_star()) {
            occurring_p.insert(pt.p);
            occurring_k.insert(pt.k);
        }
    }
    let prelude = occurring_p.len() + occurring_k.len();
    let hits = match opts.schedule_len {
        Some(len) if len < prelude => {
            return Err(SplitError::ScheduleTooShort { requested: len, prelude })
        }
        Some(len) => len - prelude,
        None => opts.cutoff / 2,
    };

    let mut run = ChainRun::new();
    for p in &occurring_p {
        run.meet(&DenseGoal::AddUltrafilter { p: *p }, &elems, bank)?;
    }
    for k in &occurring_k {
        run.meet(&DenseGoal::AddGenerator { k: *k }, &elems, bank)?;
    }
    for m in 0..hits {
        let goal = DenseGoal::Hit {
            exclude: run.witness_elements(),
            target: Bit::from(m % 2 == 1),
        };
        run.meet(&goal, &elems, bank)?;
    }
    Ok(run.into_certificate(bank))
}

/// The clopen partition report: every element classified into the two
/// preimage classes of a coherent map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub class0: Vec<GroupElement>,
    pub class1: Vec<GroupElement>,
}

impl PartitionReport {
    pub fn sizes(&self) -> (usize, usize) {
        (self.class0.len(), self.class1.len())
    }
}

/// Classifies each element into U_i = f̃⁻¹(i) for the given coherent map.
/// For the family of a split certificate both classes come out nonempty,
/// which is the convergence refutation: the family meets both halves of a
/// clopen partition.
pub fn clopen_certificate(map: &CoherentMap, elements: &[GroupElement]) -> PartitionReport {
    let mut report = PartitionReport { class0: Vec::new(), class1: Vec::new() };
    for elem in elements {
        if map.eval(elem).is_zero() {
            report.class0.push(elem.clone());
        } else {
            report.class1.push(elem.clone());
        }
    }
    report
}
