//! The finite-star-trace splitting path.

use std::collections::BTreeMap;

use crate::group::{ExtNat, GroupElement};
use crate::oracle::OracleBank;
use crate::periodic::PeriodicSet;
use crate::splitter::SplitterState;

use super::certificate::{BucketStat, SplitCert, SplitDetail, SplitStats};
use super::column::{extend_coherently, CoherentMap, PartialColumn};
use super::SplitError;

/// Splits a stream whose elements have only finitely many distinct star
/// traces.
///
/// The first `cutoff` elements are bucketed by star trace. The largest bucket
/// (ties resolved toward the least trace) shares one trace I; its non-star
/// parts are split by the online splitter, the resulting finite map is
/// extended coherently, and with j = f̃(I) every element of the bucket
/// satisfies f̃(a) = f̃(a ∖ I) XOR j, so the bucket splits as evenly as its
/// non-star parts. Elements of other buckets are classified by the final map
/// but carry no balance guarantee.
pub fn split_finite_trace(
    stream: &[GroupElement],
    cutoff: usize,
    bank: &mut OracleBank,
) -> Result<SplitCert, SplitError> {
    let elems: Vec<&GroupElement> = stream.iter().take(cutoff).collect();
    if elems.is_empty() {
        return Err(SplitError::EmptyInput);
    }
    {
        let mut sorted = elems.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != elems.len() {
            return Err(SplitError::DuplicateElement);
        }
    }

    let mut buckets: BTreeMap<GroupElement, Vec<&GroupElement>> = BTreeMap::new();
    for a in &elems {
        buckets.entry(a.star_trace()).or_default().push(a);
    }
    // Largest bucket; BTreeMap order makes the tie-break "least trace".
    let selected_trace = buckets
        .iter()
        .max_by_key(|(trace, members)| (members.len(), std::cmp::Reverse((*trace).clone())))
        .map(|(trace, _)| trace.clone())
        .expect("nonempty input");
    let dominant = &buckets[&selected_trace];

    let mut splitter = SplitterState::new();
    let mut flags = Vec::new();
    for a in dominant {
        let non_star = a.filter(|pt| !pt.is_star());
        if non_star.is_zero() {
            // The element equal to its own trace has an empty non-star part;
            // it is classified by the final map but cannot be fed.
            flags.push("trace-equal-element-not-fed".to_string());
            continue;
        }
        splitter.feed(&non_star).map_err(|_| SplitError::DuplicateElement)?;
    }

    // Group the splitter's 1-assignments into columns and extend coherently;
    // pairs with only 0-assignments stay implicit all-zero.
    let final_partial = splitter.finalize();
    let mut ones: BTreeMap<(crate::group::UltrafilterId, crate::group::GeneratorId), Vec<u64>> =
        BTreeMap::new();
    for (pt, value) in final_partial.support() {
        if value.is_one() {
            match pt.n {
                ExtNat::Fin(n) => ones.entry((pt.p, pt.k)).or_default().push(n),
                ExtNat::Omega => unreachable!("non-star parts contain no limit points"),
            }
        }
    }
    let partial_columns: Vec<PartialColumn> = ones
        .into_iter()
        .map(|((p, k), ns)| PartialColumn::new(p, k, PeriodicSet::finite(ns)))
        .collect();
    let columns = extend_coherently(partial_columns, bank);
    let map = CoherentMap::from_columns(columns);
    map.certify(bank)?;

    let j = map.eval(&selected_trace);

    let mut class0 = Vec::new();
    let mut class1 = Vec::new();
    for a in &elems {
        if map.eval(a).is_zero() {
            class0.push((*a).clone());
        } else {
            class1.push((*a).clone());
        }
    }
    let bucket_stats: Vec<BucketStat> = buckets
        .iter()
        .map(|(trace, members)| BucketStat { trace: trace.clone(), size: members.len() as u64 })
        .collect();
    if dominant.len() * 2 < elems.len() {
        flags.push("dominant-bucket-minority".to_string());
    }
    flags.dedup();

    let stats = SplitStats {
        count0: class0.len() as u64,
        count1: class1.len() as u64,
        steered: splitter.steered(),
    };
    Ok(SplitCert {
        manifest: None,
        map,
        class0,
        class1,
        stats,
        oracle_seeds: bank.seed_sets(),
        transcripts: bank.transcripts(),
        detail: SplitDetail::FiniteTrace {
            selected_trace,
            j,
            buckets: bucket_stats,
            reports: splitter.log().to_vec(),
        },
        flags,
    })
}
