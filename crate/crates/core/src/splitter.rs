//! Online construction of a map splitting a stream of distinct group
//! elements into two classes.
//!
//! Elements arrive one at a time. Whenever the incoming element contains a
//! point not yet assigned, the splitter can *steer*: it fixes all other
//! unassigned points of the element to 0 and chooses the value of the
//! greatest unassigned point so that the element lands in the currently
//! smaller class. Elements whose points are all assigned are *forced*. After
//! s steered elements both classes hold at least ⌊s/2⌋ members, and only
//! subsets of the assigned domain can ever be forced, so a stream touching
//! infinitely many points keeps producing steerable elements.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{Bit, GroupElement, Point, TwoValuedMap};

/// How an element's class was determined.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FeedKind {
    /// The value was chosen freely by assigning `point`.
    Steered { point: Point },
    /// All points were already assigned; the value was determined.
    Forced,
}

/// Outcome of feeding one element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedReport {
    pub element: GroupElement,
    pub value: Bit,
    #[serde(flatten)]
    pub kind: FeedKind,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FeedError {
    #[error("element was already fed")]
    DuplicateElement,
    #[error("the zero element cannot be split")]
    EmptyElement,
}

/// State of one splitting run.
#[derive(Clone, Debug, Default)]
pub struct SplitterState {
    partial: TwoValuedMap,
    count0: u64,
    count1: u64,
    steered: u64,
    log: Vec<FeedReport>,
    seen: std::collections::BTreeSet<GroupElement>,
}

impl SplitterState {
    pub fn new() -> SplitterState {
        SplitterState::default()
    }

    pub fn counts(&self) -> (u64, u64) {
        (self.count0, self.count1)
    }

    pub fn steered(&self) -> u64 {
        self.steered
    }

    pub fn min_class(&self) -> u64 {
        self.count0.min(self.count1)
    }

    pub fn log(&self) -> &[FeedReport] {
        &self.log
    }

    /// Feeds the next element of the stream.
    ///
    /// If the element has unassigned points, the greatest one steers: the
    /// others are fixed to 0 and the steering point is set so the element's
    /// value is the minority class (ties go to class 0). Otherwise the value
    /// is forced by the existing assignments.
    pub fn feed(&mut self, element: &GroupElement) -> Result<FeedReport, FeedError> {
        if element.is_zero() {
            return Err(FeedError::EmptyElement);
        }
        if self.seen.contains(element) {
            return Err(FeedError::DuplicateElement);
        }
        self.seen.insert(element.clone());

        let unassigned: Vec<Point> = element
            .points()
            .filter(|pt| !self.partial.is_assigned(pt))
            .copied()
            .collect();

        let report = if let Some((&steering, rest)) = unassigned.split_last() {
            for pt in rest {
                self.partial.assign(*pt, Bit::ZERO);
            }
            let known = element
                .points()
                .filter(|pt| **pt != steering)
                .fold(Bit::ZERO, |acc, pt| {
                    acc ^ self.partial.get(pt).expect("co-points assigned above")
                });
            let target = if self.count1 < self.count0 { Bit::ONE } else { Bit::ZERO };
            self.partial.assign(steering, target ^ known);
            self.steered += 1;
            FeedReport {
                element: element.clone(),
                value: target,
                kind: FeedKind::Steered { point: steering },
            }
        } else {
            let value = self
                .partial
                .hom_eval(element)
                .expect("all points assigned in the forced case");
            FeedReport { element: element.clone(), value, kind: FeedKind::Forced }
        };

        if report.value.is_zero() {
            self.count0 += 1;
        } else {
            self.count1 += 1;
        }
        debug_assert!(
            self.min_class() >= self.steered / 2,
            "balance bound violated: counts ({}, {}), steered {}",
            self.count0,
            self.count1,
            self.steered
        );
        self.log.push(report.clone());
        Ok(report)
    }

    /// The constructed map, made total by defaulting to 0 off the support.
    /// Idempotent: feeding nothing in between, repeated calls agree.
    pub fn finalize(&self) -> TwoValuedMap {
        self.partial.with_default(Bit::ZERO)
    }
}
