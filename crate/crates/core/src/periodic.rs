//! Exact algebra of eventually periodic subsets of ℕ.
//!
//! A [`PeriodicSet`] describes a set S ⊆ ℕ by an explicit finite part below a
//! threshold and a residue pattern repeating beyond it:
//!
//! ```text
//! n ∈ S  ⟺  (n < threshold and n ∈ prefix)
//!        or (n ≥ threshold and n mod modulus ∈ residues)
//! ```
//!
//! The class is closed under complement, union and intersection, and both
//! membership and infinitude are decidable, which is everything the engine
//! needs from "a subset of ℕ". Every value is kept in canonical form (minimal
//! tail period, minimal threshold), so structural equality coincides with set
//! equality.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PeriodicSetError {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("residue {residue} is not below the modulus {modulus}")]
    ResidueOutOfRange { residue: u64, modulus: u64 },
    #[error("prefix entry {entry} is not below the threshold {threshold}")]
    PrefixOutOfRange { entry: u64, threshold: u64 },
}

/// An eventually periodic subset of ℕ in canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPeriodicSet")]
pub struct PeriodicSet {
    threshold: u64,
    modulus: u64,
    residues: BTreeSet<u64>,
    prefix: BTreeSet<u64>,
}

/// Wire form; validated and canonicalized on deserialization.
#[derive(Deserialize)]
struct RawPeriodicSet {
    threshold: u64,
    modulus: u64,
    residues: BTreeSet<u64>,
    prefix: BTreeSet<u64>,
}

impl TryFrom<RawPeriodicSet> for PeriodicSet {
    type Error = PeriodicSetError;

    fn try_from(raw: RawPeriodicSet) -> Result<PeriodicSet, PeriodicSetError> {
        PeriodicSet::new(raw.threshold, raw.modulus, raw.residues, raw.prefix)
    }
}

impl PeriodicSet {
    /// Builds a set from its parts, validating the representation invariants
    /// and reducing to canonical form.
    pub fn new(
        threshold: u64,
        modulus: u64,
        residues: impl IntoIterator<Item = u64>,
        prefix: impl IntoIterator<Item = u64>,
    ) -> Result<PeriodicSet, PeriodicSetError> {
        if modulus == 0 {
            return Err(PeriodicSetError::ZeroModulus);
        }
        let residues: BTreeSet<u64> = residues.into_iter().collect();
        if let Some(&r) = residues.iter().find(|&&r| r >= modulus) {
            return Err(PeriodicSetError::ResidueOutOfRange { residue: r, modulus });
        }
        let prefix: BTreeSet<u64> = prefix.into_iter().collect();
        if let Some(&e) = prefix.iter().find(|&&e| e >= threshold) {
            return Err(PeriodicSetError::PrefixOutOfRange { entry: e, threshold });
        }
        let mut set = PeriodicSet { threshold, modulus, residues, prefix };
        set.canonicalize();
        Ok(set)
    }

    /// The empty set.
    pub fn empty() -> PeriodicSet {
        PeriodicSet {
            threshold: 0,
            modulus: 1,
            residues: BTreeSet::new(),
            prefix: BTreeSet::new(),
        }
    }

    /// All of ℕ.
    pub fn all() -> PeriodicSet {
        PeriodicSet {
            threshold: 0,
            modulus: 1,
            residues: BTreeSet::from([0]),
            prefix: BTreeSet::new(),
        }
    }

    /// The finite set with exactly the given members.
    pub fn finite(members: impl IntoIterator<Item = u64>) -> PeriodicSet {
        let prefix: BTreeSet<u64> = members.into_iter().collect();
        let threshold = prefix.iter().next_back().map_or(0, |&m| m + 1);
        let mut set = PeriodicSet {
            threshold,
            modulus: 1,
            residues: BTreeSet::new(),
            prefix,
        };
        set.canonicalize();
        set
    }

    /// The residue class {n : n ≡ r (mod m)}. Panics if r ≥ m or m = 0.
    pub fn residue_class(r: u64, m: u64) -> PeriodicSet {
        assert!(m >= 1, "modulus must be at least 1");
        assert!(r < m, "residue must be below the modulus");
        let mut set = PeriodicSet {
            threshold: 0,
            modulus: m,
            residues: BTreeSet::from([r]),
            prefix: BTreeSet::new(),
        };
        set.canonicalize();
        set
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> &BTreeSet<u64> {
        &self.residues
    }

    pub fn prefix(&self) -> &BTreeSet<u64> {
        &self.prefix
    }

    /// Decides n ∈ S.
    pub fn member(&self, n: u64) -> bool {
        if n < self.threshold {
            self.prefix.contains(&n)
        } else {
            self.residues.contains(&(n % self.modulus))
        }
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty() && self.prefix.is_empty()
    }

    /// Infinite iff the periodic tail is nonempty.
    pub fn is_infinite(&self) -> bool {
        !self.residues.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    /// Cofinite iff the tail covers every residue class.
    pub fn is_cofinite(&self) -> bool {
        self.residues.len() as u64 == self.modulus
    }

    /// Pointwise complement.
    pub fn complement(&self) -> PeriodicSet {
        let residues = (0..self.modulus).filter(|r| !self.residues.contains(r)).collect();
        let prefix = (0..self.threshold).filter(|e| !self.prefix.contains(e)).collect();
        let mut set = PeriodicSet {
            threshold: self.threshold,
            modulus: self.modulus,
            residues,
            prefix,
        };
        set.canonicalize();
        set
    }

    /// Pointwise intersection, computed over the lcm of the two moduli.
    pub fn intersect(&self, other: &PeriodicSet) -> PeriodicSet {
        self.combine(other, |a, b| a && b)
    }

    /// Pointwise union, computed over the lcm of the two moduli.
    pub fn union(&self, other: &PeriodicSet) -> PeriodicSet {
        self.combine(other, |a, b| a || b)
    }

    /// Set difference self ∖ other.
    pub fn minus(&self, other: &PeriodicSet) -> PeriodicSet {
        self.combine(other, |a, b| a && !b)
    }

    /// Decides self ⊆ other.
    pub fn is_subset_of(&self, other: &PeriodicSet) -> bool {
        self.minus(other).is_empty()
    }

    /// Members below the bound, in increasing order.
    pub fn members_below(&self, bound: u64) -> impl Iterator<Item = u64> + '_ {
        (0..bound).filter(|&n| self.member(n))
    }

    /// A window size on which pointwise agreement with `other` decides set
    /// equality: beyond both thresholds the sets repeat with the joint period.
    pub fn agreement_window(&self, other: &PeriodicSet) -> u64 {
        self.threshold.max(other.threshold) + lcm(self.modulus, other.modulus)
    }

    fn combine(&self, other: &PeriodicSet, op: impl Fn(bool, bool) -> bool) -> PeriodicSet {
        let modulus = lcm(self.modulus, other.modulus);
        let threshold = self.threshold.max(other.threshold);
        let residues = (0..modulus)
            .filter(|&r| {
                // Evaluate tail membership at a representative beyond both thresholds.
                let rep = threshold + (modulus - threshold % modulus) % modulus + r;
                op(
                    self.residues.contains(&(rep % self.modulus)),
                    other.residues.contains(&(rep % other.modulus)),
                )
            })
            .collect();
        let prefix = (0..threshold)
            .filter(|&n| op(self.member(n), other.member(n)))
            .collect();
        let mut set = PeriodicSet { threshold, modulus, residues, prefix };
        set.canonicalize();
        set
    }

    /// Reduces the tail pattern to its minimal period and the threshold to the
    /// least point from which the tail description holds, so that structural
    /// equality coincides with set equality. Membership is unchanged.
    fn canonicalize(&mut self) {
        // Minimal period: smallest divisor d of the modulus under which the
        // residue pattern is invariant.
        let m = self.modulus;
        for d in (1..=m).filter(|&d| m.is_multiple_of(d)) {
            if (0..m).all(|r| self.residues.contains(&r) == self.residues.contains(&((r + d) % m))) {
                if d < m {
                    self.residues = self.residues.iter().copied().filter(|&r| r < d).collect();
                    self.modulus = d;
                }
                break;
            }
        }
        // Minimal threshold: absorb boundary points whose prefix membership
        // already agrees with the tail pattern.
        while self.threshold > 0 {
            let n = self.threshold - 1;
            let in_prefix = self.prefix.contains(&n);
            let in_tail = self.residues.contains(&(n % self.modulus));
            if in_prefix != in_tail {
                break;
            }
            self.prefix.remove(&n);
            self.threshold = n;
        }
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    (a / a.gcd(&b)).checked_mul(b).expect("modulus overflow in lcm")
}

impl fmt::Debug for PeriodicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PeriodicSet(N={}, m={}, R={:?}, prefix={:?})",
            self.threshold, self.modulus, self.residues, self.prefix
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn evens() -> PeriodicSet {
        PeriodicSet::residue_class(0, 2)
    }

    fn odds() -> PeriodicSet {
        PeriodicSet::residue_class(1, 2)
    }

    /// Brute-force membership comparison on a window that decides equality.
    fn same_set(a: &PeriodicSet, b: &PeriodicSet) -> bool {
        (0..a.agreement_window(b)).all(|n| a.member(n) == b.member(n))
    }

    #[test]
    fn member_matches_semantics() {
        assert!(!evens().member(7));
        assert!(evens().member(4));
        for n in 0..10 {
            assert!(!PeriodicSet::empty().member(n));
            assert!(PeriodicSet::all().member(n));
        }
    }

    #[test]
    fn member_mixed_prefix_and_tail() {
        // ⟨N=4, m=3, R={1}, prefix={0}⟩: hand enumeration over 0..=10 gives
        // members {0, 4, 7, 10}.
        let s = PeriodicSet::new(4, 3, [1], [0]).unwrap();
        let expected = [true, false, false, false, true, false, false, true, false, false, true];
        for (n, want) in expected.iter().enumerate() {
            assert_eq!(s.member(n as u64), *want, "n={n}");
        }
        assert!(s.member(0));
        assert!(!s.member(3));
        assert!(s.member(7));
    }

    #[test]
    fn intersect_even_odd_is_empty() {
        assert_eq!(evens().intersect(&odds()), PeriodicSet::empty());
    }

    #[test]
    fn complement_of_finite_is_cofinite() {
        let c = PeriodicSet::finite([0, 1, 2]).complement();
        assert!(c.is_cofinite());
        for n in 0..50 {
            assert_eq!(c.member(n), n >= 3);
        }
    }

    #[test]
    fn intersect_residue_classes_crt() {
        // n ≡ 1 (mod 2) and n ≡ 2 (mod 3) is n ≡ 5 (mod 6); brute-checked on 0..60.
        let a = PeriodicSet::residue_class(1, 2);
        let b = PeriodicSet::residue_class(2, 3);
        let got = a.intersect(&b);
        for n in 0..60 {
            assert_eq!(got.member(n), n % 6 == 5, "n={n}");
        }
        assert_eq!(got, PeriodicSet::residue_class(5, 6));
    }

    #[test]
    fn infinitude_and_cofiniteness() {
        assert!(evens().is_infinite());
        assert!(!PeriodicSet::finite([3, 5]).is_infinite());
        // n ≢ 0 (mod 5) with prefix {0}: infinite but not cofinite; the
        // complement {5, 10, 15, ...} keeps recurring. Brute-checked to 50.
        let s = PeriodicSet::new(1, 5, [1, 2, 3, 4], [0]).unwrap();
        assert!(s.is_infinite());
        assert!(!s.is_cofinite());
        let missing: Vec<u64> = (0..=50).filter(|&n| !s.member(n)).collect();
        assert_eq!(missing, vec![5, 10, 15, 20, 25, 30, 35, 40, 45, 50]);
    }

    #[test]
    fn canonical_form_minimizes_period_and_threshold() {
        // {n even} written with modulus 4 and a redundant prefix.
        let s = PeriodicSet::new(3, 4, [0, 2], [0, 2]).unwrap();
        assert_eq!(s, evens());
        assert_eq!(s.modulus(), 2);
        assert_eq!(s.threshold(), 0);
        // Tail description already matches at the boundary, threshold drops.
        let t = PeriodicSet::new(4, 3, [1], [0]).unwrap();
        assert_eq!(t.threshold(), 2);
        assert_eq!(t.modulus(), 3);
    }

    #[test]
    fn json_roundtrip_is_bit_exact_on_canonical_values() {
        let s = PeriodicSet::new(4, 3, [1], [0]).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"threshold":2,"modulus":3,"residues":[1],"prefix":[0]}"#);
        let back: PeriodicSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }

    #[test]
    fn json_rejects_invalid_fields() {
        assert!(serde_json::from_str::<PeriodicSet>(
            r#"{"threshold":0,"modulus":0,"residues":[],"prefix":[]}"#
        )
        .is_err());
        assert!(serde_json::from_str::<PeriodicSet>(
            r#"{"threshold":0,"modulus":2,"residues":[2],"prefix":[]}"#
        )
        .is_err());
        assert!(serde_json::from_str::<PeriodicSet>(
            r#"{"threshold":1,"modulus":2,"residues":[0],"prefix":[4]}"#
        )
        .is_err());
    }

    prop_compose! {
        fn arb_set()(
            threshold in 0u64..12,
            modulus in 1u64..12,
            residue_mask in any::<u16>(),
            prefix_mask in any::<u16>(),
        ) -> PeriodicSet {
            let residues = (0..modulus).filter(|&r| residue_mask >> (r % 16) & 1 == 1);
            let prefix = (0..threshold).filter(|&e| prefix_mask >> (e % 16) & 1 == 1);
            PeriodicSet::new(threshold, modulus, residues, prefix).unwrap()
        }
    }

    proptest! {
        #[test]
        fn canonical_equality_is_set_equality(a in arb_set(), b in arb_set()) {
            prop_assert_eq!(a == b, same_set(&a, &b));
        }

        #[test]
        fn boolean_algebra_laws(a in arb_set(), b in arb_set(), c in arb_set()) {
            // De Morgan, double complement, associativity, distributivity:
            // canonical equality stands in for pointwise checks.
            prop_assert_eq!(a.complement().complement(), a.clone());
            prop_assert_eq!(
                a.union(&b).complement(),
                a.complement().intersect(&b.complement())
            );
            prop_assert_eq!(a.intersect(&b.intersect(&c)), a.intersect(&b).intersect(&c));
            prop_assert_eq!(
                a.intersect(&b.union(&c)),
                a.intersect(&b).union(&a.intersect(&c))
            );
        }

        #[test]
        fn combine_agrees_with_pointwise(a in arb_set(), b in arb_set()) {
            let inter = a.intersect(&b);
            let uni = a.union(&b);
            let window = a.agreement_window(&b).max(32);
            for n in 0..window {
                prop_assert_eq!(inter.member(n), a.member(n) && b.member(n));
                prop_assert_eq!(uni.member(n), a.member(n) || b.member(n));
            }
        }

        #[test]
        fn canonicalization_preserves_membership(
            threshold in 0u64..12,
            modulus in 1u64..12,
            residue_mask in any::<u16>(),
            prefix_mask in any::<u16>(),
        ) {
            let residues: Vec<u64> =
                (0..modulus).filter(|&r| residue_mask >> (r % 16) & 1 == 1).collect();
            let prefix: Vec<u64> =
                (0..threshold).filter(|&e| prefix_mask >> (e % 16) & 1 == 1).collect();
            let canonical =
                PeriodicSet::new(threshold, modulus, residues.iter().copied(), prefix.iter().copied())
                    .unwrap();
            for n in 0..threshold + 2 * modulus {
                let raw = if n < threshold {
                    prefix.contains(&n)
                } else {
                    residues.contains(&(n % modulus))
                };
                prop_assert_eq!(canonical.member(n), raw, "n={}", n);
            }
            // Idempotence: rebuilding from canonical parts changes nothing.
            let again = PeriodicSet::new(
                canonical.threshold(),
                canonical.modulus(),
                canonical.residues().iter().copied(),
                canonical.prefix().iter().copied(),
            )
            .unwrap();
            prop_assert_eq!(again, canonical);
        }

        #[test]
        fn infinitude_matches_brute_force_counting(a in arb_set()) {
            // S is infinite iff members keep appearing in every tail window.
            let bound = 10 * a.modulus() + a.threshold();
            let members = a.members_below(bound.max(1)).count();
            let below_threshold = a.members_below(a.threshold()).count();
            if a.is_infinite() {
                prop_assert!(members > below_threshold);
                // One full period beyond the bound contains another member.
                prop_assert!((bound..bound + a.modulus()).any(|n| a.member(n)));
            } else {
                prop_assert!((a.threshold()..bound + a.modulus()).all(|n| !a.member(n)));
            }
        }
    }
}
