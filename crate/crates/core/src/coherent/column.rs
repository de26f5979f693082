//! Column descriptions of coherent maps and the coherent extension step.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::group::{Bit, ExtNat, GeneratorId, GroupElement, UltrafilterId};
use crate::oracle::{FiniteValuedSequence, OracleBank};
use crate::periodic::PeriodicSet;

use super::SplitError;

/// One column of a map on X: the restriction f(p, k, ·) for a fixed owner
/// pair, described by the set of finite n with value 1 plus the ω-value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub p: UltrafilterId,
    pub k: GeneratorId,
    /// {n ∈ ℕ : f(p, k, n) = 1}.
    pub ones: PeriodicSet,
    /// f(p, k, ω).
    pub omega: Bit,
}

impl Column {
    pub fn all_zero(p: UltrafilterId, k: GeneratorId) -> Column {
        Column { p, k, ones: PeriodicSet::empty(), omega: Bit::ZERO }
    }

    pub fn is_all_zero(&self) -> bool {
        self.ones.is_empty() && self.omega.is_zero()
    }

    pub fn owner(&self) -> (UltrafilterId, GeneratorId) {
        (self.p, self.k)
    }

    pub fn value_at(&self, n: ExtNat) -> Bit {
        match n {
            ExtNat::Fin(n) => self.ones.member(n).into(),
            ExtNat::Omega => self.omega,
        }
    }

    /// The agreement set {n : f(p,k,n) = f(p,k,ω)}. The column is coherent
    /// for an oracle exactly when this set is decided "∈ p".
    pub fn agreement_set(&self) -> PeriodicSet {
        if self.omega.is_one() {
            self.ones.clone()
        } else {
            self.ones.complement()
        }
    }
}

/// A column that has not been given its ω-value yet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialColumn {
    pub p: UltrafilterId,
    pub k: GeneratorId,
    pub ones: PeriodicSet,
}

impl PartialColumn {
    pub fn new(p: UltrafilterId, k: GeneratorId, ones: PeriodicSet) -> PartialColumn {
        PartialColumn { p, k, ones }
    }
}

/// Computes the unique coherent extension of the given omega-less columns:
/// each ω-value is the p-limit of the column's two-valued sequence, decided
/// by the oracle for the owning ultrafilter. The resulting columns pass the
/// coherence check against the same oracle states, and re-extension is a
/// fixed point.
pub fn extend_coherently(columns: Vec<PartialColumn>, bank: &mut OracleBank) -> Vec<Column> {
    columns
        .into_iter()
        .map(|col| {
            let seq = FiniteValuedSequence::indicator(col.ones.clone());
            let omega = bank
                .state_mut(col.p)
                .p_limit(&seq)
                .expect("indicator cells partition ℕ");
            Column { p: col.p, k: col.k, ones: col.ones, omega }
        })
        .collect()
}

/// A finite description of a coherent map on all of X: explicit columns for
/// finitely many owner pairs, value 0 everywhere else. An absent column is
/// the all-zero column, which is coherent for every oracle since its
/// agreement set is all of ℕ.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "CoherentMapWire", into = "CoherentMapWire")]
pub struct CoherentMap {
    columns: BTreeMap<(UltrafilterId, GeneratorId), Column>,
}

#[derive(Serialize, Deserialize)]
struct CoherentMapWire {
    columns: Vec<Column>,
}

impl From<CoherentMap> for CoherentMapWire {
    fn from(map: CoherentMap) -> CoherentMapWire {
        CoherentMapWire { columns: map.columns.into_values().collect() }
    }
}

impl TryFrom<CoherentMapWire> for CoherentMap {
    type Error = String;

    fn try_from(wire: CoherentMapWire) -> Result<CoherentMap, String> {
        let mut map = CoherentMap::default();
        for col in wire.columns {
            let owner = col.owner();
            if map.columns.insert(owner, col).is_some() {
                return Err(format!("duplicate column owner ({}, {})", owner.0, owner.1));
            }
        }
        Ok(map)
    }
}

impl CoherentMap {
    pub fn new() -> CoherentMap {
        CoherentMap::default()
    }

    pub fn from_columns(columns: impl IntoIterator<Item = Column>) -> CoherentMap {
        let mut map = CoherentMap::default();
        for col in columns {
            map.insert(col);
        }
        map
    }

    /// Stores a column, replacing any previous column with the same owner.
    pub fn insert(&mut self, column: Column) -> Option<Column> {
        self.columns.insert(column.owner(), column)
    }

    pub fn column(&self, p: UltrafilterId, k: GeneratorId) -> Option<&Column> {
        self.columns.get(&(p, k))
    }

    pub fn columns(&self) -> impl Iterator<Item = &Column> {
        self.columns.values()
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// The map's value at a point; 0 outside the stored columns.
    pub fn value(&self, p: UltrafilterId, k: GeneratorId, n: ExtNat) -> Bit {
        self.columns.get(&(p, k)).map_or(Bit::ZERO, |col| col.value_at(n))
    }

    /// Homomorphism evaluation: XOR of the map over the element's points.
    /// Total, since the map defaults to 0.
    pub fn eval(&self, element: &GroupElement) -> Bit {
        element
            .points()
            .fold(Bit::ZERO, |acc, pt| acc ^ self.value(pt.p, pt.k, pt.n))
    }

    /// Queries every stored column's agreement set against its oracle;
    /// errors if any is not decided "∈ p".
    pub fn certify(&self, bank: &mut OracleBank) -> Result<(), SplitError> {
        for col in self.columns.values() {
            let answer = bank.state_mut(col.p).query(&col.agreement_set());
            if !answer.is_one() {
                return Err(SplitError::IncoherentResult(format!(
                    "column ({}, {}) agreement set not in p",
                    col.p, col.k
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn owner() -> (UltrafilterId, GeneratorId) {
        (UltrafilterId(0), GeneratorId(0))
    }

    #[test]
    fn constant_zero_column_extends_to_omega_zero() {
        let (p, k) = owner();
        let mut bank = OracleBank::new();
        let cols = extend_coherently(vec![PartialColumn::new(p, k, PeriodicSet::empty())], &mut bank);
        assert_eq!(cols[0].omega, Bit::ZERO);
    }

    #[test]
    fn finite_ones_extend_to_omega_zero() {
        // Freeness: a column with finitely many ones has p-limit 0.
        let (p, k) = owner();
        let mut bank = OracleBank::new();
        let cols = extend_coherently(
            vec![PartialColumn::new(p, k, PeriodicSet::finite([1, 2, 3]))],
            &mut bank,
        );
        assert_eq!(cols[0].omega, Bit::ZERO);
    }

    #[test]
    fn evens_extend_to_omega_one_on_fresh_oracle() {
        // Yes-bias decides "evens ∈ p" first.
        let (p, k) = owner();
        let mut bank = OracleBank::new();
        let cols = extend_coherently(
            vec![PartialColumn::new(p, k, PeriodicSet::residue_class(0, 2))],
            &mut bank,
        );
        assert_eq!(cols[0].omega, Bit::ONE);
        // The extension is coherent against the same oracle states.
        let map = CoherentMap::from_columns(cols.clone());
        assert!(map.certify(&mut bank).is_ok());
        // Re-extension is a fixed point.
        let again = extend_coherently(
            cols.iter()
                .map(|c| PartialColumn::new(c.p, c.k, c.ones.clone()))
                .collect(),
            &mut bank,
        );
        assert_eq!(again, cols);
    }

    #[test]
    fn map_defaults_to_zero_outside_columns() {
        let map = CoherentMap::new();
        assert_eq!(map.value(UltrafilterId(7), GeneratorId(7), ExtNat::Omega), Bit::ZERO);
        let a = GroupElement::singleton(crate::group::Point::star(
            UltrafilterId(7),
            GeneratorId(7),
        ));
        assert_eq!(map.eval(&a), Bit::ZERO);
    }

    #[test]
    fn map_wire_rejects_duplicate_owners() {
        let (p, k) = owner();
        let col = Column::all_zero(p, k);
        let wire = CoherentMapWire { columns: vec![col.clone(), col] };
        assert!(CoherentMap::try_from(wire).is_err());
    }

    #[test]
    fn agreement_set_follows_omega_value() {
        let (p, k) = owner();
        let evens = PeriodicSet::residue_class(0, 2);
        let one = Column { p, k, ones: evens.clone(), omega: Bit::ONE };
        assert_eq!(one.agreement_set(), evens);
        let zero = Column { p, k, ones: evens.clone(), omega: Bit::ZERO };
        assert_eq!(zero.agreement_set(), evens.complement());
    }
}
