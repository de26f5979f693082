//! Finite forcing conditions ⟨P, K, f⟩ and the extension order.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::group::{Bit, EvalError, GeneratorId, GroupElement, Point, UltrafilterId};
use crate::oracle::OracleBank;

use super::column::{CoherentMap, Column};
use super::SplitError;

/// A finite approximation to a coherent map: finite sets of ultrafilter and
/// generator ids together with a coherent map on their product.
///
/// Columns are stored sparsely: a pair inside the product with no stored
/// column is the all-zero column, which is coherent for every oracle. Stored
/// columns are certified against their oracles when inserted.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Condition {
    ultras: BTreeSet<UltrafilterId>,
    gens: BTreeSet<GeneratorId>,
    #[serde(with = "column_list")]
    columns: BTreeMap<(UltrafilterId, GeneratorId), Column>,
}

/// Columns serialize as a sorted list; the map key is derivable.
mod column_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<(UltrafilterId, GeneratorId), Column>,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&map.values().collect::<Vec<_>>(), serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<BTreeMap<(UltrafilterId, GeneratorId), Column>, D::Error> {
        let columns = Vec::<Column>::deserialize(deserializer)?;
        let mut map = BTreeMap::new();
        for col in columns {
            if map.insert(col.owner(), col).is_some() {
                return Err(serde::de::Error::custom("duplicate column owner"));
            }
        }
        Ok(map)
    }
}

impl Condition {
    /// The empty condition ⟨∅, ∅, ∅⟩, the top of the poset.
    pub fn empty() -> Condition {
        Condition::default()
    }

    pub fn ultras(&self) -> &BTreeSet<UltrafilterId> {
        &self.ultras
    }

    pub fn gens(&self) -> &BTreeSet<GeneratorId> {
        &self.gens
    }

    pub fn stored_columns(&self) -> impl Iterator<Item = &Column> {
        self.columns.values()
    }

    /// Is (p, k) inside the product P × K?
    pub fn contains_pair(&self, p: UltrafilterId, k: GeneratorId) -> bool {
        self.ultras.contains(&p) && self.gens.contains(&k)
    }

    /// Does the domain P × K × (ω+1) contain every point of the element?
    pub fn covers(&self, element: &GroupElement) -> bool {
        element.points().all(|pt| self.contains_pair(pt.p, pt.k))
    }

    /// The column at (p, k), materializing the implicit all-zero column.
    /// `None` outside the product.
    pub fn column_or_zero(&self, p: UltrafilterId, k: GeneratorId) -> Option<Column> {
        if !self.contains_pair(p, k) {
            return None;
        }
        Some(
            self.columns
                .get(&(p, k))
                .cloned()
                .unwrap_or_else(|| Column::all_zero(p, k)),
        )
    }

    /// Evaluates the condition's map on an element of B(X). Errors if the
    /// element reaches outside the domain.
    pub fn eval(&self, element: &GroupElement) -> Result<Bit, EvalError> {
        let mut acc = Bit::ZERO;
        for pt in element.points() {
            if !self.contains_pair(pt.p, pt.k) {
                return Err(EvalError::UnassignedPoint(*pt));
            }
            acc ^= self
                .columns
                .get(&(pt.p, pt.k))
                .map_or(Bit::ZERO, |col| col.value_at(pt.n));
        }
        Ok(acc)
    }

    /// Adds an ultrafilter id to P; the new columns are implicit all-zero.
    /// Returns whether the id was new.
    pub fn add_ultrafilter(&mut self, p: UltrafilterId) -> bool {
        self.ultras.insert(p)
    }

    /// Adds a generator id to K; the new columns are implicit all-zero.
    pub fn add_generator(&mut self, k: GeneratorId) -> bool {
        self.gens.insert(k)
    }

    /// Stores a nonzero column. The owner pair must lie inside the product
    /// and must not already carry a stored column; extending never rewrites.
    pub fn insert_column(&mut self, column: Column) -> Result<(), SplitError> {
        let (p, k) = column.owner();
        if !self.contains_pair(p, k) {
            return Err(SplitError::IncoherentResult(format!(
                "column ({p}, {k}) outside the condition product"
            )));
        }
        if self.columns.insert((p, k), column).is_some() {
            return Err(SplitError::IncoherentResult(format!(
                "column ({p}, {k}) would overwrite an existing column"
            )));
        }
        Ok(())
    }

    /// The extension order: self ≤ weaker iff self's sets contain weaker's
    /// and self's map extends weaker's map on weaker's whole product.
    pub fn leq(&self, weaker: &Condition) -> bool {
        if !weaker.ultras.is_subset(&self.ultras) || !weaker.gens.is_subset(&self.gens) {
            return false;
        }
        for ((p, k), col) in &weaker.columns {
            if self.column_or_zero(*p, *k).as_ref() != Some(col) {
                return false;
            }
        }
        // A stored column here inside weaker's product must match weaker's
        // (possibly implicit zero) column there.
        for ((p, k), col) in &self.columns {
            if weaker.contains_pair(*p, *k) && weaker.column_or_zero(*p, *k).as_ref() != Some(col)
            {
                return false;
            }
        }
        true
    }

    /// The union map of the condition: its stored columns, default 0 outside.
    pub fn to_map(&self) -> CoherentMap {
        CoherentMap::from_columns(self.columns.values().cloned())
    }

    /// Re-certifies every stored column against the oracles. Implicit zero
    /// columns have agreement set ℕ and need no query.
    pub fn certify(&self, bank: &mut OracleBank) -> Result<(), SplitError> {
        self.to_map().certify(bank)
    }

    /// Is the point a member of the ω-slice of the product, P × K × {ω}?
    pub fn star_slice_contains(&self, point: &Point) -> bool {
        point.is_star() && self.contains_pair(point.p, point.k)
    }
}
