//! The free Boolean group over the structured point set X = P × K × (ω+1).
//!
//! An element is a finite set of [`Point`]s; the group operation is symmetric
//! difference and every element is its own inverse. A two-valued map on
//! points extends uniquely to a homomorphism into Z_2 by XOR over the
//! element's points ([`TwoValuedMap::hom_eval`]).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{BitXor, BitXorAssign};

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A value in Z_2, serialized as the integer 0 or 1.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Bit(u8);

impl Bit {
    pub const ZERO: Bit = Bit(0);
    pub const ONE: Bit = Bit(1);

    /// Accepts 0 or 1.
    pub fn new(raw: u8) -> Option<Bit> {
        (raw <= 1).then_some(Bit(raw))
    }

    pub fn as_u8(self) -> u8 {
        self.0
    }

    pub fn is_one(self) -> bool {
        self.0 == 1
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The other value.
    pub fn flip(self) -> Bit {
        Bit(self.0 ^ 1)
    }
}

impl From<bool> for Bit {
    fn from(b: bool) -> Bit {
        Bit(b as u8)
    }
}

impl BitXor for Bit {
    type Output = Bit;
    fn bitxor(self, rhs: Bit) -> Bit {
        Bit(self.0 ^ rhs.0)
    }
}

impl BitXorAssign for Bit {
    fn bitxor_assign(&mut self, rhs: Bit) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Debug for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Bit {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.0)
    }
}

impl<'de> Deserialize<'de> for Bit {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Bit, D::Error> {
        let raw = u8::deserialize(deserializer)?;
        Bit::new(raw).ok_or_else(|| de::Error::custom(format!("bit must be 0 or 1, got {raw}")))
    }
}

/// Implements serde for a u32-backed id newtype: serializes as a bare
/// number, deserializes from a number or from the string form serde_json
/// uses for map keys.
macro_rules! id_serde {
    ($name:ident, $expecting:literal) => {
        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.serialize_u32(self.0)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<$name, D::Error> {
                struct IdVisitor;

                impl Visitor<'_> for IdVisitor {
                    type Value = $name;

                    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                        f.write_str($expecting)
                    }

                    fn visit_u64<E: de::Error>(self, v: u64) -> Result<$name, E> {
                        u32::try_from(v)
                            .map($name)
                            .map_err(|_| E::custom("id out of range"))
                    }

                    fn visit_i64<E: de::Error>(self, v: i64) -> Result<$name, E> {
                        u32::try_from(v)
                            .map($name)
                            .map_err(|_| E::custom("id out of range"))
                    }

                    fn visit_str<E: de::Error>(self, v: &str) -> Result<$name, E> {
                        v.parse::<u32>().map($name).map_err(E::custom)
                    }
                }

                deserializer.deserialize_any(IdVisitor)
            }
        }
    };
}

pub(crate) use id_serde;

/// Identifier of a simulated free ultrafilter (the role of a point of βℕ∖ℕ).
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UltrafilterId(pub u32);

id_serde!(UltrafilterId, "an ultrafilter id");

impl UltrafilterId {
    /// Reserved id for "flat" points that carry no ultrafilter structure.
    pub const FLAT: UltrafilterId = UltrafilterId(u32::MAX);
}

impl fmt::Debug for UltrafilterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

impl fmt::Display for UltrafilterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Identifier of a generator column (the role of an index in K).
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneratorId(pub u32);

id_serde!(GeneratorId, "a generator id");

impl fmt::Debug for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k{}", self.0)
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A natural number or the distinguished limit symbol ω.
///
/// `Omega` compares greater than every finite value, so the derived order on
/// [`Point`] puts limit points last.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNat {
    Fin(u64),
    Omega,
}

impl fmt::Debug for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(n) => write!(f, "{n}"),
            ExtNat::Omega => write!(f, "ω"),
        }
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtNat::Fin(n) => serializer.serialize_u64(*n),
            ExtNat::Omega => serializer.serialize_str("omega"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<ExtNat, D::Error> {
        struct ExtNatVisitor;

        impl Visitor<'_> for ExtNatVisitor {
            type Value = ExtNat;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a natural number or the string \"omega\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtNat, E> {
                Ok(ExtNat::Fin(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtNat, E> {
                u64::try_from(v)
                    .map(ExtNat::Fin)
                    .map_err(|_| E::custom("negative value is not a natural number"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtNat, E> {
                if v == "omega" {
                    Ok(ExtNat::Omega)
                } else {
                    Err(E::custom(format!("expected \"omega\", got {v:?}")))
                }
            }
        }

        deserializer.deserialize_any(ExtNatVisitor)
    }
}

/// A point of X = P × K × (ω+1).
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub p: UltrafilterId,
    pub k: GeneratorId,
    pub n: ExtNat,
}

impl Point {
    pub fn new(p: UltrafilterId, k: GeneratorId, n: ExtNat) -> Point {
        Point { p, k, n }
    }

    pub fn finite(p: UltrafilterId, k: GeneratorId, n: u64) -> Point {
        Point { p, k, n: ExtNat::Fin(n) }
    }

    pub fn star(p: UltrafilterId, k: GeneratorId) -> Point {
        Point { p, k, n: ExtNat::Omega }
    }

    /// True for limit points, i.e. members of the slice X* = P × K × {ω}.
    pub fn is_star(&self) -> bool {
        self.n == ExtNat::Omega
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?},{:?},{:?})", self.p, self.k, self.n)
    }
}

/// An element of the free Boolean group B(X): a finite set of points.
///
/// The empty set is the group zero. The JSON form is the sorted point array.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    points: BTreeSet<Point>,
}

impl GroupElement {
    pub fn zero() -> GroupElement {
        GroupElement::default()
    }

    pub fn singleton(point: Point) -> GroupElement {
        GroupElement { points: BTreeSet::from([point]) }
    }

    pub fn from_points(points: impl IntoIterator<Item = Point>) -> GroupElement {
        GroupElement { points: points.into_iter().collect() }
    }

    pub fn points(&self) -> impl Iterator<Item = &Point> {
        self.points.iter()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, point: &Point) -> bool {
        self.points.contains(point)
    }

    /// The group operation: symmetric difference of the underlying sets.
    pub fn sym_diff(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            points: self.points.symmetric_difference(&other.points).copied().collect(),
        }
    }

    /// The subset of points lying in X* (those with n = ω).
    pub fn star_trace(&self) -> GroupElement {
        self.filter(|pt| pt.is_star())
    }

    /// Set difference.
    pub fn minus(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            points: self.points.difference(&other.points).copied().collect(),
        }
    }

    pub fn filter(&self, pred: impl Fn(&Point) -> bool) -> GroupElement {
        GroupElement {
            points: self.points.iter().filter(|pt| pred(pt)).copied().collect(),
        }
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.points.iter()).finish()
    }
}

impl FromIterator<Point> for GroupElement {
    fn from_iter<I: IntoIterator<Item = Point>>(iter: I) -> GroupElement {
        GroupElement::from_points(iter)
    }
}

/// A 2-valued point map: finitely many explicit assignments plus an optional
/// default applied outside the support. Without a default the map is partial.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct TwoValuedMap {
    assignments: BTreeMap<Point, Bit>,
    default: Option<Bit>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("point {0:?} has no assigned value")]
    UnassignedPoint(Point),
}

impl TwoValuedMap {
    /// A partial map with empty support.
    pub fn partial() -> TwoValuedMap {
        TwoValuedMap::default()
    }

    /// A total map sending everything to `default`.
    pub fn constant(default: Bit) -> TwoValuedMap {
        TwoValuedMap { assignments: BTreeMap::new(), default: Some(default) }
    }

    /// Copy of this map with the given default filled in outside the support.
    pub fn with_default(&self, default: Bit) -> TwoValuedMap {
        TwoValuedMap { assignments: self.assignments.clone(), default: Some(default) }
    }

    pub fn assign(&mut self, point: Point, value: Bit) {
        self.assignments.insert(point, value);
    }

    pub fn get(&self, point: &Point) -> Option<Bit> {
        self.assignments.get(point).copied().or(self.default)
    }

    pub fn is_assigned(&self, point: &Point) -> bool {
        self.assignments.contains_key(point)
    }

    pub fn support(&self) -> impl Iterator<Item = (&Point, Bit)> {
        self.assignments.iter().map(|(pt, b)| (pt, *b))
    }

    pub fn support_len(&self) -> usize {
        self.assignments.len()
    }

    pub fn default_value(&self) -> Option<Bit> {
        self.default
    }

    /// The homomorphism extension: XOR of the map over the element's points.
    /// The empty element evaluates to 0.
    pub fn hom_eval(&self, element: &GroupElement) -> Result<Bit, EvalError> {
        let mut acc = Bit::ZERO;
        for pt in element.points() {
            acc ^= self.get(pt).ok_or(EvalError::UnassignedPoint(*pt))?;
        }
        Ok(acc)
    }
}
