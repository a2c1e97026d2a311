//! Permutations of ℕ that differ from the identity on a finite set.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Vertex;

/// A bijection of ℕ stored as its finite set of non-fixed points.
///
/// Invariants, enforced at construction and on deserialization:
/// - `moves` is injective and its key set equals its value set;
/// - no fixed points are stored (`moves[v] != v`).
///
/// The support is exactly the key set. The inverse map is materialized at
/// construction, so both directions are a single lookup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPermutation", into = "RawPermutation")]
pub struct FiniteSupportPermutation {
    moves: BTreeMap<Vertex, Vertex>,
    inverse: BTreeMap<Vertex, Vertex>,
}

/// Wire form: the moved pairs as a sorted list of `[from, to]` entries.
/// A list survives nesting inside tag-discriminated enums, which buffer
/// content and cannot re-parse numeric map keys.
#[derive(Serialize, Deserialize)]
struct RawPermutation {
    moves: Vec<(Vertex, Vertex)>,
}

impl TryFrom<RawPermutation> for FiniteSupportPermutation {
    type Error = Error;

    fn try_from(raw: RawPermutation) -> Result<Self, Error> {
        let mut moves = BTreeMap::new();
        for (from, to) in raw.moves {
            if moves.insert(from, to).is_some() {
                return Err(Error::InvalidPermutation(format!(
                    "vertex {from} listed twice"
                )));
            }
        }
        FiniteSupportPermutation::from_moves(moves)
    }
}

impl From<FiniteSupportPermutation> for RawPermutation {
    fn from(p: FiniteSupportPermutation) -> Self {
        RawPermutation {
            moves: p.moves.into_iter().collect(),
        }
    }
}

impl FiniteSupportPermutation {
    pub fn identity() -> Self {
        FiniteSupportPermutation {
            moves: BTreeMap::new(),
            inverse: BTreeMap::new(),
        }
    }

    /// Builds a permutation from its non-fixed points, validating bijectivity.
    pub fn from_moves(moves: BTreeMap<Vertex, Vertex>) -> Result<Self, Error> {
        let mut inverse = BTreeMap::new();
        for (&from, &to) in &moves {
            if from == to {
                return Err(Error::InvalidPermutation(format!(
                    "fixed point {from} stored in moves"
                )));
            }
            if inverse.insert(to, from).is_some() {
                return Err(Error::InvalidPermutation(format!(
                    "value {to} has two preimages"
                )));
            }
        }
        for to in inverse.keys() {
            if !moves.contains_key(to) {
                return Err(Error::InvalidPermutation(format!(
                    "value {to} is not itself moved: key set must equal value set"
                )));
            }
        }
        Ok(FiniteSupportPermutation { moves, inverse })
    }

    pub fn transposition(a: Vertex, b: Vertex) -> Result<Self, Error> {
        if a == b {
            return Err(Error::InvalidPermutation(
                "transposition needs two distinct vertices".into(),
            ));
        }
        let mut moves = BTreeMap::new();
        moves.insert(a, b);
        moves.insert(b, a);
        Self::from_moves(moves)
    }

    /// Builds the permutation sending `support[i]` to `images[i]`.
    pub fn from_images(support: &[Vertex], images: &[Vertex]) -> Result<Self, Error> {
        if support.len() != images.len() {
            return Err(Error::InvalidPermutation(
                "support and image lists differ in length".into(),
            ));
        }
        let mut moves = BTreeMap::new();
        for (&s, &i) in support.iter().zip(images) {
            if s != i && moves.insert(s, i).is_some() {
                return Err(Error::InvalidPermutation(format!("vertex {s} listed twice")));
            }
        }
        Self::from_moves(moves)
    }

    #[inline]
    pub fn apply(&self, v: Vertex) -> Vertex {
        *self.moves.get(&v).unwrap_or(&v)
    }

    /// The inverse image `h⁻¹(v)`.
    #[inline]
    pub fn invert(&self, v: Vertex) -> Vertex {
        *self.inverse.get(&v).unwrap_or(&v)
    }

    pub fn inverse(&self) -> Self {
        FiniteSupportPermutation {
            moves: self.inverse.clone(),
            inverse: self.moves.clone(),
        }
    }

    /// The composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        let mut moves = BTreeMap::new();
        for &v in self.moves.keys().chain(other.moves.keys()) {
            let image = self.apply(other.apply(v));
            if image != v {
                moves.insert(v, image);
            }
        }
        Self::from_moves(moves).expect("composition of bijections is a bijection")
    }

    pub fn is_identity(&self) -> bool {
        self.moves.is_empty()
    }

    /// Non-fixed points in increasing order.
    pub fn support(&self) -> Vec<Vertex> {
        self.moves.keys().copied().collect()
    }

    pub fn support_size(&self) -> usize {
        self.moves.len()
    }

    pub fn moves(&self) -> &BTreeMap<Vertex, Vertex> {
        &self.moves
    }

    /// Image word over the sorted support, the tie-breaker for enumeration
    /// order.
    pub fn word(&self) -> Vec<Vertex> {
        self.moves.values().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_empty_support() {
        let id = FiniteSupportPermutation::identity();
        assert!(id.is_identity());
        assert_eq!(id.apply(17), 17);
        assert_eq!(id.invert(17), 17);
    }

    #[test]
    fn transposition_round_trip() {
        let t = FiniteSupportPermutation::transposition(0, 4).unwrap();
        assert_eq!(t.apply(0), 4);
        assert_eq!(t.apply(4), 0);
        assert_eq!(t.apply(2), 2);
        assert_eq!(t.invert(4), 0);
        assert_eq!(t.support(), vec![0, 4]);
    }

    #[test]
    fn rejects_fixed_points_and_non_bijections() {
        let mut m = BTreeMap::new();
        m.insert(3, 3);
        assert!(FiniteSupportPermutation::from_moves(m).is_err());

        let mut m = BTreeMap::new();
        m.insert(1, 3);
        m.insert(2, 3);
        assert!(FiniteSupportPermutation::from_moves(m).is_err());

        // 1 -> 3 but 3 is never moved back: key set != value set.
        let mut m = BTreeMap::new();
        m.insert(1, 3);
        assert!(FiniteSupportPermutation::from_moves(m).is_err());
    }

    #[test]
    fn three_cycle_composes() {
        let a = FiniteSupportPermutation::transposition(0, 1).unwrap();
        let b = FiniteSupportPermutation::transposition(1, 2).unwrap();
        let c = a.compose(&b);
        assert_eq!(c.apply(1), a.apply(b.apply(1)));
        assert_eq!(c.apply(2), a.apply(b.apply(2)));
        assert_eq!(c.apply(0), a.apply(b.apply(0)));
        let inv = c.inverse();
        for v in 0..5 {
            assert_eq!(inv.apply(c.apply(v)), v);
        }
    }

    #[test]
    fn serde_rejects_invalid_moves() {
        let good: FiniteSupportPermutation =
            serde_json::from_str(r#"{"moves":[[0,4],[4,0]]}"#).unwrap();
        assert_eq!(good.apply(0), 4);
        assert!(serde_json::from_str::<FiniteSupportPermutation>(r#"{"moves":[[0,0]]}"#).is_err());
        assert!(serde_json::from_str::<FiniteSupportPermutation>(r#"{"moves":[[0,4]]}"#).is_err());
        assert!(serde_json::from_str::<FiniteSupportPermutation>(
            r#"{"moves":[[0,4],[0,5],[4,0],[5,0]]}"#
        )
        .is_err());
    }
}
