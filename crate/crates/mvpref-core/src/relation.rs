//! Chain-valued and crisp binary relations on a finite set of worlds:
//! preorder predicates, strict part, indifference, level cuts, their
//! interplay, reconstruction of a fuzzy relation from a nested cut family,
//! and the ∧-transitive closure.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::lattice::{Chain, Element};

/// Errors raised by relation-level operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationError {
    /// `strict_of_cut` at level `0`: every pair satisfies `P(u,v) ≥ 0`, so
    /// the construction degenerates and is rejected.
    DegenerateCut,
    /// A cut family is not nested: the relation at the higher level holds
    /// on a pair where the lower level does not.
    NestingViolation {
        /// Label of the smaller level.
        lower: String,
        /// Label of the larger level.
        upper: String,
        /// The offending `(u, v)` pair, as world indices.
        pair: (usize, usize),
    },
    /// Two relations (or a relation family) disagree on the world count.
    SizeMismatch {
        /// Expected number of worlds.
        expected: usize,
        /// Number found.
        found: usize,
    },
}

impl fmt::Display for RelationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationError::DegenerateCut => {
                write!(f, "degenerate-cut: the strict 0-cut is empty by definition")
            }
            RelationError::NestingViolation { lower, upper, pair } => write!(
                f,
                "nesting-violation: cut at level {upper} holds at ({}, {}) but cut at level \
                 {lower} does not",
                pair.0, pair.1
            ),
            RelationError::SizeMismatch { expected, found } => {
                write!(f, "relation size mismatch: expected {expected} worlds, found {found}")
            }
        }
    }
}

impl core::error::Error for RelationError {}

/// A chain-valued binary relation on `size` worlds, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzyRelation {
    size: usize,
    entries: Vec<Element>,
}

impl FuzzyRelation {
    /// Builds a relation from row-major entries (`size * size` of them).
    pub fn new(size: usize, entries: Vec<Element>) -> Result<FuzzyRelation, RelationError> {
        if entries.len() != size * size {
            return Err(RelationError::SizeMismatch {
                expected: size * size,
                found: entries.len(),
            });
        }
        Ok(FuzzyRelation { size, entries })
    }

    /// Builds a relation by evaluating `f` on every ordered pair.
    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> Element) -> FuzzyRelation {
        let mut entries = Vec::with_capacity(size * size);
        for u in 0..size {
            for v in 0..size {
                entries.push(f(u, v));
            }
        }
        FuzzyRelation { size, entries }
    }

    /// Number of worlds.
    pub fn size(&self) -> usize {
        self.size
    }

    /// The value `P(u, v)`.
    pub fn get(&self, u: usize, v: usize) -> Element {
        self.entries[u * self.size + v]
    }

    /// Replaces the value at `(u, v)`.
    pub fn set(&mut self, u: usize, v: usize, value: Element) {
        self.entries[u * self.size + v] = value;
    }

    /// `P(u, u) = 1` for every world `u`.
    pub fn is_reflexive(&self, chain: &Chain) -> bool {
        (0..self.size).all(|u| self.get(u, u) == chain.top())
    }

    /// `P(u, v) ∧ P(v, w) ≤ P(u, w)` for all worlds (∧ is `min` on a
    /// chain, so no chain tables are needed).
    pub fn is_meet_transitive(&self) -> bool {
        (0..self.size).all(|u| {
            (0..self.size).all(|v| {
                let uv = self.get(u, v);
                (0..self.size).all(|w| uv.min(self.get(v, w)) <= self.get(u, w))
            })
        })
    }

    /// The strict part `P^<`: `P^<(u,v) = P(u,v)` when `P(u,v) > P(v,u)`
    /// and `⊥` otherwise.
    pub fn strict_part(&self) -> FuzzyRelation {
        FuzzyRelation::from_fn(self.size, |u, v| {
            if self.get(u, v) > self.get(v, u) { self.get(u, v) } else { Element::bottom() }
        })
    }

    /// The indifference relation `P^≈(u,v) = P(u,v) ∧ P(v,u)`.
    pub fn indifference(&self) -> FuzzyRelation {
        FuzzyRelation::from_fn(self.size, |u, v| self.get(u, v).min(self.get(v, u)))
    }

    /// The crisp `b`-cut `P_b = { (u,v) | P(u,v) ≥ b }`.
    pub fn cut(&self, b: Element) -> CrispRelation {
        CrispRelation::from_fn(self.size, |u, v| self.get(u, v) >= b)
    }

    /// The strict `b`-cut `(P_b)^< = { (u,v) | P(u,v) ≥ b and P(v,u) < b }`.
    ///
    /// Errors with `degenerate-cut` at level `0`, where the condition
    /// `P(v,u) < 0` is unsatisfiable.
    pub fn strict_of_cut(&self, b: Element) -> Result<CrispRelation, RelationError> {
        if b.index() == 0 {
            return Err(RelationError::DegenerateCut);
        }
        Ok(CrispRelation::from_fn(self.size, |u, v| self.get(u, v) >= b && self.get(v, u) < b))
    }

    /// The `b`-cut of the strict part, `(P^<)_b`.
    pub fn cut_of_strict(&self, b: Element) -> CrispRelation {
        self.strict_part().cut(b)
    }

    /// The ∧-transitive closure: the least relation above `self` that is
    /// ∧-transitive, computed as the min–max path fixpoint.
    pub fn meet_transitive_closure(&self) -> FuzzyRelation {
        let mut r = self.clone();
        // Floyd–Warshall over the (min, max) semiring.
        for k in 0..self.size {
            for u in 0..self.size {
                for v in 0..self.size {
                    let via = r.get(u, k).min(r.get(k, v));
                    if via > r.get(u, v) {
                        r.set(u, v, via);
                    }
                }
            }
        }
        r
    }
}

/// A crisp binary relation on `size` worlds, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrispRelation {
    size: usize,
    bits: Vec<bool>,
}

impl CrispRelation {
    /// The empty relation.
    pub fn empty(size: usize) -> CrispRelation {
        CrispRelation { size, bits: vec![false; size * size] }
    }

    /// The total relation `W × W`.
    pub fn universal(size: usize) -> CrispRelation {
        CrispRelation { size, bits: vec![true; size * size] }
    }

    /// Builds a relation by evaluating `f` on every ordered pair.
    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> bool) -> CrispRelation {
        let mut bits = Vec::with_capacity(size * size);
        for u in 0..size {
            for v in 0..size {
                bits.push(f(u, v));
            }
        }
        CrispRelation { size, bits }
    }

    /// Builds a relation from the list of its pairs.
    pub fn from_pairs(size: usize, pairs: &[(usize, usize)]) -> CrispRelation {
        let mut r = CrispRelation::empty(size);
        for &(u, v) in pairs {
            r.set(u, v, true);
        }
        r
    }

    /// Number of worlds.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Membership of `(u, v)`.
    pub fn get(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.size + v]
    }

    /// Adds or removes the pair `(u, v)`.
    pub fn set(&mut self, u: usize, v: usize, value: bool) {
        self.bits[u * self.size + v] = value;
    }

    /// The pairs of the relation in row-major order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.size {
            for v in 0..self.size {
                if self.get(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// `(u, u)` for every world `u`.
    pub fn is_reflexive(&self) -> bool {
        (0..self.size).all(|u| self.get(u, u))
    }

    /// No `(u, u)` at all.
    pub fn is_irreflexive(&self) -> bool {
        (0..self.size).all(|u| !self.get(u, u))
    }

    /// `(u,v)` and `(v,w)` imply `(u,w)`.
    pub fn is_transitive(&self) -> bool {
        (0..self.size).all(|u| {
            (0..self.size).all(|v| {
                !self.get(u, v) || (0..self.size).all(|w| !self.get(v, w) || self.get(u, w))
            })
        })
    }

    /// `(u,v)` implies `(v,u)`.
    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|u| (0..self.size).all(|v| !self.get(u, v) || self.get(v, u)))
    }

    /// Reflexive, symmetric, and transitive.
    pub fn is_equivalence(&self) -> bool {
        self.is_reflexive() && self.is_symmetric() && self.is_transitive()
    }

    /// Set inclusion: every pair of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &CrispRelation) -> bool {
        self.size == other.size
            && self.bits.iter().zip(&other.bits).all(|(a, b)| !*a || *b)
    }

    /// Adds all diagonal pairs.
    pub fn reflexive_closure(&self) -> CrispRelation {
        let mut r = self.clone();
        for u in 0..self.size {
            r.set(u, u, true);
        }
        r
    }
}

/// Rebuilds a fuzzy relation from a family of crisp cuts indexed by chain
/// elements: `P(u,v) = max { b | cuts[b](u,v) }`, with `⊥` when no level
/// contains the pair.
///
/// Requires the family to be nested (`a ≤ b` implies `cuts[b] ⊆ cuts[a]`);
/// a violation is reported with the offending pair and the two levels.  All
/// member relations must share one size.
pub fn reconstruct_from_cuts(
    cuts: &BTreeMap<Element, CrispRelation>,
    chain: &Chain,
) -> Result<FuzzyRelation, RelationError> {
    let mut iter = cuts.iter();
    let Some((&first_level, first)) = iter.next() else {
        return Ok(FuzzyRelation { size: 0, entries: Vec::new() });
    };
    let size = first.size();
    let mut prev = (first_level, first);
    for (&level, rel) in iter {
        if rel.size() != size {
            return Err(RelationError::SizeMismatch { expected: size, found: rel.size() });
        }
        // Adjacent inclusions imply the full nesting by transitivity.
        for u in 0..size {
            for v in 0..size {
                if rel.get(u, v) && !prev.1.get(u, v) {
                    return Err(RelationError::NestingViolation {
                        lower: String::from(chain.label(prev.0)),
                        upper: String::from(chain.label(level)),
                        pair: (u, v),
                    });
                }
            }
        }
        prev = (level, rel);
    }
    Ok(FuzzyRelation::from_fn(size, |u, v| {
        cuts.iter()
            .rev()
            .find(|(_, rel)| rel.get(u, v))
            .map(|(&b, _)| b)
            .unwrap_or(Element::bottom())
    }))
}
