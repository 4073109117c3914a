//! Kripke models over a chain and the evaluation semantics.
//!
//! A [`PreferenceModel`] carries a chain-valued accessibility relation that
//! is reflexive and ∧-transitive (a fuzzy preorder, read as graded
//! preference between worlds); it supports the full modal language.  A
//! [`GeneralModel`] carries an arbitrary chain-valued relation; the strict
//! modalities are rejected there because the strict part of an
//! unconstrained relation has no preferential reading.
//!
//! Evaluation is bottom-up and vectorised: each subformula is computed once
//! as a full per-world vector of chain elements, so shared subterms inside
//! one formula tree cost once per node rather than once per world visit.
//! The modal clauses are, writing `e(w)` for the child value at `w`:
//!
//! * `box φ`: `⋀_w P(v,w) → e(w)` — fuzzy meet over all worlds;
//! * `dia φ`: `⋁_w P(v,w) ⊙ e(w)`;
//! * `sbox φ`/`sdia φ`: the same with the strict part `P^<` in place of `P`;
//! * `box(b) φ`: `⋀ { e(w) | P(v,w) ≥ b }` (empty meet is `1`);
//! * `dia(b) φ`: `⋁ { e(w) | P(v,w) ≥ b }` (empty join is `⊥`);
//! * `sbox(b) φ`/`sdia(b) φ`: over `{ w | P(v,w) ≥ b and P(w,v) < b }`;
//! * `A φ` / `E φ`: meet/join over every world.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::lattice::{Chain, Element};
use crate::relation::{CrispRelation, FuzzyRelation};
use crate::syntax::Formula;

/// Errors raised by model construction and evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelError {
    /// A model needs at least one world.
    NoWorlds,
    /// Two worlds share a name.
    DuplicateWorld {
        /// The repeated name.
        name: String,
    },
    /// The relation matrix does not match the world count.
    RelationSize {
        /// Expected world count.
        expected: usize,
        /// World count implied by the relation.
        found: usize,
    },
    /// `P(w, w) < 1` for the named world.
    NotReflexive {
        /// The offending world.
        world: String,
    },
    /// `P(u,v) ∧ P(v,w) > P(u,w)` for the named worlds.
    NotMeetTransitive {
        /// First world of the witness triple.
        u: String,
        /// Second world.
        v: String,
        /// Third world.
        w: String,
    },
    /// A valuation row has the wrong length.
    ValuationSize {
        /// The variable whose row is wrong.
        variable: String,
        /// Expected length (the world count).
        expected: usize,
        /// Length found.
        found: usize,
    },
    /// A formula variable with no valuation row.
    UnboundVariable {
        /// The unbound variable.
        variable: String,
    },
    /// A world name that is not in the model.
    UnknownWorld {
        /// The unknown name.
        name: String,
    },
    /// A world index past the end of the world list.
    WorldOutOfRange {
        /// The offending index.
        index: usize,
        /// Number of worlds.
        size: usize,
    },
    /// A strict modality evaluated on a model class that does not define
    /// the strict part of its relation.
    UnsupportedModality {
        /// Concrete syntax of the rejected modality.
        modality: &'static str,
    },
    /// A strict cut modality at level `0` (unreachable from the parser,
    /// which rejects `sbox(0)`/`sdia(0)` outright).
    ZeroStrictCut,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::NoWorlds => write!(f, "a model needs at least one world"),
            ModelError::DuplicateWorld { name } => write!(f, "duplicate world name `{name}`"),
            ModelError::RelationSize { expected, found } => {
                write!(f, "relation is over {found} worlds, model has {expected}")
            }
            ModelError::NotReflexive { world } => {
                write!(f, "relation is not reflexive at world `{world}`")
            }
            ModelError::NotMeetTransitive { u, v, w } => {
                write!(f, "relation is not meet-transitive at (`{u}`, `{v}`, `{w}`)")
            }
            ModelError::ValuationSize { variable, expected, found } => write!(
                f,
                "valuation of `{variable}` covers {found} worlds, model has {expected}"
            ),
            ModelError::UnboundVariable { variable } => {
                write!(f, "variable `{variable}` has no valuation")
            }
            ModelError::UnknownWorld { name } => write!(f, "unknown world `{name}`"),
            ModelError::WorldOutOfRange { index, size } => {
                write!(f, "world index {index} out of range for {size} worlds")
            }
            ModelError::UnsupportedModality { modality } => write!(
                f,
                "unsupported-modality: `{modality}` needs a preference model (general \
                 models define no strict part)"
            ),
            ModelError::ZeroStrictCut => {
                write!(f, "zero-strict-cut: strict modalities take a positive level")
            }
        }
    }
}

impl core::error::Error for ModelError {}

/// Result of a local-consequence check on one model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalVerdict {
    /// Whether every world that makes all premises fully true also makes
    /// the conclusion fully true.
    pub holds: bool,
    /// A witness world index when `holds` is false.
    pub witness: Option<usize>,
}

fn validate_shape(
    worlds: &[String],
    relation: &FuzzyRelation,
    valuation: &BTreeMap<String, Vec<Element>>,
) -> Result<(), ModelError> {
    let n = worlds.len();
    if n == 0 {
        return Err(ModelError::NoWorlds);
    }
    for (i, w) in worlds.iter().enumerate() {
        if worlds[..i].contains(w) {
            return Err(ModelError::DuplicateWorld { name: w.clone() });
        }
    }
    if relation.size() != n {
        return Err(ModelError::RelationSize { expected: n, found: relation.size() });
    }
    for (var, row) in valuation {
        if row.len() != n {
            return Err(ModelError::ValuationSize {
                variable: var.clone(),
                expected: n,
                found: row.len(),
            });
        }
    }
    Ok(())
}

/// A preference Kripke model: worlds, a reflexive ∧-transitive chain-valued
/// relation, and a valuation assigning each variable a chain element per
/// world.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreferenceModel {
    chain: Chain,
    worlds: Vec<String>,
    relation: FuzzyRelation,
    valuation: BTreeMap<String, Vec<Element>>,
}

/// A Kripke model with an unconstrained chain-valued relation.  The strict
/// modalities are not available here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralModel {
    chain: Chain,
    worlds: Vec<String>,
    relation: FuzzyRelation,
    valuation: BTreeMap<String, Vec<Element>>,
}

impl PreferenceModel {
    /// Validates the preorder laws (reflexivity and ∧-transitivity, with
    /// witnesses on failure) along with the shape of every component.
    pub fn new(
        chain: Chain,
        worlds: Vec<String>,
        relation: FuzzyRelation,
        valuation: BTreeMap<String, Vec<Element>>,
    ) -> Result<PreferenceModel, ModelError> {
        validate_shape(&worlds, &relation, &valuation)?;
        let n = worlds.len();
        for (u, world) in worlds.iter().enumerate() {
            if relation.get(u, u) != chain.top() {
                return Err(ModelError::NotReflexive { world: world.clone() });
            }
        }
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    if relation.get(u, v).min(relation.get(v, w)) > relation.get(u, w) {
                        return Err(ModelError::NotMeetTransitive {
                            u: worlds[u].clone(),
                            v: worlds[v].clone(),
                            w: worlds[w].clone(),
                        });
                    }
                }
            }
        }
        Ok(PreferenceModel { chain, worlds, relation, valuation })
    }

    /// The underlying chain.
    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    /// World names in index order.
    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    /// Number of worlds.
    pub fn size(&self) -> usize {
        self.worlds.len()
    }

    /// Index of a world name.
    pub fn world_index(&self, name: &str) -> Result<usize, ModelError> {
        self.worlds
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| ModelError::UnknownWorld { name: name.to_string() })
    }

    /// The accessibility relation.
    pub fn relation(&self) -> &FuzzyRelation {
        &self.relation
    }

    /// The valuation.
    pub fn valuation(&self) -> &BTreeMap<String, Vec<Element>> {
        &self.valuation
    }

    /// Evaluates `f` at every world.
    pub fn eval_all(&self, f: &Formula) -> Result<Vec<Element>, ModelError> {
        let ctx = EvalCtx {
            chain: &self.chain,
            n: self.worlds.len(),
            valuation: &self.valuation,
            rel: RelView::FuzzyPreorder {
                p: &self.relation,
                strict: self.relation.strict_part(),
            },
        };
        ctx.eval(f)
    }

    /// Evaluates `f` at one world.
    pub fn eval(&self, world: usize, f: &Formula) -> Result<Element, ModelError> {
        if world >= self.worlds.len() {
            return Err(ModelError::WorldOutOfRange { index: world, size: self.worlds.len() });
        }
        Ok(self.eval_all(f)?[world])
    }

    /// Local consequence on this model: at every world where all premises
    /// evaluate to `1`, the conclusion must evaluate to `1`.
    pub fn holds_locally(
        &self,
        premises: &[Formula],
        conclusion: &Formula,
    ) -> Result<LocalVerdict, ModelError> {
        holds_locally_impl(self.worlds.len(), self.chain.top(), premises, conclusion, |f| {
            self.eval_all(f)
        })
    }

    /// Reinterprets this model as a general model (dropping the preorder
    /// guarantee, and with it access to the strict modalities).
    pub fn into_general(self) -> GeneralModel {
        GeneralModel {
            chain: self.chain,
            worlds: self.worlds,
            relation: self.relation,
            valuation: self.valuation,
        }
    }
}

impl GeneralModel {
    /// Validates shapes only; the relation is unconstrained.
    pub fn new(
        chain: Chain,
        worlds: Vec<String>,
        relation: FuzzyRelation,
        valuation: BTreeMap<String, Vec<Element>>,
    ) -> Result<GeneralModel, ModelError> {
        validate_shape(&worlds, &relation, &valuation)?;
        Ok(GeneralModel { chain, worlds, relation, valuation })
    }

    /// The underlying chain.
    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    /// World names in index order.
    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    /// Number of worlds.
    pub fn size(&self) -> usize {
        self.worlds.len()
    }

    /// The accessibility relation.
    pub fn relation(&self) -> &FuzzyRelation {
        &self.relation
    }

    /// The valuation.
    pub fn valuation(&self) -> &BTreeMap<String, Vec<Element>> {
        &self.valuation
    }

    /// Evaluates `f` at every world; strict modalities are rejected with
    /// `unsupported-modality`.
    pub fn eval_all(&self, f: &Formula) -> Result<Vec<Element>, ModelError> {
        let ctx = EvalCtx {
            chain: &self.chain,
            n: self.worlds.len(),
            valuation: &self.valuation,
            rel: RelView::FuzzyGeneral { p: &self.relation },
        };
        ctx.eval(f)
    }

    /// Evaluates `f` at one world.
    pub fn eval(&self, world: usize, f: &Formula) -> Result<Element, ModelError> {
        if world >= self.worlds.len() {
            return Err(ModelError::WorldOutOfRange { index: world, size: self.worlds.len() });
        }
        Ok(self.eval_all(f)?[world])
    }

    /// Local consequence on this model.
    pub fn holds_locally(
        &self,
        premises: &[Formula],
        conclusion: &Formula,
    ) -> Result<LocalVerdict, ModelError> {
        holds_locally_impl(self.worlds.len(), self.chain.top(), premises, conclusion, |f| {
            self.eval_all(f)
        })
    }

    /// Upgrades to a preference model if the relation is a fuzzy preorder.
    pub fn into_preference(self) -> Result<PreferenceModel, ModelError> {
        PreferenceModel::new(self.chain, self.worlds, self.relation, self.valuation)
    }
}

fn holds_locally_impl(
    n: usize,
    top: Element,
    premises: &[Formula],
    conclusion: &Formula,
    mut eval_all: impl FnMut(&Formula) -> Result<Vec<Element>, ModelError>,
) -> Result<LocalVerdict, ModelError> {
    let premise_vals: Vec<Vec<Element>> =
        premises.iter().map(&mut eval_all).collect::<Result<_, _>>()?;
    let conclusion_vals = eval_all(conclusion)?;
    for v in 0..n {
        let premises_true = premise_vals.iter().all(|vals| vals[v] == top);
        if premises_true && conclusion_vals[v] != top {
            return Ok(LocalVerdict { holds: false, witness: Some(v) });
        }
    }
    Ok(LocalVerdict { holds: true, witness: None })
}

/// The relation context an evaluation runs against.
pub(crate) enum RelView<'a> {
    /// A preference model: full relation plus its precomputed strict part.
    FuzzyPreorder {
        /// The relation `P`.
        p: &'a FuzzyRelation,
        /// `P^<`, computed once per evaluation.
        strict: FuzzyRelation,
    },
    /// A general model: strict modalities are unsupported.
    FuzzyGeneral {
        /// The relation.
        p: &'a FuzzyRelation,
    },
    /// A layered model: crisp cut families directly, plus both fuzzy
    /// aggregates reconstructed from them for the fuzzy modalities.
    Layered {
        /// Weak layers, one per chain element.
        weak: &'a BTreeMap<Element, CrispRelation>,
        /// Strict layers, one per positive element.
        strict: &'a BTreeMap<Element, CrispRelation>,
        /// `P(u,v) = max { b | weak_b(u,v) }`.
        weak_fuzzy: FuzzyRelation,
        /// `max { b | strict_b(u,v) }` (bottom when no layer applies).
        strict_fuzzy: FuzzyRelation,
    },
}

impl RelView<'_> {
    fn weak_fuzzy(&self, u: usize, v: usize) -> Element {
        match self {
            RelView::FuzzyPreorder { p, .. } | RelView::FuzzyGeneral { p } => p.get(u, v),
            RelView::Layered { weak_fuzzy, .. } => weak_fuzzy.get(u, v),
        }
    }

    fn strict_fuzzy(&self, u: usize, v: usize, modality: &'static str) -> Result<Element, ModelError> {
        match self {
            RelView::FuzzyPreorder { strict, .. } => Ok(strict.get(u, v)),
            RelView::FuzzyGeneral { .. } => Err(ModelError::UnsupportedModality { modality }),
            RelView::Layered { strict_fuzzy, .. } => Ok(strict_fuzzy.get(u, v)),
        }
    }

    fn weak_cut(&self, u: usize, v: usize, b: Element) -> bool {
        match self {
            RelView::FuzzyPreorder { p, .. } | RelView::FuzzyGeneral { p } => p.get(u, v) >= b,
            RelView::Layered { weak, .. } => {
                weak.get(&b).map(|r| r.get(u, v)).unwrap_or(false)
            }
        }
    }

    fn strict_cut(
        &self,
        u: usize,
        v: usize,
        b: Element,
        modality: &'static str,
    ) -> Result<bool, ModelError> {
        if b.index() == 0 {
            return Err(ModelError::ZeroStrictCut);
        }
        match self {
            RelView::FuzzyPreorder { p, .. } => Ok(p.get(u, v) >= b && p.get(v, u) < b),
            RelView::FuzzyGeneral { .. } => Err(ModelError::UnsupportedModality { modality }),
            RelView::Layered { strict, .. } => {
                Ok(strict.get(&b).map(|r| r.get(u, v)).unwrap_or(false))
            }
        }
    }
}

/// Everything the evaluator needs; shared between model kinds.
pub(crate) struct EvalCtx<'a> {
    pub(crate) chain: &'a Chain,
    pub(crate) n: usize,
    pub(crate) valuation: &'a BTreeMap<String, Vec<Element>>,
    pub(crate) rel: RelView<'a>,
}

impl EvalCtx<'_> {
    /// Bottom-up vectorised evaluation: one per-world vector per node.
    pub(crate) fn eval(&self, f: &Formula) -> Result<Vec<Element>, ModelError> {
        let c = self.chain;
        let n = self.n;
        use Formula as F;
        Ok(match f {
            F::Var(v) => {
                let row = self
                    .valuation
                    .get(v)
                    .ok_or_else(|| ModelError::UnboundVariable { variable: v.clone() })?;
                debug_assert_eq!(row.len(), n);
                row.clone()
            }
            F::Const(b) => vec![*b; n],
            F::Neg(a) => {
                self.eval(a)?.into_iter().map(|x| c.neg(x)).collect()
            }
            F::Delta(a) => self.eval(a)?.into_iter().map(|x| c.delta(x)).collect(),
            F::And(a, b) => zip_with(self.eval(a)?, self.eval(b)?, |x, y| c.meet(x, y)),
            F::Or(a, b) => zip_with(self.eval(a)?, self.eval(b)?, |x, y| c.join(x, y)),
            F::Prod(a, b) => zip_with(self.eval(a)?, self.eval(b)?, |x, y| c.mono(x, y)),
            F::Imp(a, b) => zip_with(self.eval(a)?, self.eval(b)?, |x, y| c.residuum(x, y)),
            F::Box(a) => {
                let vals = self.eval(a)?;
                (0..n)
                    .map(|v| {
                        (0..n).fold(c.top(), |acc, w| {
                            c.meet(acc, c.residuum(self.rel.weak_fuzzy(v, w), vals[w]))
                        })
                    })
                    .collect()
            }
            F::Dia(a) => {
                let vals = self.eval(a)?;
                (0..n)
                    .map(|v| {
                        (0..n).fold(c.bottom(), |acc, w| {
                            c.join(acc, c.mono(self.rel.weak_fuzzy(v, w), vals[w]))
                        })
                    })
                    .collect()
            }
            F::SBox(a) => {
                let vals = self.eval(a)?;
                let mut out = Vec::with_capacity(n);
                for v in 0..n {
                    let mut acc = c.top();
                    for (w, &val) in vals.iter().enumerate() {
                        let r = self.rel.strict_fuzzy(v, w, "sbox")?;
                        acc = c.meet(acc, c.residuum(r, val));
                    }
                    out.push(acc);
                }
                out
            }
            F::SDia(a) => {
                let vals = self.eval(a)?;
                let mut out = Vec::with_capacity(n);
                for v in 0..n {
                    let mut acc = c.bottom();
                    for (w, &val) in vals.iter().enumerate() {
                        let r = self.rel.strict_fuzzy(v, w, "sdia")?;
                        acc = c.join(acc, c.mono(r, val));
                    }
                    out.push(acc);
                }
                out
            }
            F::BoxCut(b, a) => {
                let vals = self.eval(a)?;
                (0..n)
                    .map(|v| {
                        (0..n)
                            .filter(|&w| self.rel.weak_cut(v, w, *b))
                            .fold(c.top(), |acc, w| c.meet(acc, vals[w]))
                    })
                    .collect()
            }
            F::DiaCut(b, a) => {
                let vals = self.eval(a)?;
                (0..n)
                    .map(|v| {
                        (0..n)
                            .filter(|&w| self.rel.weak_cut(v, w, *b))
                            .fold(c.bottom(), |acc, w| c.join(acc, vals[w]))
                    })
                    .collect()
            }
            F::SBoxCut(b, a) => {
                let vals = self.eval(a)?;
                let mut out = Vec::with_capacity(n);
                for v in 0..n {
                    let mut acc = c.top();
                    for (w, &val) in vals.iter().enumerate() {
                        if self.rel.strict_cut(v, w, *b, "sbox")? {
                            acc = c.meet(acc, val);
                        }
                    }
                    out.push(acc);
                }
                out
            }
            F::SDiaCut(b, a) => {
                let vals = self.eval(a)?;
                let mut out = Vec::with_capacity(n);
                for v in 0..n {
                    let mut acc = c.bottom();
                    for (w, &val) in vals.iter().enumerate() {
                        if self.rel.strict_cut(v, w, *b, "sdia")? {
                            acc = c.join(acc, val);
                        }
                    }
                    out.push(acc);
                }
                out
            }
            F::Univ(a) => {
                let vals = self.eval(a)?;
                let m = vals.iter().fold(c.top(), |acc, &x| c.meet(acc, x));
                vec![m; n]
            }
            F::Exist(a) => {
                let vals = self.eval(a)?;
                let m = vals.iter().fold(c.bottom(), |acc, &x| c.join(acc, x));
                vec![m; n]
            }
        })
    }
}

fn zip_with(
    a: Vec<Element>,
    b: Vec<Element>,
    f: impl Fn(Element, Element) -> Element,
) -> Vec<Element> {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}
