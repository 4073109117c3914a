//! Layered models — families of crisp relations indexed by chain elements —
//! and the bulldozing construction that unwinds strict-layer clusters into
//! strictly ordered copies.
//!
//! A [`LayeredModel`] carries one weak layer `Q_b` per element `b` of the
//! chain and one strict layer `Q^<_b` per positive `b`.  Construction
//! validates the layer laws: every weak layer is reflexive and transitive,
//! every strict layer is transitive, the weak family is nested (`a ≤ b`
//! implies `Q_b ⊆ Q_a`), and each strict layer is contained in its weak
//! layer.  Nestedness of the *strict* family is deliberately not a
//! construction invariant: the strict cuts `(P_b)^<` of a fuzzy preorder
//! are monotone in `b` on the condition `P(u,v) ≥ b` but antitone on
//! `P(v,u) < b`, so a pair can enter a higher strict layer while missing a
//! lower one (take `P(u,v) = 1`, `P(v,u) = 0.5`: the pair is in the strict
//! `1`-layer but not the strict `0.5`-layer).  [`derive_layered`] must stay
//! total, so strict nesting is the separate check
//! [`LayeredModel::check_strict_nesting`], asserted where a construction
//! needs it.
//!
//! A *cluster* of a strict layer is a maximal set of worlds that are
//! mutually related by it — equivalently a strongly connected component
//! with at least one edge.  Because validated strict layers are transitive,
//! mutual reachability is just `Q^<_b(u,v) ∧ Q^<_b(v,u)`, and any world on
//! a mutual edge also carries a self-loop, so the cluster supports are
//! exactly the self-loop worlds.  Preference models never produce clusters
//! (their strict cuts are antisymmetric); layered models with clusters
//! arise as counter-structures, and [`bulldoze`] repairs them.
//!
//! Bulldozing with copy count `K` replaces every world that lies in some
//! cluster by `K` copies and rebuilds each strict layer so that copies of a
//! `b`-cluster are ordered lexicographically — first by copy index, then by
//! a fixed linear order on the cluster — while every other pair inherits
//! the source edge.  Weak layers are the reflexive closures of the new
//! strict layers (level `0` stays universal).  The cluster orders are
//! chosen compatibly across levels: the order of a cluster is assembled
//! from the orders of its immediate sub-clusters (blocks sorted by their
//! smallest member, leftover worlds as singleton blocks), so a deeper
//! cluster's order is a subsequence of every enclosing cluster's order.
//! With compatible orders the rebuilt layers stay nested *provided* the
//! source does not relate two worlds one-directionally at a high level
//! while clustering them at a lower level without clustering them at the
//! high one; inputs of that shape fail the output validation with a
//! `nesting-violation`, which [`bulldoze`] reports rather than masks.
//!
//! **Preservation.**  The finite copy range is an honest substitute for the
//! unboundedly indexed construction only up to a point.  At an index-`0`
//! copy, one modal step reaches exactly the copies of the source successors
//! (including the world's own later copies, which stand in for cluster
//! self-loops), so formulas of modal depth `1` keep their source values at
//! index `0` whenever `K ≥ 2`.  At depth `d ≤ K − 1` the same holds for
//! *polarity-uniform* formulas — those whose nested modalities agree in
//! monotonicity sense (boxes under boxes, diamonds under diamonds, a
//! diamond in the antecedent of an implication under a box, and so on):
//! near the end of the copy order a box can only grow (its successor set
//! shrinks towards the empty meet) and a diamond can only shrink, and
//! uniform nesting keeps those errors on the harmless side of the outer
//! meet or join.  Polarity-*alternating* formulas are not preserved for any
//! finite `K`: a weak step reaches the last copy directly, and there a
//! nested diamond under a box (or box under a diamond) reports a defective
//! value that no copy count can repair.  The tests pin a concrete
//! counterexample.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::lattice::{Chain, Element};
use crate::model::{EvalCtx, LocalVerdict, ModelError, PreferenceModel, RelView};
use crate::relation::{reconstruct_from_cuts, CrispRelation, FuzzyRelation};
use crate::syntax::Formula;

/// Errors raised by layered-model construction and transformations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransformError {
    /// A shape or naming defect, shared with plain models.
    Model(ModelError),
    /// The weak family must cover every element, the strict family every
    /// positive element.
    MissingLevel {
        /// Label of the absent level.
        level: String,
        /// `"weak"` or `"strict"`.
        family: &'static str,
    },
    /// The strict family contains level `0` (strict cuts are undefined
    /// there) or a family contains a level outside the chain.
    UnexpectedLevel {
        /// Label of the offending level.
        level: String,
        /// `"weak"` or `"strict"`.
        family: &'static str,
    },
    /// A layer's size differs from the world count.
    LayerSize {
        /// Label of the layer's level.
        level: String,
        /// Expected world count.
        expected: usize,
        /// Found size.
        found: usize,
    },
    /// A weak layer misses a diagonal pair.
    LayerNotReflexive {
        /// Label of the layer's level.
        level: String,
        /// The world with `(w, w)` missing.
        world: String,
    },
    /// A layer is not transitive.
    LayerNotTransitive {
        /// Label of the layer's level.
        level: String,
        /// `"weak"` or `"strict"`.
        family: &'static str,
        /// Witness triple.
        u: String,
        /// Witness triple.
        v: String,
        /// Witness triple.
        w: String,
    },
    /// A family is not nested: the higher level holds on a pair the lower
    /// level misses.
    NestingViolation {
        /// `"weak"` or `"strict"`.
        family: &'static str,
        /// Label of the smaller level.
        lower: String,
        /// Label of the larger level.
        upper: String,
        /// First world of the offending pair.
        u: String,
        /// Second world of the offending pair.
        v: String,
    },
    /// A strict layer is not contained in its weak layer.
    InclusionViolation {
        /// Label of the level.
        level: String,
        /// First world of the offending pair.
        u: String,
        /// Second world of the offending pair.
        v: String,
    },
    /// The strict layers are not the strict parts of the weak layers, so
    /// the layered model is not the cut family of any fuzzy preorder.
    NotStrictPart(StrictPartViolation),
    /// `to_preference_model` needs the level-`0` weak layer to be total.
    WeakZeroNotUniversal {
        /// First world of a missing pair.
        u: String,
        /// Second world of a missing pair.
        v: String,
    },
    /// `restrict_to_level0_class` needs the level-`0` weak layer to be an
    /// equivalence relation.
    NotAnEquivalence {
        /// First world of a witness pair breaking symmetry or transitivity.
        u: String,
        /// Second world of the witness pair.
        v: String,
    },
    /// Bulldozing needs at least one copy.
    InvalidCopyCount {
        /// The rejected copy count.
        k: usize,
    },
    /// A higher-level cluster straddles a lower-level cluster, so no
    /// compatible cluster ordering exists (only possible when the strict
    /// family is not nested).
    ClusterNesting {
        /// Label of the lower level.
        lower: String,
        /// Label of the higher level.
        upper: String,
        /// A member of the straddling cluster outside the lower cluster.
        world: String,
    },
}

impl fmt::Display for TransformError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformError::Model(e) => e.fmt(f),
            TransformError::MissingLevel { level, family } => {
                write!(f, "{family} layer family is missing level {level}")
            }
            TransformError::UnexpectedLevel { level, family } => {
                write!(f, "{family} layer family must not contain level {level}")
            }
            TransformError::LayerSize { level, expected, found } => {
                write!(f, "layer {level} is over {found} worlds, model has {expected}")
            }
            TransformError::LayerNotReflexive { level, world } => {
                write!(f, "weak layer {level} is not reflexive at `{world}`")
            }
            TransformError::LayerNotTransitive { level, family, u, v, w } => write!(
                f,
                "{family} layer {level} is not transitive at (`{u}`, `{v}`, `{w}`)"
            ),
            TransformError::NestingViolation { family, lower, upper, u, v } => write!(
                f,
                "nesting-violation: {family} layer {upper} holds at (`{u}`, `{v}`) but layer \
                 {lower} does not"
            ),
            TransformError::InclusionViolation { level, u, v } => write!(
                f,
                "strict layer {level} holds at (`{u}`, `{v}`) outside the weak layer"
            ),
            TransformError::NotStrictPart(v) => v.fmt(f),
            TransformError::WeakZeroNotUniversal { u, v } => write!(
                f,
                "weak layer 0 is not universal: (`{u}`, `{v}`) is missing"
            ),
            TransformError::NotAnEquivalence { u, v } => write!(
                f,
                "not-an-equivalence: weak layer 0 fails symmetry or transitivity at \
                 (`{u}`, `{v}`)"
            ),
            TransformError::InvalidCopyCount { k } => {
                write!(f, "bulldozing needs a copy count of at least 1, got {k}")
            }
            TransformError::ClusterNesting { lower, upper, world } => write!(
                f,
                "cluster-nesting: a level {upper} cluster containing `{world}` straddles a \
                 level {lower} cluster"
            ),
        }
    }
}

impl core::error::Error for TransformError {}

impl From<ModelError> for TransformError {
    fn from(e: ModelError) -> TransformError {
        TransformError::Model(e)
    }
}

/// A failed strict-part check: at the named level, the strict layer
/// disagrees with `weak(u,v) ∧ ¬weak(v,u)` on the named pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictPartViolation {
    /// Label of the level.
    pub level: String,
    /// First world of the pair.
    pub u: String,
    /// Second world of the pair.
    pub v: String,
}

impl fmt::Display for StrictPartViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "strict layer {} is not the strict part of the weak layer at (`{}`, `{}`)",
            self.level, self.u, self.v
        )
    }
}

/// A model given by crisp layers: weak relations `Q_b` for every chain
/// element and strict relations `Q^<_b` for every positive element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredModel {
    chain: Chain,
    worlds: Vec<String>,
    weak: BTreeMap<Element, CrispRelation>,
    strict: BTreeMap<Element, CrispRelation>,
    valuation: BTreeMap<String, Vec<Element>>,
}

impl LayeredModel {
    /// Validates all layer laws; see the module documentation.
    pub fn new(
        chain: Chain,
        worlds: Vec<String>,
        weak: BTreeMap<Element, CrispRelation>,
        strict: BTreeMap<Element, CrispRelation>,
        valuation: BTreeMap<String, Vec<Element>>,
    ) -> Result<LayeredModel, TransformError> {
        let n = worlds.len();
        if n == 0 {
            return Err(ModelError::NoWorlds.into());
        }
        for (i, w) in worlds.iter().enumerate() {
            if worlds[..i].contains(w) {
                return Err(ModelError::DuplicateWorld { name: w.clone() }.into());
            }
        }
        for (var, row) in &valuation {
            if row.len() != n {
                return Err(ModelError::ValuationSize {
                    variable: var.clone(),
                    expected: n,
                    found: row.len(),
                }
                .into());
            }
        }
        // Exact level coverage.
        for b in chain.elements() {
            if !weak.contains_key(&b) {
                return Err(TransformError::MissingLevel {
                    level: chain.label(b).to_string(),
                    family: "weak",
                });
            }
        }
        for b in chain.positive_elements() {
            if !strict.contains_key(&b) {
                return Err(TransformError::MissingLevel {
                    level: chain.label(b).to_string(),
                    family: "strict",
                });
            }
        }
        for (family, map, allowed) in
            [("weak", &weak, 0usize), ("strict", &strict, 1usize)]
        {
            for &b in map.keys() {
                if b.index() >= chain.size() || b.index() < allowed {
                    return Err(TransformError::UnexpectedLevel {
                        level: if b.index() < chain.size() {
                            chain.label(b).to_string()
                        } else {
                            b.index().to_string()
                        },
                        family,
                    });
                }
            }
        }
        let name = |i: usize| worlds[i].clone();
        // Per-layer laws.
        for (family, map) in [("weak", &weak), ("strict", &strict)] {
            for (&b, rel) in map.iter() {
                let level = chain.label(b).to_string();
                if rel.size() != n {
                    return Err(TransformError::LayerSize {
                        level,
                        expected: n,
                        found: rel.size(),
                    });
                }
                if family == "weak" {
                    if let Some(u) = (0..n).find(|&u| !rel.get(u, u)) {
                        return Err(TransformError::LayerNotReflexive { level, world: name(u) });
                    }
                }
                for u in 0..n {
                    for v in 0..n {
                        if !rel.get(u, v) {
                            continue;
                        }
                        for w in 0..n {
                            if rel.get(v, w) && !rel.get(u, w) {
                                return Err(TransformError::LayerNotTransitive {
                                    level,
                                    family,
                                    u: name(u),
                                    v: name(v),
                                    w: name(w),
                                });
                            }
                        }
                    }
                }
            }
        }
        // Nesting of the weak family (adjacent levels suffice).  The
        // strict family is exempt; see the module documentation.
        let levels: Vec<Element> = weak.keys().copied().collect();
        for pair in levels.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            for u in 0..n {
                for v in 0..n {
                    if weak[&hi].get(u, v) && !weak[&lo].get(u, v) {
                        return Err(TransformError::NestingViolation {
                            family: "weak",
                            lower: chain.label(lo).to_string(),
                            upper: chain.label(hi).to_string(),
                            u: name(u),
                            v: name(v),
                        });
                    }
                }
            }
        }
        // Strict within weak at each positive level.
        for (&b, srel) in strict.iter() {
            let wrel = &weak[&b];
            for u in 0..n {
                for v in 0..n {
                    if srel.get(u, v) && !wrel.get(u, v) {
                        return Err(TransformError::InclusionViolation {
                            level: chain.label(b).to_string(),
                            u: name(u),
                            v: name(v),
                        });
                    }
                }
            }
        }
        Ok(LayeredModel { chain, worlds, weak, strict, valuation })
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

    /// The weak layer family.
    pub fn weak(&self) -> &BTreeMap<Element, CrispRelation> {
        &self.weak
    }

    /// The strict layer family.
    pub fn strict(&self) -> &BTreeMap<Element, CrispRelation> {
        &self.strict
    }

    /// The valuation.
    pub fn valuation(&self) -> &BTreeMap<String, Vec<Element>> {
        &self.valuation
    }

    /// Evaluates `f` at every world.  Graded modalities read the layers
    /// directly; the fuzzy modalities use the pointwise aggregates
    /// `max { b | Q_b(u,v) }` and `max { b | Q^<_b(u,v) }` (`⊥` when no
    /// layer applies) — computed directly rather than via
    /// [`reconstruct_from_cuts`] because the strict family need not nest.
    pub fn eval_all(&self, f: &Formula) -> Result<Vec<Element>, ModelError> {
        let aggregate = |map: &BTreeMap<Element, CrispRelation>| {
            FuzzyRelation::from_fn(self.worlds.len(), |u, v| {
                map.iter()
                    .rev()
                    .find(|(_, rel)| rel.get(u, v))
                    .map(|(&b, _)| b)
                    .unwrap_or(self.chain.bottom())
            })
        };
        let weak_fuzzy = aggregate(&self.weak);
        let strict_fuzzy = aggregate(&self.strict);
        let ctx = EvalCtx {
            chain: &self.chain,
            n: self.worlds.len(),
            valuation: &self.valuation,
            rel: RelView::Layered {
                weak: &self.weak,
                strict: &self.strict,
                weak_fuzzy,
                strict_fuzzy,
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

    /// Local consequence on this model.
    pub fn holds_locally(
        &self,
        premises: &[Formula],
        conclusion: &Formula,
    ) -> Result<LocalVerdict, ModelError> {
        let premise_vals: Vec<Vec<Element>> =
            premises.iter().map(|p| self.eval_all(p)).collect::<Result<_, _>>()?;
        let conclusion_vals = self.eval_all(conclusion)?;
        let top = self.chain.top();
        for v in 0..self.worlds.len() {
            if premise_vals.iter().all(|vals| vals[v] == top) && conclusion_vals[v] != top {
                return Ok(LocalVerdict { holds: false, witness: Some(v) });
            }
        }
        Ok(LocalVerdict { holds: true, witness: None })
    }

    /// The clusters of the strict layer at `b`: maximal sets of mutually
    /// related worlds (singletons only when they carry a self-loop).
    /// Clusters are listed by smallest member, members ascending.  Level
    /// `0` has no strict layer and yields no clusters.
    pub fn find_clusters(&self, b: Element) -> Vec<Vec<usize>> {
        let Some(rel) = self.strict.get(&b) else {
            return Vec::new();
        };
        find_clusters_of(rel)
    }

    /// Verifies that the strict family is nested: `a ≤ b` implies
    /// `Q^<_b ⊆ Q^<_a`.  Holds for bulldozing outputs built from nested
    /// inputs, but not for the strict-cut family of a typical fuzzy
    /// preorder (see the module documentation).
    pub fn check_strict_nesting(&self) -> Result<(), TransformError> {
        let n = self.worlds.len();
        let levels: Vec<Element> = self.strict.keys().copied().collect();
        for pair in levels.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            for u in 0..n {
                for v in 0..n {
                    if self.strict[&hi].get(u, v) && !self.strict[&lo].get(u, v) {
                        return Err(TransformError::NestingViolation {
                            family: "strict",
                            lower: self.chain.label(lo).to_string(),
                            upper: self.chain.label(hi).to_string(),
                            u: self.worlds[u].clone(),
                            v: self.worlds[v].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Verifies that every strict layer is the strict part of its weak
    /// layer: `Q^<_b(u,v) ⟺ Q_b(u,v) ∧ ¬Q_b(v,u)`.
    pub fn check_strict_part_condition(&self) -> Result<(), StrictPartViolation> {
        let n = self.worlds.len();
        for (&b, srel) in &self.strict {
            let wrel = &self.weak[&b];
            for u in 0..n {
                for v in 0..n {
                    let want = wrel.get(u, v) && !wrel.get(v, u);
                    if srel.get(u, v) != want {
                        return Err(StrictPartViolation {
                            level: self.chain.label(b).to_string(),
                            u: self.worlds[u].clone(),
                            v: self.worlds[v].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Clusters of one transitive strict relation; see
/// [`LayeredModel::find_clusters`].
fn find_clusters_of(rel: &CrispRelation) -> Vec<Vec<usize>> {
    let n = rel.size();
    // On a transitive relation, a mutual edge (u,v) forces the self-loops
    // (u,u) and (v,v), so cluster members are exactly the self-loop worlds.
    let mut assigned = vec![false; n];
    let mut clusters = Vec::new();
    for u in 0..n {
        if assigned[u] || !rel.get(u, u) {
            continue;
        }
        let members: Vec<usize> =
            (u..n).filter(|&v| rel.get(v, v) && rel.get(u, v) && rel.get(v, u)).collect();
        for &v in &members {
            assigned[v] = true;
        }
        clusters.push(members);
    }
    clusters
}

/// Derives the layered view of a preference model: weak layers are the
/// cuts `P_b` for every `b`, strict layers the strict cuts `(P_b)^<` for
/// positive `b`.  The result always validates — cuts of a fuzzy preorder
/// are reflexive, transitive, nested, and strict-within-weak.
pub fn derive_layered(m: &PreferenceModel) -> LayeredModel {
    let p = m.relation();
    let chain = m.chain();
    let weak: BTreeMap<Element, CrispRelation> =
        chain.elements().map(|b| (b, p.cut(b))).collect();
    let strict: BTreeMap<Element, CrispRelation> = chain
        .positive_elements()
        .map(|b| (b, p.strict_of_cut(b).expect("positive levels are never degenerate")))
        .collect();
    LayeredModel::new(
        chain.clone(),
        m.worlds().to_vec(),
        weak,
        strict,
        m.valuation().clone(),
    )
    .expect("cuts of a fuzzy preorder always satisfy the layer laws")
}

/// Rebuilds the fuzzy preference model whose cut family a layered model is.
///
/// Preconditions: every strict layer is the strict part of its weak layer
/// (else `NotStrictPart`), and the level-`0` weak layer is universal (else
/// `WeakZeroNotUniversal`).  Under these the reconstructed relation is a
/// fuzzy preorder and [`derive_layered`] of the result reproduces the
/// input layers exactly.
pub fn to_preference_model(lm: &LayeredModel) -> Result<PreferenceModel, TransformError> {
    lm.check_strict_part_condition().map_err(TransformError::NotStrictPart)?;
    let n = lm.size();
    let zero = &lm.weak[&lm.chain.bottom()];
    for u in 0..n {
        for v in 0..n {
            if !zero.get(u, v) {
                return Err(TransformError::WeakZeroNotUniversal {
                    u: lm.worlds[u].clone(),
                    v: lm.worlds[v].clone(),
                });
            }
        }
    }
    let p = reconstruct_from_cuts(&lm.weak, &lm.chain)
        .expect("validated weak layers are nested");
    Ok(PreferenceModel::new(
        lm.chain.clone(),
        lm.worlds.clone(),
        p,
        lm.valuation.clone(),
    )?)
}

/// Restricts a layered model to the level-`0` class of the world `v`.
///
/// Requires the level-`0` weak layer to be an equivalence relation (errors
/// with `not-an-equivalence` otherwise); the restriction keeps every layer
/// and the valuation on `{ u | Q_0(v, u) }`, on which level `0` becomes
/// universal.
pub fn restrict_to_level0_class(
    lm: &LayeredModel,
    v: usize,
) -> Result<LayeredModel, TransformError> {
    let n = lm.size();
    if v >= n {
        return Err(ModelError::WorldOutOfRange { index: v, size: n }.into());
    }
    let zero = &lm.weak[&lm.chain.bottom()];
    for u in 0..n {
        for w in 0..n {
            if zero.get(u, w) && !zero.get(w, u) {
                return Err(TransformError::NotAnEquivalence {
                    u: lm.worlds[u].clone(),
                    v: lm.worlds[w].clone(),
                });
            }
            for x in 0..n {
                if zero.get(u, w) && zero.get(w, x) && !zero.get(u, x) {
                    return Err(TransformError::NotAnEquivalence {
                        u: lm.worlds[u].clone(),
                        v: lm.worlds[x].clone(),
                    });
                }
            }
        }
    }
    let class: Vec<usize> = (0..n).filter(|&u| zero.get(v, u)).collect();
    let restrict = |rel: &CrispRelation| {
        CrispRelation::from_fn(class.len(), |i, j| rel.get(class[i], class[j]))
    };
    LayeredModel::new(
        lm.chain.clone(),
        class.iter().map(|&u| lm.worlds[u].clone()).collect(),
        lm.weak.iter().map(|(&b, r)| (b, restrict(r))).collect(),
        lm.strict.iter().map(|(&b, r)| (b, restrict(r))).collect(),
        lm.valuation
            .iter()
            .map(|(var, row)| (var.clone(), class.iter().map(|&u| row[u]).collect()))
            .collect(),
    )
}

/// Clusters of one level, with a link to the enclosing cluster at the
/// previous positive level when there is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelClusters {
    /// The (positive) level.
    pub level: Element,
    /// Clusters as ascending lists of source world indices, ordered by
    /// smallest member.
    pub clusters: Vec<Vec<usize>>,
    /// For each cluster, the index of the cluster at the previous positive
    /// level that contains it, if any.
    pub parent: Vec<Option<usize>>,
}

/// What [`bulldoze`] did: cluster structure, copy count, and the origin of
/// every output world.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BulldozeReport {
    /// The copy count `K`.
    pub copy_count: usize,
    /// Cluster structure per positive level, ascending.
    pub levels: Vec<LevelClusters>,
    /// Source worlds (indices) that were replaced by `K` copies.
    pub copied_worlds: Vec<usize>,
    /// For every output world: the source world index and the copy index
    /// (`0` for worlds copied once).
    pub origins: Vec<(usize, usize)>,
}

/// Bulldozes a layered model with `k ≥ 1` copies per cluster world; see the
/// module documentation for the construction.  Returns the rebuilt model
/// together with a report of the cluster structure.  The output is
/// validated like any layered model, so a source whose cluster structure
/// cannot be linearised consistently across levels surfaces as a
/// `nesting-violation` error.
pub fn bulldoze(
    lm: &LayeredModel,
    k: usize,
) -> Result<(LayeredModel, BulldozeReport), TransformError> {
    if k < 1 {
        return Err(TransformError::InvalidCopyCount { k });
    }
    let n = lm.size();
    let levels: Vec<Element> = lm.chain.positive_elements().collect();
    let clusters_by_level: Vec<Vec<Vec<usize>>> =
        levels.iter().map(|&b| lm.find_clusters(b)).collect();

    // A higher-level cluster intersecting a lower-level cluster must lie
    // inside it, or no compatible ordering exists.  Guaranteed when the
    // strict family is nested; checked here so other inputs fail loudly.
    for pos in 0..levels.len().saturating_sub(1) {
        for sub in &clusters_by_level[pos + 1] {
            for members in &clusters_by_level[pos] {
                if sub.iter().any(|w| members.contains(w)) {
                    if let Some(&out) = sub.iter().find(|w| !members.contains(w)) {
                        return Err(TransformError::ClusterNesting {
                            lower: lm.chain.label(levels[pos]).to_string(),
                            upper: lm.chain.label(levels[pos + 1]).to_string(),
                            world: lm.worlds[out].clone(),
                        });
                    }
                }
            }
        }
    }

    // cluster_of[level position][world] — membership index per level.
    let cluster_of: Vec<Vec<Option<usize>>> = clusters_by_level
        .iter()
        .map(|clusters| {
            let mut of = vec![None; n];
            for (ci, members) in clusters.iter().enumerate() {
                for &w in members {
                    of[w] = Some(ci);
                }
            }
            of
        })
        .collect();

    // Linear orders per cluster, compatible across levels: recursion over
    // level positions, memoised.
    fn order_of(
        pos: usize,
        ci: usize,
        clusters_by_level: &[Vec<Vec<usize>>],
        memo: &mut BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Vec<usize> {
        if let Some(o) = memo.get(&(pos, ci)) {
            return o.clone();
        }
        let members = &clusters_by_level[pos][ci];
        let order = if pos + 1 >= clusters_by_level.len() {
            let mut m = members.clone();
            m.sort_unstable();
            m
        } else {
            // Immediate sub-clusters: next-level clusters inside members
            // (full containment was checked before ordering began).
            let mut blocks: Vec<Vec<usize>> = Vec::new();
            let mut covered = vec![false; members.len()];
            for (sub_ci, sub) in clusters_by_level[pos + 1].iter().enumerate() {
                if sub.iter().any(|w| members.contains(w)) {
                    for (mi, m) in members.iter().enumerate() {
                        if sub.contains(m) {
                            covered[mi] = true;
                        }
                    }
                    blocks.push(order_of(pos + 1, sub_ci, clusters_by_level, memo));
                }
            }
            for (mi, m) in members.iter().enumerate() {
                if !covered[mi] {
                    blocks.push(vec![*m]);
                }
            }
            blocks.sort_by_key(|b| *b.iter().min().expect("blocks are nonempty"));
            blocks.concat()
        };
        memo.insert((pos, ci), order.clone());
        order
    }
    let mut memo: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for pos in (0..levels.len()).rev() {
        for ci in 0..clusters_by_level[pos].len() {
            order_of(pos, ci, &clusters_by_level, &mut memo);
        }
    }
    // rank[pos][world] — position of a world in its cluster's order.
    let rank: Vec<Vec<usize>> = (0..levels.len())
        .map(|pos| {
            let mut r = vec![0usize; n];
            for ci in 0..clusters_by_level[pos].len() {
                for (i, &w) in memo[&(pos, ci)].iter().enumerate() {
                    r[w] = i;
                }
            }
            r
        })
        .collect();

    let needs_copies: Vec<bool> = (0..n)
        .map(|w| cluster_of.iter().any(|of| of[w].is_some()))
        .collect();

    let mut out_worlds: Vec<String> = Vec::new();
    let mut origins: Vec<(usize, usize)> = Vec::new();
    for (w, name) in lm.worlds.iter().enumerate() {
        if needs_copies[w] {
            for i in 0..k {
                out_worlds.push(alloc::format!("{name}@{i}"));
                origins.push((w, i));
            }
        } else {
            out_worlds.push(name.clone());
            origins.push((w, 0));
        }
    }
    let m = out_worlds.len();

    let mut strict_out: BTreeMap<Element, CrispRelation> = BTreeMap::new();
    for (pos, &b) in levels.iter().enumerate() {
        let src = &lm.strict[&b];
        let rel = CrispRelation::from_fn(m, |x, y| {
            let (v, nv) = origins[x];
            let (w, mw) = origins[y];
            match (cluster_of[pos][v], cluster_of[pos][w]) {
                (Some(cv), Some(cw)) if cv == cw => {
                    // Copies of one cluster: strictly ordered by copy index
                    // first, cluster order second.
                    nv < mw || (nv == mw && rank[pos][v] < rank[pos][w])
                }
                _ => src.get(v, w),
            }
        });
        strict_out.insert(b, rel);
    }

    let mut weak_out: BTreeMap<Element, CrispRelation> = BTreeMap::new();
    weak_out.insert(lm.chain.bottom(), CrispRelation::universal(m));
    for &b in &levels {
        weak_out.insert(b, strict_out[&b].reflexive_closure());
    }

    let valuation_out: BTreeMap<String, Vec<Element>> = lm
        .valuation
        .iter()
        .map(|(var, row)| (var.clone(), origins.iter().map(|&(w, _)| row[w]).collect()))
        .collect();

    let report = BulldozeReport {
        copy_count: k,
        levels: levels
            .iter()
            .enumerate()
            .map(|(pos, &b)| {
                let clusters = clusters_by_level[pos].clone();
                let parent = clusters
                    .iter()
                    .map(|members| {
                        pos.checked_sub(1).and_then(|prev| cluster_of[prev][members[0]])
                    })
                    .collect();
                LevelClusters { level: b, clusters, parent }
            })
            .collect(),
        copied_worlds: (0..n).filter(|&w| needs_copies[w]).collect(),
        origins,
    };

    let out = LayeredModel::new(
        lm.chain.clone(),
        out_worlds,
        weak_out,
        strict_out,
        valuation_out,
    )?;
    Ok((out, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_lukasiewicz;
    use crate::syntax::parse;

    fn travel_model() -> PreferenceModel {
        let chain = make_lukasiewicz(11).unwrap();
        let worlds: Vec<String> = ["bf", "bm", "cf", "cm"].iter().map(|s| s.to_string()).collect();
        let rows = [
            ["1", "0.5", "0.5", "0.5"],
            ["0.8", "1", "0.6", "0.8"],
            ["0.8", "0.5", "1", "0.7"],
            ["0.6", "0.5", "0.5", "1"],
        ];
        let relation = FuzzyRelation::from_fn(4, |u, v| chain.element(rows[u][v]).unwrap());
        let top = chain.top();
        let bot = chain.bottom();
        let mut valuation = BTreeMap::new();
        valuation.insert("b".to_string(), vec![top, top, bot, bot]);
        valuation.insert("f".to_string(), vec![top, bot, top, bot]);
        PreferenceModel::new(chain, worlds, relation, valuation).unwrap()
    }

    #[test]
    fn derived_layers_are_the_cut_families() {
        let m = travel_model();
        let lm = derive_layered(&m);
        let b = m.chain().element("0.8").unwrap();
        let q = &lm.weak()[&b];
        // bm ≥ bf and cf ≥ bf hold at level 0.8 (among others).
        assert!(q.get(1, 0) && q.get(2, 0));
        assert!(!q.get(0, 1));
        assert_eq!(*q, m.relation().cut(b));
        assert_eq!(lm.strict()[&b], m.relation().strict_of_cut(b).unwrap());
        // A preference model's strict cuts are antisymmetric: no clusters.
        for level in m.chain().positive_elements() {
            assert!(lm.find_clusters(level).is_empty());
        }
        assert_eq!(lm.check_strict_part_condition(), Ok(()));
        // Strict cut families need not nest: (bm, bf) has P(bm,bf) = 0.8
        // and P(bf,bm) = 0.5, entering the 0.6-layer but not the 0.5-layer.
        let e = lm.check_strict_nesting().unwrap_err();
        assert_eq!(
            e,
            TransformError::NestingViolation {
                family: "strict",
                lower: "0.5".into(),
                upper: "0.6".into(),
                u: "bm".into(),
                v: "bf".into(),
            }
        );
    }

    #[test]
    fn layered_evaluation_agrees_with_the_source_model() {
        let m = travel_model();
        let lm = derive_layered(&m);
        for text in [
            "b",
            "dia b",
            "box f",
            "sdia b",
            "sbox (b -> f)",
            "box(0.8) f",
            "sdia(0.6) b",
            "A b -> E f",
            "delta (dia b) & ~f",
        ] {
            let f = parse(text, m.chain()).unwrap();
            assert_eq!(lm.eval_all(&f).unwrap(), m.eval_all(&f).unwrap(), "formula {text}");
        }
    }

    #[test]
    fn round_trip_through_the_preference_model() {
        let m = travel_model();
        let lm = derive_layered(&m);
        let back = to_preference_model(&lm).unwrap();
        assert_eq!(&back, &m);
        assert_eq!(derive_layered(&back).weak(), lm.weak());
        assert_eq!(derive_layered(&back).strict(), lm.strict());
    }

    /// Three worlds x, y, z over the three-element chain with a two-world
    /// cluster {x, y} at both positive levels and z strictly below it at
    /// level 0.5.
    fn cluster_model() -> LayeredModel {
        let chain = make_lukasiewicz(3).unwrap();
        let half = chain.element("0.5").unwrap();
        let top = chain.top();
        let worlds: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let s_top = CrispRelation::from_pairs(3, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        let s_half =
            CrispRelation::from_pairs(3, &[(0, 0), (0, 1), (1, 0), (1, 1), (0, 2), (1, 2)]);
        let w_top = s_top.reflexive_closure();
        let w_half = s_half.reflexive_closure();
        let mut weak = BTreeMap::new();
        weak.insert(chain.bottom(), CrispRelation::universal(3));
        weak.insert(half, w_half);
        weak.insert(top, w_top);
        let mut strict = BTreeMap::new();
        strict.insert(half, s_half);
        strict.insert(top, s_top);
        let valuation = BTreeMap::from([(
            "p".to_string(),
            vec![top, chain.bottom(), half],
        )]);
        LayeredModel::new(chain, worlds, weak, strict, valuation).unwrap()
    }

    #[test]
    fn clusters_are_found_per_level() {
        let lm = cluster_model();
        let half = lm.chain().element("0.5").unwrap();
        let top = lm.chain().top();
        assert_eq!(lm.find_clusters(half), [[0, 1]]);
        assert_eq!(lm.find_clusters(top), [[0, 1]]);
        assert_eq!(lm.find_clusters(lm.chain().bottom()), Vec::<Vec<usize>>::new());
        // A cluster model is not the cut family of any preference model.
        let violation = lm.check_strict_part_condition().unwrap_err();
        assert_eq!(violation.level, "0.5");
        assert!(matches!(to_preference_model(&lm), Err(TransformError::NotStrictPart(_))));
    }

    #[test]
    fn bulldozing_linearises_the_cluster() {
        let lm = cluster_model();
        let (out, report) = bulldoze(&lm, 2).unwrap();
        assert_eq!(
            out.worlds(),
            ["x@0", "x@1", "y@0", "y@1", "z"]
        );
        assert_eq!(report.copy_count, 2);
        assert_eq!(report.copied_worlds, [0, 1]);
        assert_eq!(report.levels.len(), 2);
        assert_eq!(report.levels[1].clusters, [[0, 1]]);
        assert_eq!(report.levels[1].parent, [Some(0)]);

        // Every strict layer of the output is irreflexive, transitive,
        // nested, and the strict part of its weak layer.
        assert_eq!(out.check_strict_part_condition(), Ok(()));
        assert_eq!(out.check_strict_nesting(), Ok(()));
        assert_eq!(lm.check_strict_nesting(), Ok(()));
        for (_, rel) in out.strict() {
            assert!(rel.is_irreflexive());
            assert!(rel.is_transitive());
        }
        // The copies of the cluster are linearly ordered: copy index
        // first, cluster order (x before y) second.
        let top = lm.chain().top();
        let s = &out.strict()[&top];
        let xi = |name: &str| out.world_index(name).unwrap();
        assert!(s.get(xi("x@0"), xi("y@0")));
        assert!(s.get(xi("y@0"), xi("x@1")));
        assert!(s.get(xi("x@1"), xi("y@1")));
        assert!(!s.get(xi("y@1"), xi("x@0")));
        assert!(!s.get(xi("x@0"), xi("z")), "x-z edge exists only at level 0.5");
        let half = lm.chain().element("0.5").unwrap();
        assert!(out.strict()[&half].get(xi("x@0"), xi("z")));

        // A cluster-free model whose weak layers are the reflexive
        // closures of its strict layers passes through unchanged.
        let chain = make_lukasiewicz(3).unwrap();
        let one = chain.top();
        let rows = [["1", "1"], ["0", "1"]];
        let p = FuzzyRelation::from_fn(2, |u, v| chain.element(rows[u][v]).unwrap());
        let valuation = BTreeMap::from([("p".to_string(), vec![one, chain.bottom()])]);
        let worlds: Vec<String> = ["u", "v"].iter().map(|s| s.to_string()).collect();
        let m = PreferenceModel::new(chain, worlds, p, valuation).unwrap();
        let flat = derive_layered(&m);
        let (same, report) = bulldoze(&flat, 3).unwrap();
        assert_eq!(&same, &flat);
        assert!(report.copied_worlds.is_empty());

        // Inputs whose weak layers carry mutual edges outside any cluster
        // (every genuine preference model with ties, e.g. the travel
        // model) cannot be rebuilt from reflexive closures of the strict
        // layers; the output validation reports the non-nested weak
        // family rather than silently altering the model.
        let skewed = derive_layered(&travel_model());
        assert!(matches!(
            bulldoze(&skewed, 2),
            Err(TransformError::NestingViolation { family: "weak", .. })
        ));
    }

    #[test]
    fn bulldozing_preserves_depth_bounded_formulas_at_index_zero() {
        let lm = cluster_model();
        for (depth, text) in [
            (1usize, "sdia(1) p"),
            (1, "box(0.5) p"),
            (1, "sbox(1) p | dia(1) p"),
            (2, "sdia(1) sdia(1) p"),
            (2, "box(1) sbox(1) p"),
            (2, "sbox(0.5) dia(0.5) p"),
        ] {
            let f = parse(text, lm.chain()).unwrap();
            let (out, _) = bulldoze(&lm, depth + 1).unwrap();
            let source = lm.eval_all(&f).unwrap();
            let bulldozed = out.eval_all(&f).unwrap();
            for (oi, &(src, copy)) in
                (0..out.size()).zip(out_origins(&lm, &out).iter())
            {
                if copy == 0 {
                    assert_eq!(
                        bulldozed[oi],
                        source[src],
                        "{text} at {} (K = {})",
                        out.worlds()[oi],
                        depth + 1
                    );
                }
            }
        }
    }

    /// Recomputes the origin map from world names (copies are `name@i`).
    fn out_origins(src: &LayeredModel, out: &LayeredModel) -> Vec<(usize, usize)> {
        out.worlds()
            .iter()
            .map(|name| match name.split_once('@') {
                Some((base, i)) => {
                    (src.world_index(base).unwrap(), i.parse::<usize>().unwrap())
                }
                None => (src.world_index(name).unwrap(), 0),
            })
            .collect()
    }

    #[test]
    fn bulldozing_rejects_zero_copies() {
        let lm = cluster_model();
        assert!(matches!(bulldoze(&lm, 0), Err(TransformError::InvalidCopyCount { k: 0 })));
    }

    #[test]
    fn restriction_to_the_level_zero_class() {
        let chain = make_lukasiewicz(3).unwrap();
        let half = chain.element("0.5").unwrap();
        let top = chain.top();
        // Two level-0 classes {x, y} and {z}; higher layers only inside.
        let zero = CrispRelation::from_pairs(3, &[(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)]);
        let diag = CrispRelation::from_pairs(3, &[(0, 0), (1, 1), (2, 2)]);
        let weak = BTreeMap::from([
            (chain.bottom(), zero),
            (half, diag.clone()),
            (top, diag.clone()),
        ]);
        let strict = BTreeMap::from([(half, CrispRelation::empty(3)), (top, CrispRelation::empty(3))]);
        let valuation = BTreeMap::from([("p".to_string(), vec![top, half, chain.bottom()])]);
        let worlds: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let lm = LayeredModel::new(chain.clone(), worlds, weak, strict, valuation).unwrap();

        let restricted = restrict_to_level0_class(&lm, 0).unwrap();
        assert_eq!(restricted.worlds(), ["x", "y"]);
        assert_eq!(restricted.weak()[&chain.bottom()], CrispRelation::universal(2));
        assert_eq!(restricted.valuation()["p"], vec![top, half]);
        let just_z = restrict_to_level0_class(&lm, 2).unwrap();
        assert_eq!(just_z.worlds(), ["z"]);

        // A non-symmetric level 0 is rejected.
        let skewed = CrispRelation::from_pairs(3, &[(0, 0), (0, 1), (1, 1), (2, 2)]);
        let weak = BTreeMap::from([
            (chain.bottom(), skewed),
            (half, diag.clone()),
            (top, diag),
        ]);
        let strict =
            BTreeMap::from([(half, CrispRelation::empty(3)), (top, CrispRelation::empty(3))]);
        let worlds: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let lm = LayeredModel::new(chain, worlds, weak, strict, BTreeMap::new()).unwrap();
        assert!(matches!(
            restrict_to_level0_class(&lm, 0),
            Err(TransformError::NotAnEquivalence { .. })
        ));
    }

    #[test]
    fn construction_validates_the_layer_laws() {
        let chain = make_lukasiewicz(3).unwrap();
        let half = chain.element("0.5").unwrap();
        let top = chain.top();
        let worlds: Vec<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        let u2 = CrispRelation::universal(2);
        let diag = CrispRelation::from_pairs(2, &[(0, 0), (1, 1)]);
        let empty = CrispRelation::empty(2);

        // Missing strict level.
        let e = LayeredModel::new(
            chain.clone(),
            worlds.clone(),
            BTreeMap::from([(chain.bottom(), u2.clone()), (half, u2.clone()), (top, u2.clone())]),
            BTreeMap::from([(top, empty.clone())]),
            BTreeMap::new(),
        )
        .unwrap_err();
        assert_eq!(e, TransformError::MissingLevel { level: "0.5".into(), family: "strict" });

        // Non-nested weak family: level 1 relates (0,1), level 0.5 not.
        let with_edge = CrispRelation::from_pairs(2, &[(0, 0), (1, 1), (0, 1)]);
        let e = LayeredModel::new(
            chain.clone(),
            worlds.clone(),
            BTreeMap::from([
                (chain.bottom(), u2.clone()),
                (half, diag.clone()),
                (top, with_edge.clone()),
            ]),
            BTreeMap::from([(half, empty.clone()), (top, empty.clone())]),
            BTreeMap::new(),
        )
        .unwrap_err();
        assert_eq!(
            e,
            TransformError::NestingViolation {
                family: "weak",
                lower: "0.5".into(),
                upper: "1".into(),
                u: "x".into(),
                v: "y".into(),
            }
        );

        // Strict layer outside its weak layer.
        let e = LayeredModel::new(
            chain.clone(),
            worlds.clone(),
            BTreeMap::from([(chain.bottom(), u2.clone()), (half, diag.clone()), (top, diag)]),
            BTreeMap::from([
                (half, CrispRelation::from_pairs(2, &[(0, 1)])),
                (top, empty),
            ]),
            BTreeMap::new(),
        )
        .unwrap_err();
        assert_eq!(
            e,
            TransformError::InclusionViolation { level: "0.5".into(), u: "x".into(), v: "y".into() }
        );
    }
}
