//! JSON document format for models.
//!
//! One document type covers flat models (a fuzzy `relation` matrix over
//! the chain's labels), layered models (crisp `weak`/`strict` bit-matrix
//! families keyed by level label), and countermodels (an optional
//! `witness_world` naming the refuting world).  Labels keep documents
//! readable and chain-agnostic; all resolution happens against the
//! document's own `lattice`.
//!
//! The bundled dinner-scenario model is the reference instance:
//!
//! ```json
//! {
//!   "lattice": { "kind": "lukasiewicz", "n": 11 },
//!   "worlds": ["bf", "bm", "cf", "cm"],
//!   "relation": [["1", "0.5", "0.5", "0.5"], ...],
//!   "valuation": { "b": { "bf": "1", "bm": "1", "cf": "0", "cm": "0" }, ... }
//! }
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use mvpref_core::lattice::{
    make_godel, make_lukasiewicz, make_custom, Chain, Element, LatticeError,
};
use mvpref_core::model::{GeneralModel, ModelError, PreferenceModel};
use mvpref_core::relation::{CrispRelation, FuzzyRelation, RelationError};
use mvpref_core::search::AnyModel;
use mvpref_core::transform::{LayeredModel, TransformError};

/// Errors raised while reading, resolving, or rebuilding documents.
#[derive(Debug, Error)]
pub enum DocError {
    /// The text is not a well-formed document.
    #[error("document: {0}")]
    Json(#[from] serde_json::Error),
    /// The lattice section does not build, or a label does not resolve.
    #[error("lattice: {0}")]
    Lattice(#[from] LatticeError),
    /// A relation matrix is malformed.
    #[error("relation: {0}")]
    Relation(#[from] RelationError),
    /// The assembled model fails validation.
    #[error("model: {0}")]
    Model(#[from] ModelError),
    /// The assembled layered model fails validation.
    #[error("layered model: {0}")]
    Transform(#[from] TransformError),
    /// A structural problem the core types cannot express.
    #[error("{0}")]
    Shape(String),
}

/// The truth-value algebra of a document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LatticeDoc {
    /// The n-element Łukasiewicz chain.
    Lukasiewicz {
        /// Element count.
        n: usize,
    },
    /// The n-element Gödel chain.
    Godel {
        /// Element count.
        n: usize,
    },
    /// An explicit chain: ascending labels and the full product table.
    Custom {
        /// Labels, bottom first.
        elements: Vec<String>,
        /// Product table, row-major over `elements`.
        mono: Vec<Vec<String>>,
    },
}

impl LatticeDoc {
    /// Builds the chain this section describes.
    pub fn build(&self) -> Result<Chain, LatticeError> {
        match self {
            LatticeDoc::Lukasiewicz { n } => make_lukasiewicz(*n),
            LatticeDoc::Godel { n } => make_godel(*n),
            LatticeDoc::Custom { elements, mono } => make_custom(elements.clone(), mono),
        }
    }

    /// Describes an existing chain, recognising the named families so
    /// emitted documents stay as readable as hand-written ones.
    pub fn describe(chain: &Chain) -> LatticeDoc {
        let n = chain.size();
        if let Ok(luk) = make_lukasiewicz(n) {
            if same_algebra(chain, &luk) {
                return LatticeDoc::Lukasiewicz { n };
            }
        }
        if let Ok(goedel) = make_godel(n) {
            if same_algebra(chain, &goedel) {
                return LatticeDoc::Godel { n };
            }
        }
        let elements: Vec<String> =
            chain.elements().map(|e| chain.label(e).to_string()).collect();
        let mono: Vec<Vec<String>> = chain
            .elements()
            .map(|x| {
                chain
                    .elements()
                    .map(|y| chain.label(chain.mono(x, y)).to_string())
                    .collect()
            })
            .collect();
        LatticeDoc::Custom { elements, mono }
    }
}

fn same_algebra(a: &Chain, b: &Chain) -> bool {
    a.size() == b.size()
        && a.elements().all(|x| a.label(x) == b.label(x))
        && a.elements().all(|x| {
            a.elements().all(|y| a.label(a.mono(x, y)) == b.label(b.mono(x, y)))
        })
}

/// A model on disk: chain, worlds, either a fuzzy relation matrix or a
/// layered crisp level family, a valuation, and (for countermodels) the
/// world where the refuted formula fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    /// The truth-value algebra.
    pub lattice: LatticeDoc,
    /// World names, in display order.
    pub worlds: Vec<String>,
    /// Fuzzy accessibility matrix (row = source world), by label.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<Vec<Vec<String>>>,
    /// Layered weak relations: level label to 0/1 matrix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weak: Option<BTreeMap<String, Vec<Vec<u8>>>>,
    /// Layered strict relations: positive level label to 0/1 matrix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strict: Option<BTreeMap<String, Vec<Vec<u8>>>>,
    /// Per-variable truth values: variable to world name to label.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub valuation: BTreeMap<String, BTreeMap<String, String>>,
    /// For countermodels: the world where the check fails.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_world: Option<String>,
}

impl ModelDocument {
    /// Builds the document's chain.
    pub fn chain(&self) -> Result<Chain, DocError> {
        Ok(self.lattice.build()?)
    }

    /// True when the document carries a layered level family rather than
    /// a fuzzy relation matrix.
    pub fn is_layered(&self) -> bool {
        self.weak.is_some() || self.strict.is_some()
    }

    /// Resolves the fuzzy relation matrix against `chain`.
    pub fn relation_matrix(&self, chain: &Chain) -> Result<FuzzyRelation, DocError> {
        let rows = self.relation.as_ref().ok_or_else(|| {
            DocError::Shape(
                "the document has no `relation` matrix (is it a layered model?)".to_string(),
            )
        })?;
        let n = self.worlds.len();
        if rows.len() != n {
            return Err(DocError::Shape(format!(
                "relation has {} rows, the model has {n} worlds",
                rows.len()
            )));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (u, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(DocError::Shape(format!(
                    "relation row {u} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for label in row {
                entries.push(chain.element(label)?);
            }
        }
        Ok(FuzzyRelation::new(n, entries)?)
    }

    /// Resolves the valuation against `chain`; every variable must cover
    /// every world exactly.
    pub fn valuation_rows(
        &self,
        chain: &Chain,
    ) -> Result<BTreeMap<String, Vec<Element>>, DocError> {
        let mut out = BTreeMap::new();
        for (var, by_world) in &self.valuation {
            for world in by_world.keys() {
                if !self.worlds.contains(world) {
                    return Err(DocError::Shape(format!(
                        "valuation of `{var}` names unknown world `{world}`"
                    )));
                }
            }
            let mut row = Vec::with_capacity(self.worlds.len());
            for world in &self.worlds {
                let label = by_world.get(world).ok_or_else(|| {
                    DocError::Shape(format!(
                        "valuation of `{var}` misses world `{world}`"
                    ))
                })?;
                row.push(chain.element(label)?);
            }
            out.insert(var.clone(), row);
        }
        Ok(out)
    }

    /// Assembles a preference model (validating the preorder laws).
    pub fn to_preference_model(&self) -> Result<PreferenceModel, DocError> {
        let chain = self.chain()?;
        let relation = self.relation_matrix(&chain)?;
        let valuation = self.valuation_rows(&chain)?;
        Ok(PreferenceModel::new(chain, self.worlds.clone(), relation, valuation)?)
    }

    /// Assembles a general model (shape checks only).
    pub fn to_general_model(&self) -> Result<GeneralModel, DocError> {
        let chain = self.chain()?;
        let relation = self.relation_matrix(&chain)?;
        let valuation = self.valuation_rows(&chain)?;
        Ok(GeneralModel::new(chain, self.worlds.clone(), relation, valuation)?)
    }

    /// Assembles the strongest model the relation supports: a preference
    /// model when the preorder laws hold, otherwise a general model (on
    /// which strict modalities are rejected at evaluation time).
    pub fn to_any_model(&self) -> Result<AnyModel, DocError> {
        match self.to_preference_model() {
            Ok(m) => Ok(AnyModel::Preference(m)),
            Err(DocError::Model(
                ModelError::NotReflexive { .. } | ModelError::NotMeetTransitive { .. },
            )) => Ok(AnyModel::General(self.to_general_model()?)),
            Err(e) => Err(e),
        }
    }

    /// Assembles a layered model from the `weak`/`strict` families.
    pub fn to_layered_model(&self) -> Result<LayeredModel, DocError> {
        let chain = self.chain()?;
        let weak = self.level_family(&chain, self.weak.as_ref(), "weak")?;
        let strict = self.level_family(&chain, self.strict.as_ref(), "strict")?;
        let valuation = self.valuation_rows(&chain)?;
        Ok(LayeredModel::new(chain, self.worlds.clone(), weak, strict, valuation)?)
    }

    fn level_family(
        &self,
        chain: &Chain,
        family: Option<&BTreeMap<String, Vec<Vec<u8>>>>,
        what: &str,
    ) -> Result<BTreeMap<Element, CrispRelation>, DocError> {
        let family = family.ok_or_else(|| {
            DocError::Shape(format!(
                "the document has no `{what}` level family (is it a flat model?)"
            ))
        })?;
        let n = self.worlds.len();
        let mut out = BTreeMap::new();
        for (label, bits) in family {
            let level = chain.element(label)?;
            if bits.len() != n {
                return Err(DocError::Shape(format!(
                    "`{what}` level {label} has {} rows, the model has {n} worlds",
                    bits.len()
                )));
            }
            let mut rel = CrispRelation::empty(n);
            for (u, row) in bits.iter().enumerate() {
                if row.len() != n {
                    return Err(DocError::Shape(format!(
                        "`{what}` level {label} row {u} has {} entries, expected {n}",
                        row.len()
                    )));
                }
                for (v, &bit) in row.iter().enumerate() {
                    match bit {
                        0 => {}
                        1 => rel.set(u, v, true),
                        other => {
                            return Err(DocError::Shape(format!(
                                "`{what}` level {label} entry ({u},{v}) is {other}, \
                                 expected 0 or 1"
                            )))
                        }
                    }
                }
            }
            out.insert(level, rel);
        }
        Ok(out)
    }

    /// Describes a preference model.
    pub fn from_preference_model(m: &PreferenceModel) -> ModelDocument {
        Self::from_flat(m.chain(), m.worlds(), m.relation(), m.valuation(), None)
    }

    /// Describes a general model.
    pub fn from_general_model(m: &GeneralModel) -> ModelDocument {
        Self::from_flat(m.chain(), m.worlds(), m.relation(), m.valuation(), None)
    }

    /// Describes a search result, naming the refuting world.
    pub fn from_any_model(m: &AnyModel, witness: Option<usize>) -> ModelDocument {
        let witness_world = witness.map(|w| m.worlds()[w].clone());
        let (chain, worlds, relation, valuation) = match m {
            AnyModel::Preference(pm) => {
                (pm.chain(), pm.worlds(), pm.relation(), pm.valuation())
            }
            AnyModel::General(gm) => {
                (gm.chain(), gm.worlds(), gm.relation(), gm.valuation())
            }
        };
        Self::from_flat(chain, worlds, relation, valuation, witness_world)
    }

    /// Describes a layered model.
    pub fn from_layered_model(lm: &LayeredModel) -> ModelDocument {
        let chain = lm.chain();
        let to_bits = |family: &BTreeMap<Element, CrispRelation>| {
            family
                .iter()
                .map(|(&level, rel)| {
                    let bits = (0..lm.size())
                        .map(|u| {
                            (0..lm.size()).map(|v| u8::from(rel.get(u, v))).collect()
                        })
                        .collect();
                    (chain.label(level).to_string(), bits)
                })
                .collect::<BTreeMap<String, Vec<Vec<u8>>>>()
        };
        ModelDocument {
            lattice: LatticeDoc::describe(chain),
            worlds: lm.worlds().to_vec(),
            relation: None,
            weak: Some(to_bits(lm.weak())),
            strict: Some(to_bits(lm.strict())),
            valuation: emit_valuation(chain, lm.worlds(), lm.valuation()),
            witness_world: None,
        }
    }

    fn from_flat(
        chain: &Chain,
        worlds: &[String],
        relation: &FuzzyRelation,
        valuation: &BTreeMap<String, Vec<Element>>,
        witness_world: Option<String>,
    ) -> ModelDocument {
        let matrix = (0..worlds.len())
            .map(|u| {
                (0..worlds.len())
                    .map(|v| chain.label(relation.get(u, v)).to_string())
                    .collect()
            })
            .collect();
        ModelDocument {
            lattice: LatticeDoc::describe(chain),
            worlds: worlds.to_vec(),
            relation: Some(matrix),
            weak: None,
            strict: None,
            valuation: emit_valuation(chain, worlds, valuation),
            witness_world,
        }
    }
}

fn emit_valuation(
    chain: &Chain,
    worlds: &[String],
    valuation: &BTreeMap<String, Vec<Element>>,
) -> BTreeMap<String, BTreeMap<String, String>> {
    valuation
        .iter()
        .map(|(var, row)| {
            let by_world = worlds
                .iter()
                .zip(row)
                .map(|(w, &v)| (w.clone(), chain.label(v).to_string()))
                .collect();
            (var.clone(), by_world)
        })
        .collect()
}

/// Parses a document from JSON text.
pub fn read_document(text: &str) -> Result<ModelDocument, DocError> {
    Ok(serde_json::from_str(text)?)
}

/// Serialises a document as pretty-printed JSON with a trailing newline.
pub fn to_json(doc: &ModelDocument) -> String {
    let mut text =
        serde_json::to_string_pretty(doc).expect("documents serialise infallibly");
    text.push('\n');
    text
}

/// Parses a chain specification of the form `lukasiewicz:4` / `luk:4` /
/// `godel:3`, as taken by the CLI's `--chain` flag.
pub fn parse_chain_spec(spec: &str) -> Result<Chain, DocError> {
    let (kind, n) = spec.split_once(':').ok_or_else(|| {
        DocError::Shape(format!(
            "chain spec `{spec}` is not of the form `<family>:<size>`"
        ))
    })?;
    let n: usize = n.trim().parse().map_err(|_| {
        DocError::Shape(format!("chain size `{n}` is not a number"))
    })?;
    match kind.trim().to_lowercase().as_str() {
        "lukasiewicz" | "luk" => Ok(make_lukasiewicz(n)?),
        "godel" | "goedel" => Ok(make_godel(n)?),
        other => Err(DocError::Shape(format!(
            "unknown chain family `{other}` (expected `lukasiewicz` or `godel`)"
        ))),
    }
}
