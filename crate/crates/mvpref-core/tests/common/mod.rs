//! Frozen expected values for the worked examples.
//!
//! Everything here is hand-derived from the definitions and written down
//! before the implementation; the suites in this directory compare computed
//! results against these constants with exact (label-level) equality.
//!
//! Two printed source values are provably inconsistent with the definitions
//! they illustrate and are frozen here in definition-derived form instead:
//! the strict-preference table has a zero diagonal (a strict part is
//! irreflexive by construction), `DIA_L[2]` is 0.8 (reflexivity forces
//! e(cf,◇l) ≥ e(cf,l) = 0.8), and `M_AE_F` is 0.6 (the meat-world minimum of
//! ◇f is min(0.8, 0.6)).

#![allow(dead_code)] // each integration test binary uses a subset

/// Worlds of the dinner-scenario model, in display order.
pub const WORLDS: [&str; 4] = ["bf", "bm", "cf", "cm"];

/// Weak preference matrix P over (bf, bm, cf, cm), row = source world.
pub const P: [[&str; 4]; 4] = [
    ["1", "0.5", "0.5", "0.5"],
    ["0.8", "1", "0.6", "0.8"],
    ["0.8", "0.5", "1", "0.7"],
    ["0.6", "0.5", "0.5", "1"],
];

/// Indifference P^≈(u,v) = P(u,v) ∧ P(v,u).
pub const P_INDIFF: [[&str; 4]; 4] = [
    ["1", "0.5", "0.5", "0.5"],
    ["0.5", "1", "0.5", "0.5"],
    ["0.5", "0.5", "1", "0.5"],
    ["0.5", "0.5", "0.5", "1"],
];

/// Strict part P^<(u,v): P(u,v) where P(u,v) > P(v,u), else 0.
pub const P_STRICT: [[&str; 4]; 4] = [
    ["0", "0", "0", "0"],
    ["0.8", "0", "0.6", "0.8"],
    ["0.8", "0", "0", "0.7"],
    ["0.6", "0", "0", "0"],
];

/// Crisp per-variable truth per world, order (bf, bm, cf, cm).
pub const VAL_C: [&str; 4] = ["0", "0", "1", "1"];
pub const VAL_B: [&str; 4] = ["1", "1", "0", "0"];
pub const VAL_F: [&str; 4] = ["1", "0", "1", "0"];
pub const VAL_M: [&str; 4] = ["0", "1", "0", "1"];

/// l := (#0.8 & f) | (#0.2 & m) — light meal attractiveness.
pub const FORMULA_L: &str = "(#0.8 & f) | (#0.2 & m)";
/// h := (#0.7 & m) | (#0.3 & f) — hearty meal attractiveness.
pub const FORMULA_H: &str = "(#0.7 & m) | (#0.3 & f)";

pub const EVAL_L: [&str; 4] = ["0.8", "0.2", "0.8", "0.2"];
pub const EVAL_H: [&str; 4] = ["0.3", "0.7", "0.3", "0.7"];

/// ◇l per world (third entry definition-derived; see module docs).
pub const DIA_L: [&str; 4] = ["0.8", "0.6", "0.8", "0.4"];
pub const DIA_H: [&str; 4] = ["0.3", "0.7", "0.4", "0.7"];

/// ◇(b∧h) and ◇(b∧l) per world.
pub const DIA_B_AND_H: [&str; 4] = ["0.3", "0.7", "0.2", "0.2"];
pub const DIA_B_AND_L: [&str; 4] = ["0.8", "0.6", "0.6", "0.4"];

/// Global preference degrees between crisp alternatives.
pub const F_AE_M: &str = "0.5"; // [f ≤∀∃ m]
pub const M_AE_F: &str = "0.6"; // [m ≤∀∃ f] (definition-derived; see module docs)
pub const F_EE_M: &str = "0.7"; // [f ≤∃∃ m]
pub const M_EE_F: &str = "0.8"; // [m ≤∃∃ f]
pub const BM_AE_BF: &str = "0.8"; // [b∧m ≤∀∃ b∧f]

/// Graded preference degrees between the fuzzy alternatives l and h.
pub const L_AE_H: &str = "0.5"; // [l ≤∀∃ h]
pub const H_AE_L: &str = "0.7"; // [h ≤∀∃ l]

/// Contextualised to b (beach): arguments become b∧l and b∧h.
pub const CTX_B_L_AE_H: &str = "0.5";
pub const CTX_B_H_AE_L: &str = "0.9";

/// Łukasiewicz-11 spot checks: (lhs, rhs, expected) per operation.
pub const LUK11_MONO: (&str, &str, &str) = ("0.8", "0.8", "0.6");
pub const LUK11_RESID: (&str, &str, &str) = ("0.7", "0.4", "0.7");
pub const LUK11_NEG: (&str, &str) = ("0.3", "0.7");
pub const LUK11_DELTA: (&str, &str) = ("0.9", "0");

/// Three-element chain {0, b, 1} with ⊙ = min: cut-versus-strict-part order
/// of operations matters. P(x,x) = P(y,y) = P(y,x) = 1, P(x,y) = b.
/// Cutting at b then taking the strict part yields the empty relation;
/// taking the strict part then cutting at b yields exactly {(y,x)}.
pub const SMALL_WORLDS: [&str; 2] = ["x", "y"];
pub const SMALL_P: [[&str; 2]; 2] = [["1", "b"], ["1", "1"]];
pub const SMALL_CUT_B_STRICT: [(usize, usize); 0] = [];
pub const SMALL_STRICT_CUT_B: [(usize, usize); 1] = [(1, 0)];

// ---------------------------------------------------------------------------
// Builders shared by the golden suites.
// ---------------------------------------------------------------------------

use std::collections::BTreeMap;

use mvpref_core::lattice::{make_custom, make_lukasiewicz};
use mvpref_core::relation::FuzzyRelation;
use mvpref_core::syntax;
use mvpref_core::{Chain, Element, Formula, PreferenceModel};

/// The 11-element Łukasiewicz chain 0, 0.1, …, 1 that all dinner-scenario
/// degrees live in.
pub fn chain11() -> Chain {
    make_lukasiewicz(11).expect("Łukasiewicz chain of size 11")
}

pub fn el(chain: &Chain, label: &str) -> Element {
    chain.element(label).unwrap_or_else(|_| panic!("element {label}"))
}

pub fn row(chain: &Chain, labels: &[&str]) -> Vec<Element> {
    labels.iter().map(|l| el(chain, l)).collect()
}

pub fn labels(chain: &Chain, values: &[Element]) -> Vec<String> {
    values.iter().map(|&v| chain.label(v).to_string()).collect()
}

pub fn relation_labels(chain: &Chain, rel: &FuzzyRelation) -> Vec<Vec<String>> {
    (0..rel.size())
        .map(|u| (0..rel.size()).map(|v| chain.label(rel.get(u, v)).to_string()).collect())
        .collect()
}

pub fn parse(chain: &Chain, text: &str) -> Formula {
    syntax::parse(text, chain).unwrap_or_else(|e| panic!("parse {text:?}: {e}"))
}

pub fn travel_relation(chain: &Chain) -> FuzzyRelation {
    FuzzyRelation::from_fn(WORLDS.len(), |u, v| el(chain, P[u][v]))
}

/// The four-world dinner-scenario model over `chain11()` with the crisp
/// variables c, b, f, m.
pub fn travel_model() -> PreferenceModel {
    let chain = chain11();
    let relation = travel_relation(&chain);
    let mut valuation = BTreeMap::new();
    for (name, vals) in [("c", VAL_C), ("b", VAL_B), ("f", VAL_F), ("m", VAL_M)] {
        valuation.insert(name.to_string(), row(&chain, &vals));
    }
    let worlds = WORLDS.iter().map(|w| w.to_string()).collect();
    PreferenceModel::new(chain, worlds, relation, valuation).expect("dinner model is a preorder")
}

/// The three-element chain {0, b, 1} with ⊙ = min.
pub fn small_chain() -> Chain {
    let labels: Vec<String> = ["0", "b", "1"].iter().map(|s| s.to_string()).collect();
    let mono = vec![
        vec!["0".to_string(), "0".to_string(), "0".to_string()],
        vec!["0".to_string(), "b".to_string(), "b".to_string()],
        vec!["0".to_string(), "b".to_string(), "1".to_string()],
    ];
    make_custom(labels, &mono).expect("three-element min chain")
}

pub fn small_relation(chain: &Chain) -> FuzzyRelation {
    FuzzyRelation::from_fn(SMALL_WORLDS.len(), |u, v| el(chain, SMALL_P[u][v]))
}
