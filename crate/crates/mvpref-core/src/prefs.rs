//! Preference statements between formulas, and their basic laws.
//!
//! A preference statement compares two formulas over a preference model by
//! quantifying over pairs of worlds.  Two quantifier patterns are
//! expressible with the global and accessibility modalities:
//!
//! * `∃∃` — some world satisfying the first formula sees, to some degree,
//!   a world satisfying the second: `E (φ & dia ψ)` (strict: `sdia`).
//! * `∀∃` — every world satisfying the first formula sees one satisfying
//!   the second: `A (φ -> dia ψ)` (strict: `sdia`).
//!
//! The patterns `∃∀` and `∀∀` would need a modality quantifying over
//! *non*-successors and are rejected as inexpressible.
//!
//! An optional context formula `δ` restricts both sides by conjunction:
//! the statement compares `φ & δ` with `ψ & δ`.
//!
//! Because the outermost operator is a global modality, a preference
//! statement takes the same value at every world of a model.
//!
//! [`lemma71_suite`] checks the expected laws by bounded search: weak
//! reflexivity, weak and strict transitivity, the monotonicity bridge,
//! and a graded modus ponens, with strict reflexivity expected to fail
//! (a single reflexive world has an empty strict part).

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::lattice::Element;
use crate::model::{ModelError, PreferenceModel};
use crate::search::{
    consequence_bounded, is_valid_bounded, ModelClass, SearchBounds, SearchError, Verdict,
};
use crate::syntax::Formula;

/// Quantifier pattern of a preference statement.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PrefQuantifier {
    /// `∃∃`: some witness on each side.
    ExistsExists,
    /// `∀∃`: every left witness sees a right witness.
    ForallExists,
}

impl PrefQuantifier {
    /// Canonical two-letter name (`ee`, `ae`).
    pub fn name(self) -> &'static str {
        match self {
            PrefQuantifier::ExistsExists => "ee",
            PrefQuantifier::ForallExists => "ae",
        }
    }
}

/// Errors from [`parse_kind`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrefError {
    /// A meaningful quantifier pattern the modal language cannot express.
    NotExpressible {
        /// The requested pattern.
        kind: String,
    },
    /// Not a quantifier pattern at all.
    UnknownKind {
        /// The offending text.
        kind: String,
    },
}

impl fmt::Display for PrefError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrefError::NotExpressible { kind } => write!(
                f,
                "not-expressible: `{kind}` quantifies universally over successors, which \
                 the modal language cannot state"
            ),
            PrefError::UnknownKind { kind } => {
                write!(f, "unknown preference kind `{kind}` (use `ee` or `ae`)")
            }
        }
    }
}

impl core::error::Error for PrefError {}

/// Parses a quantifier pattern: `ee` or `ae` (case-insensitive).  The
/// patterns `ea` and `aa` are recognised but inexpressible.
pub fn parse_kind(kind: &str) -> Result<PrefQuantifier, PrefError> {
    match kind.to_lowercase().as_str() {
        "ee" => Ok(PrefQuantifier::ExistsExists),
        "ae" => Ok(PrefQuantifier::ForallExists),
        "ea" | "aa" => Err(PrefError::NotExpressible { kind: kind.to_string() }),
        _ => Err(PrefError::UnknownKind { kind: kind.to_string() }),
    }
}

/// Builds the formula expressing that `psi` is preferred to `phi` under
/// the given quantifier pattern, strictness, and optional context.
pub fn preference_statement(
    quantifier: PrefQuantifier,
    strict: bool,
    phi: &Formula,
    psi: &Formula,
    context: Option<&Formula>,
) -> Formula {
    let (phi, psi) = match context {
        Some(delta) => (phi.clone().and(delta.clone()), psi.clone().and(delta.clone())),
        None => (phi.clone(), psi.clone()),
    };
    let sees = if strict { psi.fuzzy_sdia() } else { psi.fuzzy_dia() };
    match quantifier {
        PrefQuantifier::ExistsExists => phi.and(sees).exist(),
        PrefQuantifier::ForallExists => phi.imp(sees).univ(),
    }
}

/// Evaluates a preference statement on a model.  The result is
/// world-independent, so the value at the first world is returned.
pub fn eval_preference(
    model: &PreferenceModel,
    quantifier: PrefQuantifier,
    strict: bool,
    phi: &Formula,
    psi: &Formula,
    context: Option<&Formula>,
) -> Result<Element, ModelError> {
    let statement = preference_statement(quantifier, strict, phi, psi, context);
    model.eval(0, &statement)
}

/// One law checked by [`lemma71_suite`].
#[derive(Clone, Debug)]
pub struct PrefCheck {
    /// The law's name.
    pub label: String,
    /// Whether the law is expected to be valid.
    pub expected_valid: bool,
    /// The search outcome.
    pub verdict: Verdict,
}

impl PrefCheck {
    /// True when the verdict matches the expectation.
    pub fn as_expected(&self) -> bool {
        self.verdict.is_valid() == self.expected_valid
    }
}

/// Checks the basic laws of preference statements over preference models
/// within the bounds (the model class is forced to preference models):
///
/// * `refl-weak` — `A (p -> dia p)` is valid: reflexivity gives every
///   world itself as a successor.
/// * `refl-strict` — `A (p -> sdia p)` fails: the strict part of a
///   reflexive relation gives a single world no successor at all.
/// * `trans-weak` / `trans-strict` — chaining of `∀∃` statements, via
///   ∧-transitivity of the relation and of its strict part.
/// * `mono-bridge` — `A (p -> q) -> A (dia p -> dia q)`.
/// * `graded-mp` — the consequence `{ #c -> F1, #1 -> (F1 -> F2) } ⊨
///   #c -> F2` with preference statements for `F1`, `F2` and the co-atom
///   for `c`.
pub fn lemma71_suite(bounds: &SearchBounds) -> Result<Vec<PrefCheck>, SearchError> {
    let mut inner = bounds.clone();
    inner.model_class = ModelClass::Preference;
    inner.variables = Vec::new();
    let chain = &inner.chain;
    let p = || Formula::var("p");
    let q = || Formula::var("q");
    let r = || Formula::var("r");
    let ae = |a: Formula, b: Formula, strict: bool| {
        preference_statement(PrefQuantifier::ForallExists, strict, &a, &b, None)
    };

    let mut checks = Vec::new();
    let mut push = |label: &str, expected_valid: bool, verdict: Verdict| {
        checks.push(PrefCheck { label: label.to_string(), expected_valid, verdict });
    };

    push("refl-weak", true, is_valid_bounded(&ae(p(), p(), false), &inner)?);
    push("refl-strict", false, is_valid_bounded(&ae(p(), p(), true), &inner)?);
    for (label, strict) in [("trans-weak", false), ("trans-strict", true)] {
        let chained = ae(p(), q(), strict)
            .prod(ae(q(), r(), strict))
            .imp(ae(p(), r(), strict));
        push(label, true, is_valid_bounded(&chained, &inner)?);
    }
    let bridge = p()
        .imp(q())
        .univ()
        .imp(p().fuzzy_dia().imp(q().fuzzy_dia()).univ());
    push("mono-bridge", true, is_valid_bounded(&bridge, &inner)?);

    let c = Formula::constant(chain.coatom());
    let one = Formula::constant(chain.top());
    let f1 = ae(p(), q(), false);
    let f2 = ae(p(), r(), false);
    let premises =
        vec![c.clone().imp(f1.clone()), one.imp(f1.imp(f2.clone()))];
    let conclusion = c.imp(f2);
    push(
        "graded-mp",
        true,
        consequence_bounded(&premises, &conclusion, &inner)?,
    );

    Ok(checks)
}
