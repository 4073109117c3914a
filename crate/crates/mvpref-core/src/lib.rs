//! Many-valued modal preference logic over finite MTL-chains.
//!
//! This crate provides the complete reasoning core:
//!
//! * [`lattice`] — finite MTL-chains (linearly ordered bounded integral
//!   commutative residuated lattices) with the Baaz–Monteiro Δ operation;
//! * [`syntax`] — the formula AST, a concrete grammar with parser and
//!   printer, and desugarings between the defined and primitive modalities;
//! * [`relation`] — chain-valued binary relations: preorder predicates,
//!   strict part, indifference, level cuts, reconstruction from cut
//!   families, and ∧-transitive closure;
//! * [`model`] — preference Kripke models (and unconstrained general
//!   models) together with the evaluation semantics for every connective
//!   and modality;
//! * [`transform`] — layered (cut-family) models and the bulldozing
//!   construction that replaces strict-layer cycles by strictly ordered
//!   copies;
//! * [`search`] — bounded-model enumeration, validity and local-consequence
//!   checking, and axiom-soundness suites;
//! * [`proofs`] — Hilbert-style proof objects and a checker for the axiom
//!   systems `M`, `CM`, `mM`, `mM-`, `P`, and the Δ-extension of `P`;
//! * [`prefs`] — proposition-level preference orderings (existential and
//!   universal-existential, weak and strict, optionally contextual) and
//!   their property suites.
//!
//! The crate is `no_std` (it requires `alloc`); all file formats and the
//! command-line front end live in the companion `mvpref` crate.

#![no_std]
#![forbid(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;

pub mod lattice;
pub mod model;
pub mod prefs;
pub mod proofs;
pub mod relation;
pub mod search;
pub mod syntax;
pub mod transform;

pub use lattice::{Chain, Element};
pub use model::{GeneralModel, PreferenceModel};
pub use proofs::SystemId;
pub use search::{AnyModel, ModelClass, SearchBounds, Verdict};
pub use syntax::Formula;
pub use transform::LayeredModel;
