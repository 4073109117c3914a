//! Hilbert-style proof objects and a checker for the six axiom systems.
//!
//! The systems, over a fixed chain `B` with co-atom `k`:
//!
//! * `M` — the minimal system for the ungraded `box`: propositional
//!   tautologies, `□1̄`, `MD: (□φ ∧ □ψ) → □(φ ∧ ψ)`,
//!   `Ax_b: □(b̄ → φ) ↔ (b̄ → □φ)` for every `b`, with modus ponens and the
//!   monotonicity rule (from `φ → ψ` derive `□φ → □ψ`).
//! * `CM` — `M` plus `C: □(k̄ ∨ φ) → (k̄ ∨ □φ)` and, as an equivalent
//!   presentation, `K: □(φ→ψ) → (□φ → □ψ)` with the necessitation rule.
//! * `mM` — for the graded boxes `box(b)`: the `CM` axioms per level,
//!   nestedness `□_a φ → □_b φ` (`a ≤ b`), `T_a: □_a φ → φ`,
//!   `4_{a,b}: □_{a∧b} φ → □_a □_b φ`, `B_0: φ → □_0 ◇_0 φ`, with modus
//!   ponens and graded necessitation.
//! * `mM⁻` — `mM` restricted to positive levels: no `T`, nothing
//!   mentioning level `0`.
//! * `P` — `mM` for the graded boxes plus the `mM⁻` schemas transplanted
//!   to the strict boxes `sbox(b)`, inclusion `□_b φ → □^<_b φ`, and the
//!   interaction axioms (`b ≤ a`, both positive unless noted):
//!   `I1: □^<_b φ → □_a □^<_b φ`, `I2: □^<_b φ → □^<_b □_a φ`, and
//!   `I3: □^<_b φ ∧ (ψ → ā) → □_b (φ ∨ (□_b ψ → ā))` for positive `b` and
//!   arbitrary `a`.
//! * `PΔ` — `P` plus `Δ□_b φ → □_b Δφ` and `Δ□^<_b φ → □^<_b Δφ`; the
//!   `Δ` connective is admitted in formulas only here.
//!
//! In place of an axiomatic propositional basis, the checker verifies
//! `taut` lines semantically: modal subformulas are abstracted as fresh
//! variables and the result is evaluated under every assignment into the
//! chain — sound, complete, and decidable at this scale.  Necessitation
//! and monotonicity apply only to lines whose derivations use no premise,
//! matching the local-consequence reading of the systems.
//!
//! Proof files are line-oriented: `n. <formula> ; <justification>` with
//! justifications `premise k`, `ax <schema-id> [params]` (parameters may
//! be omitted and are then inferred), `taut`, `mp i j` (line `i` the
//! antecedent, line `j` the implication), `nec [level] i`, and `mon i`.
//! Lines starting with `#` and blank lines are skipped.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::lattice::{Chain, Element};
use crate::syntax::Formula;

/// The six checkable axiom systems.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SystemId {
    /// Minimal ungraded system (monotonicity rule).
    M,
    /// Ungraded system with axiom C and the K/necessitation presentation.
    Cm,
    /// Graded boxes over every level.
    Mm,
    /// Graded boxes over positive levels, without reflexivity.
    MmMinusPlus,
    /// Graded plus strict boxes with interaction axioms.
    P,
    /// `P` with the Δ interaction schemas.
    PDelta,
}

impl SystemId {
    /// All systems, in presentation order.
    pub fn all() -> [SystemId; 6] {
        [
            SystemId::M,
            SystemId::Cm,
            SystemId::Mm,
            SystemId::MmMinusPlus,
            SystemId::P,
            SystemId::PDelta,
        ]
    }

    /// Canonical lowercase name.
    pub fn name(self) -> &'static str {
        match self {
            SystemId::M => "m",
            SystemId::Cm => "cm",
            SystemId::Mm => "mm",
            SystemId::MmMinusPlus => "mm-minus",
            SystemId::P => "p",
            SystemId::PDelta => "p-delta",
        }
    }

    /// Parses a system name, case-insensitively.
    pub fn from_name(name: &str) -> Option<SystemId> {
        let lower = name.to_lowercase();
        SystemId::all().into_iter().find(|s| s.name() == lower)
    }

    fn is_graded(self) -> bool {
        !matches!(self, SystemId::M | SystemId::Cm)
    }

    fn has_strict(self) -> bool {
        matches!(self, SystemId::P | SystemId::PDelta)
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Axiom schemas across all systems.  Shared spellings (`box1`, `md`,
/// `axb`, `c`, `k`) resolve to the ungraded schema in `M`/`CM` and to the
/// graded one elsewhere.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemaId {
    /// `□1̄` (ungraded).
    Box1,
    /// `MD: (□φ ∧ □ψ) → □(φ ∧ ψ)` (ungraded).
    Md,
    /// `Ax_b: □(b̄→φ) ↔ (b̄→□φ)` (ungraded; one element parameter).
    AxB,
    /// `C: □(k̄∨φ) → (k̄∨□φ)`, `k` the co-atom (ungraded).
    C,
    /// `K: □(φ→ψ) → (□φ→□ψ)` (ungraded).
    K,
    /// `□_b 1̄`.
    GBox1,
    /// `MD` at level `b`.
    GMd,
    /// `Ax` at level `b` with constant `c̄`.
    GAxB,
    /// `C` at level `b` (co-atom fixed by the chain).
    GC,
    /// `K` at level `b`.
    GK,
    /// Nestedness `□_a φ → □_b φ`, `a ≤ b`.
    Nest,
    /// Reflexivity `T_a: □_a φ → φ`.
    T,
    /// Transitivity `4_{a,b}: □_{a∧b} φ → □_a □_b φ`.
    Four,
    /// Symmetry at the bottom level `B_0: φ → □_0 ◇_0 φ`.
    B0,
    /// `□^<_b 1̄`.
    SBox1,
    /// `MD` for the strict box at level `b`.
    SMd,
    /// `Ax` for the strict box at level `b` with constant `c̄`.
    SAxB,
    /// `C` for the strict box at level `b`.
    SC,
    /// `K` for the strict box at level `b`.
    SK,
    /// Strict nestedness `□^<_a φ → □^<_b φ`, `0 < a ≤ b`.
    SNest,
    /// Strict transitivity `□^<_{a∧b} φ → □^<_a □^<_b φ`.
    SFour,
    /// Inclusion `□_b φ → □^<_b φ`.
    Inc,
    /// `I1: □^<_b φ → □_a □^<_b φ`, `b ≤ a`.
    I1,
    /// `I2: □^<_b φ → □^<_b □_a φ`, `b ≤ a`.
    I2,
    /// `I3: □^<_b φ ∧ (ψ → ā) → □_b (φ ∨ (□_b ψ → ā))`.
    I3,
    /// `Δ□_b φ → □_b Δφ`.
    DBox,
    /// `Δ□^<_b φ → □^<_b Δφ`.
    DSBox,
}

impl SchemaId {
    /// The spelling used in proof files.
    pub fn id_str(self) -> &'static str {
        match self {
            SchemaId::Box1 | SchemaId::GBox1 => "box1",
            SchemaId::Md | SchemaId::GMd => "md",
            SchemaId::AxB | SchemaId::GAxB => "axb",
            SchemaId::C | SchemaId::GC => "c",
            SchemaId::K | SchemaId::GK => "k",
            SchemaId::Nest => "nest",
            SchemaId::T => "t",
            SchemaId::Four => "four",
            SchemaId::B0 => "b0",
            SchemaId::SBox1 => "sbox1",
            SchemaId::SMd => "smd",
            SchemaId::SAxB => "saxb",
            SchemaId::SC => "sc",
            SchemaId::SK => "sk",
            SchemaId::SNest => "snest",
            SchemaId::SFour => "sfour",
            SchemaId::Inc => "inc",
            SchemaId::I1 => "i1",
            SchemaId::I2 => "i2",
            SchemaId::I3 => "i3",
            SchemaId::DBox => "dbox",
            SchemaId::DSBox => "dsbox",
        }
    }

    /// Resolves a proof-file spelling for the given system.  Family
    /// resolution (ungraded versus graded) follows the system; membership
    /// is checked separately so a known-but-foreign schema is rejected at
    /// its proof line rather than at parse time.
    pub fn from_id(id: &str, system: SystemId) -> Option<SchemaId> {
        let graded = system.is_graded();
        Some(match id {
            "box1" => if graded { SchemaId::GBox1 } else { SchemaId::Box1 },
            "md" => if graded { SchemaId::GMd } else { SchemaId::Md },
            "axb" => if graded { SchemaId::GAxB } else { SchemaId::AxB },
            "c" => if graded { SchemaId::GC } else { SchemaId::C },
            "k" => if graded { SchemaId::GK } else { SchemaId::K },
            "nest" => SchemaId::Nest,
            "t" => SchemaId::T,
            "four" => SchemaId::Four,
            "b0" => SchemaId::B0,
            "sbox1" => SchemaId::SBox1,
            "smd" => SchemaId::SMd,
            "saxb" => SchemaId::SAxB,
            "sc" => SchemaId::SC,
            "sk" => SchemaId::SK,
            "snest" => SchemaId::SNest,
            "sfour" => SchemaId::SFour,
            "inc" => SchemaId::Inc,
            "i1" => SchemaId::I1,
            "i2" => SchemaId::I2,
            "i3" => SchemaId::I3,
            "dbox" => SchemaId::DBox,
            "dsbox" => SchemaId::DSBox,
            _ => return None,
        })
    }

    /// Number of lattice-element parameters.
    pub fn param_arity(self) -> usize {
        match self {
            SchemaId::Box1 | SchemaId::Md | SchemaId::C | SchemaId::K | SchemaId::B0 => 0,
            SchemaId::AxB
            | SchemaId::GBox1
            | SchemaId::GMd
            | SchemaId::GC
            | SchemaId::GK
            | SchemaId::T
            | SchemaId::SBox1
            | SchemaId::SMd
            | SchemaId::SC
            | SchemaId::SK
            | SchemaId::Inc
            | SchemaId::DBox
            | SchemaId::DSBox => 1,
            SchemaId::GAxB
            | SchemaId::Nest
            | SchemaId::Four
            | SchemaId::SAxB
            | SchemaId::SNest
            | SchemaId::SFour
            | SchemaId::I1
            | SchemaId::I2
            | SchemaId::I3 => 2,
        }
    }

    /// Number of formula metavariables in the template.
    pub fn metavar_count(self) -> usize {
        match self {
            SchemaId::Box1 | SchemaId::GBox1 | SchemaId::SBox1 => 0,
            SchemaId::Md
            | SchemaId::K
            | SchemaId::GMd
            | SchemaId::GK
            | SchemaId::SMd
            | SchemaId::SK
            | SchemaId::I3 => 2,
            _ => 1,
        }
    }

    /// Is the schema part of the system's catalog?
    pub fn in_system(self, system: SystemId) -> bool {
        use SchemaId as S;
        use SystemId::*;
        match self {
            S::Box1 | S::Md | S::AxB => matches!(system, M | Cm),
            S::C | S::K => system == Cm,
            S::GBox1 | S::GMd | S::GAxB | S::GC | S::GK | S::Nest | S::Four => {
                system.is_graded()
            }
            S::T | S::B0 => matches!(system, Mm | P | PDelta),
            S::SBox1 | S::SMd | S::SAxB | S::SC | S::SK | S::SNest | S::SFour | S::Inc
            | S::I1 | S::I2 | S::I3 => system.has_strict(),
            S::DBox | S::DSBox => system == PDelta,
        }
    }

    /// Per-position parameter candidates, respecting the system's level
    /// restrictions (positive levels only in `mM⁻`, strict levels always
    /// positive, constants unrestricted).
    fn param_ranges(self, chain: &Chain, system: SystemId) -> Vec<Vec<Element>> {
        let all: Vec<Element> = chain.elements().collect();
        let pos: Vec<Element> = chain.positive_elements().collect();
        let weak = if system == SystemId::MmMinusPlus { pos.clone() } else { all.clone() };
        use SchemaId as S;
        match self {
            S::Box1 | S::Md | S::C | S::K | S::B0 => vec![],
            S::AxB => vec![all],
            S::GBox1 | S::GMd | S::GC | S::GK | S::T | S::DBox => vec![weak],
            S::GAxB => vec![weak, all],
            S::Nest | S::Four => vec![weak.clone(), weak],
            S::SBox1 | S::SMd | S::SC | S::SK | S::Inc | S::DSBox => vec![pos],
            S::SAxB => vec![pos, all],
            S::SNest | S::SFour => vec![pos.clone(), pos],
            S::I1 | S::I2 => vec![pos.clone(), pos],
            S::I3 => vec![pos, all],
        }
    }

    /// Side condition on a full parameter tuple.
    fn side_condition(self, params: &[Element]) -> bool {
        match self {
            SchemaId::Nest | SchemaId::SNest => params[0] <= params[1],
            // I1/I2 take the strict level first: b ≤ a.
            SchemaId::I1 | SchemaId::I2 => params[0] <= params[1],
            _ => true,
        }
    }

    /// All admissible parameter tuples for the schema within a system.
    pub fn admissible_params(self, chain: &Chain, system: SystemId) -> Vec<Vec<Element>> {
        let ranges = self.param_ranges(chain, system);
        let mut tuples: Vec<Vec<Element>> = vec![Vec::new()];
        for range in &ranges {
            let mut next = Vec::with_capacity(tuples.len() * range.len());
            for t in &tuples {
                for &e in range {
                    let mut t2 = t.clone();
                    t2.push(e);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        tuples.retain(|t| self.side_condition(t));
        tuples
    }

    /// Checks a caller-supplied tuple (arity, ranges, side condition).
    pub fn params_admissible(self, params: &[Element], chain: &Chain, system: SystemId) -> bool {
        let ranges = self.param_ranges(chain, system);
        params.len() == ranges.len()
            && params.iter().zip(&ranges).all(|(p, range)| range.contains(p))
            && self.side_condition(params)
    }

    /// Instantiates the schema template with concrete parameters; formula
    /// metavariables appear as the variables `?1` and `?2`.
    pub fn template(self, params: &[Element], chain: &Chain) -> Formula {
        let phi = || Formula::var("?1");
        let psi = || Formula::var("?2");
        let top = Formula::constant(chain.top());
        let coatom = Formula::constant(chain.coatom());
        let bot = chain.bottom();
        use SchemaId as S;
        match self {
            S::Box1 => top.fuzzy_box(),
            S::Md => phi()
                .fuzzy_box()
                .and(psi().fuzzy_box())
                .imp(phi().and(psi()).fuzzy_box()),
            S::AxB => {
                let b = Formula::constant(params[0]);
                b.clone().imp(phi()).fuzzy_box().iff(b.imp(phi().fuzzy_box()))
            }
            S::C => coatom
                .clone()
                .or(phi())
                .fuzzy_box()
                .imp(coatom.or(phi().fuzzy_box())),
            S::K => phi()
                .imp(psi())
                .fuzzy_box()
                .imp(phi().fuzzy_box().imp(psi().fuzzy_box())),
            S::GBox1 => top.box_at(params[0]),
            S::GMd => {
                let b = params[0];
                phi().box_at(b).and(psi().box_at(b)).imp(phi().and(psi()).box_at(b))
            }
            S::GAxB => {
                let (b, c) = (params[0], Formula::constant(params[1]));
                c.clone().imp(phi()).box_at(b).iff(c.imp(phi().box_at(b)))
            }
            S::GC => {
                let b = params[0];
                coatom.clone().or(phi()).box_at(b).imp(coatom.or(phi().box_at(b)))
            }
            S::GK => {
                let b = params[0];
                phi().imp(psi()).box_at(b).imp(phi().box_at(b).imp(psi().box_at(b)))
            }
            S::Nest => phi().box_at(params[0]).imp(phi().box_at(params[1])),
            S::T => phi().box_at(params[0]).imp(phi()),
            S::Four => {
                let (a, b) = (params[0], params[1]);
                let meet = if a <= b { a } else { b };
                phi().box_at(meet).imp(phi().box_at(b).box_at(a))
            }
            S::B0 => phi().imp(phi().dia_at(bot).box_at(bot)),
            S::SBox1 => top.sbox_at(params[0]),
            S::SMd => {
                let b = params[0];
                phi().sbox_at(b).and(psi().sbox_at(b)).imp(phi().and(psi()).sbox_at(b))
            }
            S::SAxB => {
                let (b, c) = (params[0], Formula::constant(params[1]));
                c.clone().imp(phi()).sbox_at(b).iff(c.imp(phi().sbox_at(b)))
            }
            S::SC => {
                let b = params[0];
                coatom.clone().or(phi()).sbox_at(b).imp(coatom.or(phi().sbox_at(b)))
            }
            S::SK => {
                let b = params[0];
                phi().imp(psi()).sbox_at(b).imp(phi().sbox_at(b).imp(psi().sbox_at(b)))
            }
            S::SNest => phi().sbox_at(params[0]).imp(phi().sbox_at(params[1])),
            S::SFour => {
                let (a, b) = (params[0], params[1]);
                let meet = if a <= b { a } else { b };
                phi().sbox_at(meet).imp(phi().sbox_at(b).sbox_at(a))
            }
            S::Inc => phi().box_at(params[0]).imp(phi().sbox_at(params[0])),
            S::I1 => {
                let (b, a) = (params[0], params[1]);
                phi().sbox_at(b).imp(phi().sbox_at(b).box_at(a))
            }
            S::I2 => {
                let (b, a) = (params[0], params[1]);
                phi().sbox_at(b).imp(phi().box_at(a).sbox_at(b))
            }
            S::I3 => {
                let (b, a) = (params[0], Formula::constant(params[1]));
                phi()
                    .sbox_at(b)
                    .and(psi().imp(a.clone()))
                    .imp(phi().or(psi().box_at(b).imp(a)).box_at(b))
            }
            S::DBox => {
                let b = params[0];
                phi().box_at(b).delta().imp(phi().delta().box_at(b))
            }
            S::DSBox => {
                let b = params[0];
                phi().sbox_at(b).delta().imp(phi().delta().sbox_at(b))
            }
        }
    }
}

/// One schema with its admissible parameter tuples within a system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaEntry {
    /// The schema.
    pub schema: SchemaId,
    /// Every admissible parameter tuple.
    pub params: Vec<Vec<Element>>,
}

/// The full catalog of a system over a chain: each member schema with all
/// of its admissible parameter tuples.
pub fn schema_catalog(system: SystemId, chain: &Chain) -> Vec<SchemaEntry> {
    use SchemaId as S;
    [
        S::Box1,
        S::Md,
        S::AxB,
        S::C,
        S::K,
        S::GBox1,
        S::GMd,
        S::GAxB,
        S::GC,
        S::GK,
        S::Nest,
        S::T,
        S::Four,
        S::B0,
        S::SBox1,
        S::SMd,
        S::SAxB,
        S::SC,
        S::SK,
        S::SNest,
        S::SFour,
        S::Inc,
        S::I1,
        S::I2,
        S::I3,
        S::DBox,
        S::DSBox,
    ]
    .into_iter()
    .filter(|s| s.in_system(system))
    .map(|schema| SchemaEntry { schema, params: schema.admissible_params(chain, system) })
    .collect()
}

/// Structural unification of a formula against a template whose
/// metavariables are variables named `?…`.  Returns the consistent
/// binding, or `None`.
pub fn unify<'a>(template: &Formula, f: &'a Formula) -> Option<BTreeMap<String, &'a Formula>> {
    let mut bindings = BTreeMap::new();
    if unify_into(template, f, &mut bindings) {
        Some(bindings)
    } else {
        None
    }
}

fn unify_into<'a>(
    template: &Formula,
    f: &'a Formula,
    bindings: &mut BTreeMap<String, &'a Formula>,
) -> bool {
    use Formula as F;
    if let F::Var(name) = template {
        if name.starts_with('?') {
            return match bindings.get(name) {
                Some(&bound) => bound == f,
                None => {
                    bindings.insert(name.clone(), f);
                    true
                }
            };
        }
    }
    match (template, f) {
        (F::Var(a), F::Var(b)) => a == b,
        (F::Const(a), F::Const(b)) => a == b,
        (F::Neg(a), F::Neg(b)) | (F::Delta(a), F::Delta(b)) => unify_into(a, b, bindings),
        (F::And(a1, a2), F::And(b1, b2))
        | (F::Or(a1, a2), F::Or(b1, b2))
        | (F::Prod(a1, a2), F::Prod(b1, b2))
        | (F::Imp(a1, a2), F::Imp(b1, b2)) => {
            unify_into(a1, b1, bindings) && unify_into(a2, b2, bindings)
        }
        (F::Box(a), F::Box(b))
        | (F::Dia(a), F::Dia(b))
        | (F::SBox(a), F::SBox(b))
        | (F::SDia(a), F::SDia(b))
        | (F::Univ(a), F::Univ(b))
        | (F::Exist(a), F::Exist(b)) => unify_into(a, b, bindings),
        (F::BoxCut(x, a), F::BoxCut(y, b))
        | (F::DiaCut(x, a), F::DiaCut(y, b))
        | (F::SBoxCut(x, a), F::SBoxCut(y, b))
        | (F::SDiaCut(x, a), F::SDiaCut(y, b)) => x == y && unify_into(a, b, bindings),
        _ => false,
    }
}

/// Tries to recognise `f` as an instance of `schema`.  With `params`
/// empty, every admissible tuple is tried; otherwise the given tuple must
/// itself be admissible.  Returns the resolved parameters.
pub fn match_schema(
    f: &Formula,
    schema: SchemaId,
    params: &[Element],
    chain: &Chain,
    system: SystemId,
) -> Option<Vec<Element>> {
    let candidates: Vec<Vec<Element>> = if params.is_empty() && schema.param_arity() > 0 {
        schema.admissible_params(chain, system)
    } else if schema.params_admissible(params, chain, system) {
        vec![params.to_vec()]
    } else {
        return None;
    };
    candidates
        .into_iter()
        .find(|tuple| unify(&schema.template(tuple, chain), f).is_some())
}

/// Justification of one proof line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    /// The `k`-th declared premise (1-based).
    Premise(usize),
    /// An axiom-schema instance; empty `params` requests inference.
    Axiom {
        /// The schema.
        schema: SchemaId,
        /// Supplied parameters (possibly empty).
        params: Vec<Element>,
    },
    /// A propositional tautology over the chain (modal subformulas
    /// abstracted).
    PropTaut,
    /// Modus ponens: `minor` is the line holding `φ`, `major` the line
    /// holding `φ → ψ`.
    Mp {
        /// Line number of the antecedent (1-based).
        minor: usize,
        /// Line number of the implication (1-based).
        major: usize,
    },
    /// Necessitation of an earlier premise-free line; `level` is required
    /// in graded systems (or inferred from the conclusion when omitted).
    Nec {
        /// The level, for graded systems.
        level: Option<Element>,
        /// The necessitated line (1-based).
        from: usize,
    },
    /// Monotonicity: from `φ → ψ` derive `□φ → □ψ` (ungraded systems).
    Mon {
        /// The implication line (1-based).
        from: usize,
    },
}

/// One proof line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    /// The asserted formula.
    pub formula: Formula,
    /// How the line is justified.
    pub justification: Justification,
}

/// A Hilbert-style proof: declared premises and justified lines.  The
/// conclusion is the final line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    /// Premises, in declaration order.
    pub premises: Vec<Formula>,
    /// The lines.
    pub lines: Vec<ProofLine>,
}

impl Proof {
    /// The formula proved (last line), if any.
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }
}

/// Why a proof line was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RejectReason {
    /// A rule referenced a line that does not exist or is not earlier.
    BadReference {
        /// The offending reference.
        target: usize,
    },
    /// `premise k` with no such premise.
    PremiseIndex {
        /// The offending index.
        index: usize,
    },
    /// The line's formula differs from the cited premise.
    PremiseMismatch {
        /// The cited index.
        index: usize,
    },
    /// The schema does not belong to the system being checked.
    SchemaNotInSystem {
        /// Proof-file spelling of the schema.
        id: &'static str,
    },
    /// Parameters of the wrong arity, outside their ranges, or violating
    /// a side condition.
    InadmissibleParams,
    /// The formula is not an instance of the schema (under the given or
    /// any admissible parameters).
    NoMatch,
    /// The `taut` oracle found a falsifying assignment (variable name to
    /// element label, with modal subformulas abstracted as `m0`, `m1`, …).
    NotTautology {
        /// The falsifying assignment.
        assignment: Vec<(String, String)>,
    },
    /// Too many assignments for the tautology oracle.
    TautBudget {
        /// Assignments required.
        needed: u128,
        /// Allowed maximum.
        budget: u128,
    },
    /// The major line is not `minor → current`.
    MpMismatch,
    /// The conclusion is not a permitted box of the cited line, or the
    /// stated level disagrees with the conclusion.
    NecMismatch,
    /// Necessitation of a premise-dependent line.
    NecOnPremise {
        /// The cited line.
        target: usize,
    },
    /// The conclusion is not `□φ → □ψ` for the cited implication.
    MonMismatch,
    /// Monotonicity applied to a premise-dependent line.
    MonOnPremise {
        /// The cited line.
        target: usize,
    },
    /// The rule does not exist in the system being checked.
    RuleNotInSystem {
        /// Rule spelling.
        rule: &'static str,
    },
    /// The formula uses a connective or modality outside the system's
    /// language.
    LanguageViolation {
        /// Human-readable construct name.
        construct: &'static str,
    },
    /// A graded modality at a level the system excludes.
    LevelNotAllowed {
        /// Label of the level.
        level: String,
    },
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::BadReference { target } => {
                write!(f, "reference to line {target} is not an earlier line")
            }
            RejectReason::PremiseIndex { index } => {
                write!(f, "no premise numbered {index}")
            }
            RejectReason::PremiseMismatch { index } => {
                write!(f, "formula differs from premise {index}")
            }
            RejectReason::SchemaNotInSystem { id } => {
                write!(f, "schema `{id}` is not part of this system")
            }
            RejectReason::InadmissibleParams => {
                f.write_str("parameters are of the wrong arity, out of range, or violate a side condition")
            }
            RejectReason::NoMatch => {
                f.write_str("formula is not an instance of the schema")
            }
            RejectReason::NotTautology { assignment } => {
                f.write_str("not a tautology over the chain; falsified by")?;
                for (var, label) in assignment {
                    write!(f, " {var}={label}")?;
                }
                Ok(())
            }
            RejectReason::TautBudget { needed, budget } => {
                write!(f, "tautology check needs {needed} assignments (budget {budget})")
            }
            RejectReason::MpMismatch => {
                f.write_str("cited major line is not `minor -> this line`")
            }
            RejectReason::NecMismatch => {
                f.write_str("conclusion is not a permitted necessitation of the cited line")
            }
            RejectReason::NecOnPremise { target } => {
                write!(f, "necessitation of premise-dependent line {target}")
            }
            RejectReason::MonMismatch => {
                f.write_str("conclusion is not the monotone image of the cited implication")
            }
            RejectReason::MonOnPremise { target } => {
                write!(f, "monotonicity applied to premise-dependent line {target}")
            }
            RejectReason::RuleNotInSystem { rule } => {
                write!(f, "rule `{rule}` is not part of this system")
            }
            RejectReason::LanguageViolation { construct } => {
                write!(f, "{construct} is outside this system's language")
            }
            RejectReason::LevelNotAllowed { level } => {
                write!(f, "level {level} is excluded from this system")
            }
        }
    }
}

/// A rejected proof: the first failing line (1-based) and the reason.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    /// 1-based line index within the proof.
    pub line: usize,
    /// The reason.
    pub reason: RejectReason,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

impl core::error::Error for Rejection {}

/// Maximum assignments the tautology oracle will enumerate.
const TAUT_BUDGET: u128 = 2_000_000;

/// Checks whether `f`, with modal subformulas abstracted as fresh
/// variables, evaluates to `1` under every assignment into the chain.
/// Returns the falsifying assignment otherwise.
pub fn prop_taut(f: &Formula, chain: &Chain) -> Result<(), RejectReason> {
    let mut abstracted = BTreeMap::new();
    let skeleton = abstract_modal(f, &mut abstracted);
    let vars: Vec<String> = skeleton.variables().into_iter().collect();
    let n = chain.size() as u128;
    let needed = n.checked_pow(vars.len() as u32).unwrap_or(u128::MAX);
    if needed > TAUT_BUDGET {
        return Err(RejectReason::TautBudget { needed, budget: TAUT_BUDGET });
    }
    let mut assignment = vec![chain.bottom(); vars.len()];
    loop {
        let env: BTreeMap<&str, Element> =
            vars.iter().map(String::as_str).zip(assignment.iter().copied()).collect();
        if eval_prop(&skeleton, chain, &env) != chain.top() {
            return Err(RejectReason::NotTautology {
                assignment: vars
                    .iter()
                    .zip(&assignment)
                    .map(|(v, &e)| (v.clone(), chain.label(e).to_string()))
                    .collect(),
            });
        }
        // Odometer step.
        let mut pos = 0;
        loop {
            if pos == assignment.len() {
                return Ok(());
            }
            let next = assignment[pos].index() + 1;
            if next < chain.size() {
                assignment[pos] = chain.element_at(next).expect("in range");
                break;
            }
            assignment[pos] = chain.bottom();
            pos += 1;
        }
    }
}

/// Replaces every maximal modal subformula by a fresh variable `m0`,
/// `m1`, … (equal subformulas share a variable).
fn abstract_modal(f: &Formula, seen: &mut BTreeMap<Formula, String>) -> Formula {
    use Formula as F;
    if f.is_modal_node() {
        let next = seen.len();
        let name = seen.entry(f.clone()).or_insert_with(|| alloc::format!("m{next}"));
        return F::var(name);
    }
    match f {
        F::Var(_) | F::Const(_) => f.clone(),
        F::Neg(a) => abstract_modal(a, seen).neg(),
        F::Delta(a) => abstract_modal(a, seen).delta(),
        F::And(a, b) => abstract_modal(a, seen).and(abstract_modal(b, seen)),
        F::Or(a, b) => abstract_modal(a, seen).or(abstract_modal(b, seen)),
        F::Prod(a, b) => abstract_modal(a, seen).prod(abstract_modal(b, seen)),
        F::Imp(a, b) => abstract_modal(a, seen).imp(abstract_modal(b, seen)),
        _ => unreachable!("modal nodes handled above"),
    }
}

/// Evaluates a purely propositional formula under an assignment.
fn eval_prop(f: &Formula, chain: &Chain, env: &BTreeMap<&str, Element>) -> Element {
    use Formula as F;
    match f {
        F::Var(v) => env[v.as_str()],
        F::Const(b) => *b,
        F::Neg(a) => chain.neg(eval_prop(a, chain, env)),
        F::Delta(a) => chain.delta(eval_prop(a, chain, env)),
        F::And(a, b) => chain.meet(eval_prop(a, chain, env), eval_prop(b, chain, env)),
        F::Or(a, b) => chain.join(eval_prop(a, chain, env), eval_prop(b, chain, env)),
        F::Prod(a, b) => chain.mono(eval_prop(a, chain, env), eval_prop(b, chain, env)),
        F::Imp(a, b) => chain.residuum(eval_prop(a, chain, env), eval_prop(b, chain, env)),
        _ => unreachable!("modal nodes are abstracted before evaluation"),
    }
}

/// Verifies the formula fits the system's language: ungraded boxes only
/// in `M`/`CM`, graded boxes elsewhere (positive levels in `mM⁻`), strict
/// boxes only in `P`/`PΔ`, `Δ` only in `PΔ`, and no universal-modality
/// shorthands anywhere (write `box(0)`).
fn check_language(f: &Formula, system: SystemId, chain: &Chain) -> Result<(), RejectReason> {
    use Formula as F;
    let construct: &'static str = match f {
        F::Box(_) | F::Dia(_) if system.is_graded() => "ungraded modality",
        F::SBox(_) | F::SDia(_) => "fuzzy strict modality",
        F::Univ(_) | F::Exist(_) => "universal modality shorthand",
        F::BoxCut(..) | F::DiaCut(..) if !system.is_graded() => "graded modality",
        F::SBoxCut(..) | F::SDiaCut(..) if !system.has_strict() => "strict modality",
        F::Delta(_) if system != SystemId::PDelta => "delta connective",
        F::BoxCut(b, _) | F::DiaCut(b, _)
            if system == SystemId::MmMinusPlus && b.index() == 0 =>
        {
            return Err(RejectReason::LevelNotAllowed {
                level: chain.label(*b).to_string(),
            });
        }
        _ => {
            for child in f.children() {
                check_language(child, system, chain)?;
            }
            return Ok(());
        }
    };
    Err(RejectReason::LanguageViolation { construct })
}

/// Which rules a system admits.
fn rule_allowed(system: SystemId, rule: &'static str) -> bool {
    match rule {
        "mon" => matches!(system, SystemId::M | SystemId::Cm),
        "nec" => system != SystemId::M,
        _ => true,
    }
}

/// Checks a proof against a system.  Accepts, or reports the first
/// failing line with its reason.  Necessitation and monotonicity may only
/// cite lines whose derivations use no premise.
pub fn check_proof(proof: &Proof, system: SystemId, chain: &Chain) -> Result<(), Rejection> {
    let mut uses_premise: Vec<bool> = Vec::with_capacity(proof.lines.len());
    for (idx, line) in proof.lines.iter().enumerate() {
        let lineno = idx + 1;
        let fail = |reason| Err(Rejection { line: lineno, reason });
        if let Err(reason) = check_language(&line.formula, system, chain) {
            return fail(reason);
        }
        let earlier = |target: usize| -> Result<usize, Rejection> {
            if target == 0 || target > idx {
                Err(Rejection { line: lineno, reason: RejectReason::BadReference { target } })
            } else {
                Ok(target - 1)
            }
        };
        let mut depends = false;
        match &line.justification {
            Justification::Premise(k) => {
                if *k == 0 || *k > proof.premises.len() {
                    return fail(RejectReason::PremiseIndex { index: *k });
                }
                if proof.premises[*k - 1] != line.formula {
                    return fail(RejectReason::PremiseMismatch { index: *k });
                }
                depends = true;
            }
            Justification::Axiom { schema, params } => {
                if !schema.in_system(system) {
                    return fail(RejectReason::SchemaNotInSystem { id: schema.id_str() });
                }
                if !params.is_empty() && !schema.params_admissible(params, chain, system) {
                    return fail(RejectReason::InadmissibleParams);
                }
                if match_schema(&line.formula, *schema, params, chain, system).is_none() {
                    return fail(RejectReason::NoMatch);
                }
            }
            Justification::PropTaut => {
                if let Err(reason) = prop_taut(&line.formula, chain) {
                    return fail(reason);
                }
            }
            Justification::Mp { minor, major } => {
                let i = earlier(*minor)?;
                let j = earlier(*major)?;
                let expected =
                    proof.lines[i].formula.clone().imp(line.formula.clone());
                if proof.lines[j].formula != expected {
                    return fail(RejectReason::MpMismatch);
                }
                depends = uses_premise[i] || uses_premise[j];
            }
            Justification::Nec { level, from } => {
                if !rule_allowed(system, "nec") {
                    return fail(RejectReason::RuleNotInSystem { rule: "nec" });
                }
                let i = earlier(*from)?;
                if uses_premise[i] {
                    return fail(RejectReason::NecOnPremise { target: *from });
                }
                let body = &proof.lines[i].formula;
                let ok = match &line.formula {
                    Formula::Box(a) => {
                        !system.is_graded() && level.is_none() && a.as_ref() == body
                    }
                    Formula::BoxCut(b, a) => {
                        system.is_graded()
                            && level.map(|l| l == *b).unwrap_or(true)
                            && !(system == SystemId::MmMinusPlus && b.index() == 0)
                            && a.as_ref() == body
                    }
                    Formula::SBoxCut(b, a) => {
                        system.has_strict()
                            && level.map(|l| l == *b).unwrap_or(true)
                            && a.as_ref() == body
                    }
                    _ => false,
                };
                if !ok {
                    return fail(RejectReason::NecMismatch);
                }
            }
            Justification::Mon { from } => {
                if !rule_allowed(system, "mon") {
                    return fail(RejectReason::RuleNotInSystem { rule: "mon" });
                }
                let i = earlier(*from)?;
                if uses_premise[i] {
                    return fail(RejectReason::MonOnPremise { target: *from });
                }
                let ok = match (&proof.lines[i].formula, &line.formula) {
                    (Formula::Imp(a, b), Formula::Imp(ba, bb)) => {
                        ba.as_ref() == &a.as_ref().clone().fuzzy_box()
                            && bb.as_ref() == &b.as_ref().clone().fuzzy_box()
                    }
                    _ => false,
                };
                if !ok {
                    return fail(RejectReason::MonMismatch);
                }
            }
        }
        uses_premise.push(depends);
    }
    Ok(())
}

/// A proof-file parse failure: the source line (1-based) and a message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofParseError {
    /// 1-based source line number.
    pub line: usize,
    /// What went wrong.
    pub message: String,
}

impl fmt::Display for ProofParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "proof line {}: {}", self.line, self.message)
    }
}

impl core::error::Error for ProofParseError {}

/// Parses the line-oriented proof format; see the module documentation.
/// Premises are collected from `premise`-justified lines in order.
pub fn parse_proof_file(
    text: &str,
    chain: &Chain,
    system: SystemId,
) -> Result<Proof, ProofParseError> {
    let mut premises = Vec::new();
    let mut lines = Vec::new();
    for (source_idx, raw) in text.lines().enumerate() {
        let source_line = source_idx + 1;
        let err = |message: String| ProofParseError { line: source_line, message };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (number, rest) = trimmed
            .split_once('.')
            .ok_or_else(|| err("expected `n. <formula> ; <justification>`".to_string()))?;
        let number: usize = number
            .trim()
            .parse()
            .map_err(|_| err(alloc::format!("bad line number `{}`", number.trim())))?;
        if number != lines.len() + 1 {
            return Err(err(alloc::format!(
                "line numbered {number}, expected {}",
                lines.len() + 1
            )));
        }
        let (formula_text, just_text) = rest
            .rsplit_once(';')
            .ok_or_else(|| err("missing `; <justification>`".to_string()))?;
        let formula = crate::syntax::parse(formula_text.trim(), chain)
            .map_err(|e| err(alloc::format!("formula: {e}")))?;
        let words: Vec<&str> = just_text.split_whitespace().collect();
        let parse_ref = |w: &str| -> Result<usize, ProofParseError> {
            w.parse::<usize>().map_err(|_| err(alloc::format!("bad line reference `{w}`")))
        };
        let justification = match words.split_first() {
            Some((&"premise", args)) => {
                let k = match args {
                    [w] => parse_ref(w)?,
                    [] => premises.len() + 1,
                    _ => return Err(err("usage: premise [k]".to_string())),
                };
                if k != premises.len() + 1 {
                    return Err(err(alloc::format!(
                        "premise numbered {k}, expected {}",
                        premises.len() + 1
                    )));
                }
                premises.push(formula.clone());
                Justification::Premise(k)
            }
            Some((&"ax", args)) => {
                let (&id, rest) = args
                    .split_first()
                    .ok_or_else(|| err("usage: ax <schema-id> [params]".to_string()))?;
                let schema = SchemaId::from_id(id, system)
                    .ok_or_else(|| err(alloc::format!("unknown schema `{id}`")))?;
                let params = rest
                    .iter()
                    .map(|w| {
                        chain.element(w).map_err(|_| {
                            err(alloc::format!("`{w}` is not an element of the chain"))
                        })
                    })
                    .collect::<Result<Vec<Element>, _>>()?;
                Justification::Axiom { schema, params }
            }
            Some((&"taut", [])) => Justification::PropTaut,
            Some((&"mp", [i, j])) => {
                Justification::Mp { minor: parse_ref(i)?, major: parse_ref(j)? }
            }
            Some((&"nec", [i])) => Justification::Nec { level: None, from: parse_ref(i)? },
            Some((&"nec", [level, i])) => Justification::Nec {
                level: Some(chain.element(level).map_err(|_| {
                    err(alloc::format!("`{level}` is not an element of the chain"))
                })?),
                from: parse_ref(i)?,
            },
            Some((&"mon", [i])) => Justification::Mon { from: parse_ref(i)? },
            Some((w, _)) => return Err(err(alloc::format!("unknown justification `{w}`"))),
            None => return Err(err("missing justification".to_string())),
        };
        lines.push(ProofLine { formula, justification });
    }
    Ok(Proof { premises, lines })
}
