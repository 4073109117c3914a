//! Formula syntax: AST, concrete grammar (parser and printer), and the
//! desugarings between defined and primitive modalities.
//!
//! Concrete grammar, loosest to tightest binding, with `->` associating to
//! the right and the other binary connectives to the left:
//!
//! ```text
//! formula := imp
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := prod ("&" prod)*
//! prod    := unary ("*" unary)*
//! unary   := ("~" | "delta" | "A" | "E"
//!            | "box" | "dia" | "sbox" | "sdia"
//!            | "box(" label ")" | "dia(" label ")"
//!            | "sbox(" label ")" | "sdia(" label ")") unary
//!          | atom
//! atom    := ident | "#" label | "(" formula ")"
//! ```
//!
//! Truth constants are written `#label` (e.g. `#0.5`); graded modalities
//! take the cut level in parentheses directly after the keyword
//! (e.g. `box(0.8) p`).  The keywords `box`, `dia`, `sbox`, `sdia`,
//! `delta`, `A`, and `E` are reserved and cannot be used as variables.
//! After `box(` and friends, a single label followed by `)` is read as a
//! grade; anything else re-parses as a parenthesised argument formula, so
//! the grade reading wins on ambiguity.
//!
//! Strict cut modalities are undefined at level `0` (the strict part of a
//! `0`-cut would compare against the bottom of the chain), so `sbox(0)` and
//! `sdia(0)` are rejected while parsing with a `zero-strict-cut` error.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::lattice::{Chain, Element};

/// A modal formula over a fixed chain.
///
/// Truth constants store chain [`Element`]s, so a formula is tied to the
/// chain it was built over.  `Box`/`Dia` are the fuzzy modalities weighted
/// by the full relation, `SBox`/`SDia` their strict-part counterparts;
/// `BoxCut(b, _)`/`DiaCut(b, _)` quantify over the crisp `b`-cut of the
/// relation and `SBoxCut`/`SDiaCut` over its strict `b`-cut.  `Univ`/`Exist`
/// quantify over all worlds.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    /// Propositional variable.
    Var(String),
    /// Truth constant.
    Const(Element),
    /// Negation `~φ`, an abbreviation for `φ -> #0` with its own node.
    Neg(Box<Formula>),
    /// Baaz–Monteiro `delta φ`.
    Delta(Box<Formula>),
    /// Lattice conjunction `φ & ψ`.
    And(Box<Formula>, Box<Formula>),
    /// Lattice disjunction `φ | ψ`.
    Or(Box<Formula>, Box<Formula>),
    /// Monoidal conjunction `φ * ψ`.
    Prod(Box<Formula>, Box<Formula>),
    /// Residuated implication `φ -> ψ`.
    Imp(Box<Formula>, Box<Formula>),
    /// Fuzzy box `box φ`.
    Box(Box<Formula>),
    /// Fuzzy diamond `dia φ`.
    Dia(Box<Formula>),
    /// Strict fuzzy box `sbox φ` (over the strict part of the relation).
    SBox(Box<Formula>),
    /// Strict fuzzy diamond `sdia φ`.
    SDia(Box<Formula>),
    /// Graded box `box(b) φ` over the `b`-cut.
    BoxCut(Element, Box<Formula>),
    /// Graded diamond `dia(b) φ` over the `b`-cut.
    DiaCut(Element, Box<Formula>),
    /// Graded strict box `sbox(b) φ` over the strict `b`-cut (`b > 0`).
    SBoxCut(Element, Box<Formula>),
    /// Graded strict diamond `sdia(b) φ` (`b > 0`).
    SDiaCut(Element, Box<Formula>),
    /// Universal modality `A φ` (all worlds).
    Univ(Box<Formula>),
    /// Existential modality `E φ` (some world).
    Exist(Box<Formula>),
}

impl Formula {
    /// A propositional variable.
    pub fn var(name: &str) -> Formula {
        Formula::Var(name.to_string())
    }

    /// A truth constant.
    pub fn constant(b: Element) -> Formula {
        Formula::Const(b)
    }

    /// `self & rhs`.
    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    /// `self | rhs`.
    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    /// `self * rhs`.
    pub fn prod(self, rhs: Formula) -> Formula {
        Formula::Prod(Box::new(self), Box::new(rhs))
    }

    /// `self -> rhs`.
    pub fn imp(self, rhs: Formula) -> Formula {
        Formula::Imp(Box::new(self), Box::new(rhs))
    }

    /// The biconditional abbreviation `(self -> rhs) * (rhs -> self)`.
    pub fn iff(self, rhs: Formula) -> Formula {
        self.clone().imp(rhs.clone()).prod(rhs.imp(self))
    }

    /// `~self`.
    pub fn neg(self) -> Formula {
        Formula::Neg(Box::new(self))
    }

    /// `delta self`.
    pub fn delta(self) -> Formula {
        Formula::Delta(Box::new(self))
    }

    /// The graded-equality abbreviation `delta ((self -> #b) * (#b -> self))`.
    pub fn approx(self, b: Element) -> Formula {
        self.iff(Formula::Const(b)).delta()
    }

    /// `box self`.
    pub fn fuzzy_box(self) -> Formula {
        Formula::Box(Box::new(self))
    }

    /// `dia self`.
    pub fn fuzzy_dia(self) -> Formula {
        Formula::Dia(Box::new(self))
    }

    /// `sbox self`.
    pub fn fuzzy_sbox(self) -> Formula {
        Formula::SBox(Box::new(self))
    }

    /// `sdia self`.
    pub fn fuzzy_sdia(self) -> Formula {
        Formula::SDia(Box::new(self))
    }

    /// `box(b) self`.
    pub fn box_at(self, b: Element) -> Formula {
        Formula::BoxCut(b, Box::new(self))
    }

    /// `dia(b) self`.
    pub fn dia_at(self, b: Element) -> Formula {
        Formula::DiaCut(b, Box::new(self))
    }

    /// `sbox(b) self`; the caller must keep `b` positive.
    pub fn sbox_at(self, b: Element) -> Formula {
        Formula::SBoxCut(b, Box::new(self))
    }

    /// `sdia(b) self`; the caller must keep `b` positive.
    pub fn sdia_at(self, b: Element) -> Formula {
        Formula::SDiaCut(b, Box::new(self))
    }

    /// `A self`.
    pub fn univ(self) -> Formula {
        Formula::Univ(Box::new(self))
    }

    /// `E self`.
    pub fn exist(self) -> Formula {
        Formula::Exist(Box::new(self))
    }

    /// Direct subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            Var(_) | Const(_) => Vec::new(),
            Neg(a) | Delta(a) | Box(a) | Dia(a) | SBox(a) | SDia(a) | Univ(a) | Exist(a)
            | BoxCut(_, a) | DiaCut(_, a) | SBoxCut(_, a) | SDiaCut(_, a) => {
                let mut v = Vec::with_capacity(1);
                v.push(a.as_ref());
                v
            }
            And(a, b) | Or(a, b) | Prod(a, b) | Imp(a, b) => {
                let mut v = Vec::with_capacity(2);
                v.push(a.as_ref());
                v.push(b.as_ref());
                v
            }
        }
    }

    /// True for the twelve modality nodes (everything that inspects the
    /// accessibility relation or quantifies over worlds).
    pub fn is_modal_node(&self) -> bool {
        use Formula::*;
        matches!(
            self,
            Box(_)
                | Dia(_)
                | SBox(_)
                | SDia(_)
                | BoxCut(..)
                | DiaCut(..)
                | SBoxCut(..)
                | SDiaCut(..)
                | Univ(_)
                | Exist(_)
        )
    }

    /// True if any node of the formula is a strict modality.
    pub fn mentions_strict(&self) -> bool {
        use Formula::*;
        match self {
            SBox(_) | SDia(_) | SBoxCut(..) | SDiaCut(..) => true,
            _ => self.children().iter().any(|c| c.mentions_strict()),
        }
    }

    /// Maximal nesting depth of modality nodes.
    pub fn modal_depth(&self) -> usize {
        let inner = self.children().iter().map(|c| c.modal_depth()).max().unwrap_or(0);
        if self.is_modal_node() { inner + 1 } else { inner }
    }

    /// The set of variable names occurring in the formula.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut BTreeSet<String>) {
        if let Formula::Var(v) = self {
            out.insert(v.clone());
        }
        for c in self.children() {
            c.collect_variables(out);
        }
    }

    /// Simultaneously replaces every variable that `env` maps by its image;
    /// variables outside `env` are kept.
    pub fn substitute(&self, env: &BTreeMap<String, Formula>) -> Formula {
        if let Formula::Var(v) = self {
            if let Some(image) = env.get(v) {
                return image.clone();
            }
        }
        let kids = self.children().into_iter().map(|c| c.substitute(env)).collect();
        self.with_children(kids)
    }

    /// Rebuilds this node over replacement children (same arity and order
    /// as [`children`](Formula::children)).
    fn with_children(&self, mut kids: Vec<Formula>) -> Formula {
        use Formula as F;
        let mut one = || Box::new(kids.pop().expect("unary child"));
        match self {
            F::Var(_) | F::Const(_) => self.clone(),
            F::Neg(_) => F::Neg(one()),
            F::Delta(_) => F::Delta(one()),
            F::Box(_) => F::Box(one()),
            F::Dia(_) => F::Dia(one()),
            F::SBox(_) => F::SBox(one()),
            F::SDia(_) => F::SDia(one()),
            F::Univ(_) => F::Univ(one()),
            F::Exist(_) => F::Exist(one()),
            F::BoxCut(b, _) => F::BoxCut(*b, one()),
            F::DiaCut(b, _) => F::DiaCut(*b, one()),
            F::SBoxCut(b, _) => F::SBoxCut(*b, one()),
            F::SDiaCut(b, _) => F::SDiaCut(*b, one()),
            F::And(..) | F::Or(..) | F::Prod(..) | F::Imp(..) => {
                let r = Box::new(kids.pop().expect("right child"));
                let l = Box::new(kids.pop().expect("left child"));
                match self {
                    F::And(..) => F::And(l, r),
                    F::Or(..) => F::Or(l, r),
                    F::Prod(..) => F::Prod(l, r),
                    F::Imp(..) => F::Imp(l, r),
                    _ => unreachable!(),
                }
            }
        }
    }
}

/// Folds `items` with `&` into a running conjunction; the empty meet is the
/// constant top.
fn big_and(chain: &Chain, mut items: impl Iterator<Item = Formula>) -> Formula {
    match items.next() {
        None => Formula::Const(chain.top()),
        Some(first) => items.fold(first, |acc, f| acc.and(f)),
    }
}

/// Folds `items` with `|`; the empty join is the constant bottom.
fn big_or(chain: &Chain, mut items: impl Iterator<Item = Formula>) -> Formula {
    match items.next() {
        None => Formula::Const(chain.bottom()),
        Some(first) => items.fold(first, |acc, f| acc.or(f)),
    }
}

fn map_bottom_up(f: &Formula, rewrite: &impl Fn(Formula) -> Formula) -> Formula {
    let kids = f.children().iter().map(|c| map_bottom_up(c, rewrite)).collect();
    rewrite(f.with_children(kids))
}

/// Replaces every diamond-family node by its box-family definition
/// `⋀_{a ∈ B} (box-family (φ -> #a) -> #a)`; the graded and strict variants
/// keep their grade and strictness.  The output contains no `Dia`,
/// `DiaCut`, `SDia`, or `SDiaCut` node.
pub fn desugar_dia_from_box(f: &Formula, chain: &Chain) -> Formula {
    map_bottom_up(f, &|node| match node {
        Formula::Dia(a) => big_and(
            chain,
            chain.elements().map(|b| {
                a.as_ref().clone().imp(Formula::Const(b)).fuzzy_box().imp(Formula::Const(b))
            }),
        ),
        Formula::SDia(a) => big_and(
            chain,
            chain.elements().map(|b| {
                a.as_ref().clone().imp(Formula::Const(b)).fuzzy_sbox().imp(Formula::Const(b))
            }),
        ),
        Formula::DiaCut(g, a) => big_and(
            chain,
            chain.elements().map(|b| {
                a.as_ref().clone().imp(Formula::Const(b)).box_at(g).imp(Formula::Const(b))
            }),
        ),
        Formula::SDiaCut(g, a) => big_and(
            chain,
            chain.elements().map(|b| {
                a.as_ref().clone().imp(Formula::Const(b)).sbox_at(g).imp(Formula::Const(b))
            }),
        ),
        other => other,
    })
}

/// The dual rewriting: replaces every box-family node by
/// `⋀_{a ∈ B} (dia-family (φ -> #a) -> #a)`.  The output contains no `Box`,
/// `BoxCut`, `SBox`, or `SBoxCut` node.
pub fn desugar_box_from_dia(f: &Formula, chain: &Chain) -> Formula {
    map_bottom_up(f, &|node| match node {
        Formula::Box(a) => big_and(
            chain,
            chain.elements().map(|b| {
                a.as_ref().clone().imp(Formula::Const(b)).fuzzy_dia().imp(Formula::Const(b))
            }),
        ),
        Formula::SBox(a) => big_and(
            chain,
            chain.elements().map(|b| {
                a.as_ref().clone().imp(Formula::Const(b)).fuzzy_sdia().imp(Formula::Const(b))
            }),
        ),
        Formula::BoxCut(g, a) => big_and(
            chain,
            chain.elements().map(|b| {
                a.as_ref().clone().imp(Formula::Const(b)).dia_at(g).imp(Formula::Const(b))
            }),
        ),
        Formula::SBoxCut(g, a) => big_and(
            chain,
            chain.elements().map(|b| {
                a.as_ref().clone().imp(Formula::Const(b)).sdia_at(g).imp(Formula::Const(b))
            }),
        ),
        other => other,
    })
}

/// Replaces the fuzzy modalities by their graded-cut aggregations:
/// `box φ` by `⋀_{b ∈ B} (#b -> box(b) φ)`, `dia φ` by
/// `⋁_{b ∈ B} (#b * dia(b) φ)`, and the strict pair likewise with the
/// meets/joins restricted to positive `b`.  Graded nodes pass through.
pub fn desugar_graded_from_cuts(f: &Formula, chain: &Chain) -> Formula {
    map_bottom_up(f, &|node| match node {
        Formula::Box(a) => big_and(
            chain,
            chain.elements().map(|b| Formula::Const(b).imp(a.as_ref().clone().box_at(b))),
        ),
        Formula::Dia(a) => big_or(
            chain,
            chain.elements().map(|b| Formula::Const(b).prod(a.as_ref().clone().dia_at(b))),
        ),
        Formula::SBox(a) => big_and(
            chain,
            chain.positive_elements().map(|b| Formula::Const(b).imp(a.as_ref().clone().sbox_at(b))),
        ),
        Formula::SDia(a) => big_or(
            chain,
            chain
                .positive_elements()
                .map(|b| Formula::Const(b).prod(a.as_ref().clone().sdia_at(b))),
        ),
        other => other,
    })
}

/// Replaces every graded box by its Δ-characterisation through the fuzzy
/// diamond of the matching strictness:
/// `box(b) φ` becomes `⋀_{a ∈ B} (delta (#b -> dia (φ ≈ #a)) -> #a)` and
/// `sbox(b) φ` the same with `sdia`, where `φ ≈ #a` abbreviates
/// `delta ((φ -> #a) * (#a -> φ))`.  `dia(b)`/`sdia(b)` nodes pass through
/// unchanged; the output contains no `BoxCut` or `SBoxCut` node.
pub fn desugar_cuts_via_delta(f: &Formula, chain: &Chain) -> Formula {
    let characterise = |b: Element, a: &Formula, strict: bool| {
        big_and(
            chain,
            chain.elements().map(|v| {
                let approx = a.clone().approx(v);
                let dia = if strict { approx.fuzzy_sdia() } else { approx.fuzzy_dia() };
                Formula::Const(b).imp(dia).delta().imp(Formula::Const(v))
            }),
        )
    };
    map_bottom_up(f, &|node| match node {
        Formula::BoxCut(b, a) => characterise(b, a.as_ref(), false),
        Formula::SBoxCut(b, a) => characterise(b, a.as_ref(), true),
        other => other,
    })
}

/// A parse failure, locating the first offending byte of the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset of the token at which parsing failed.
    pub position: usize,
    /// What went wrong.
    pub kind: ParseErrorKind,
}

/// The kinds of parse failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// A character outside the grammar's alphabet.
    UnexpectedChar(char),
    /// The input ended where a formula or token was still required.
    UnexpectedEnd,
    /// A specific token was required (e.g. a closing parenthesis).
    Expected(&'static str),
    /// A `#` constant or grade label that is not an element of the chain.
    UnknownElement(String),
    /// `sbox(0)` / `sdia(0)`: strict cuts are undefined at level `0`.
    ZeroStrictCut,
    /// A complete formula was parsed but input remains.
    TrailingInput,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: ", self.position)?;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::Expected(what) => write!(f, "expected {what}"),
            ParseErrorKind::UnknownElement(l) => {
                write!(f, "unknown-element: no element is labelled `{l}`")
            }
            ParseErrorKind::ZeroStrictCut => {
                write!(f, "zero-strict-cut: strict modalities take a positive level")
            }
            ParseErrorKind::TrailingInput => write!(f, "trailing input after formula"),
        }
    }
}

impl core::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok<'a> {
    Word(&'a str),
    Hash,
    LParen,
    RParen,
    Arrow,
    Bar,
    Amp,
    Star,
    Tilde,
}

/// Lexes the input into `(token, byte offset)` pairs.  Words cover both
/// identifiers (`[A-Za-z_][A-Za-z0-9_]*`) and numeric labels
/// (`[0-9][0-9./]*`); the parser decides which reading applies.
fn lex(text: &str) -> Result<Vec<(Tok<'_>, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '#' => {
                toks.push((Tok::Hash, i));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            '|' => {
                toks.push((Tok::Bar, i));
                i += 1;
            }
            '&' => {
                toks.push((Tok::Amp, i));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            '~' => {
                toks.push((Tok::Tilde, i));
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((Tok::Arrow, i));
                    i += 2;
                } else {
                    return Err(ParseError {
                        position: i,
                        kind: ParseErrorKind::Expected("`->`"),
                    });
                }
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && matches!(bytes[i], b'a'..=b'z' | b'A'..=b'Z' | b'0'..=b'9' | b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Word(&text[start..i]), start));
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i], b'0'..=b'9' | b'.' | b'/') {
                    i += 1;
                }
                toks.push((Tok::Word(&text[start..i]), start));
            }
            other => {
                return Err(ParseError {
                    position: i,
                    kind: ParseErrorKind::UnexpectedChar(other),
                });
            }
        }
    }
    Ok(toks)
}

const KEYWORDS: [&str; 7] = ["box", "dia", "sbox", "sdia", "delta", "A", "E"];

struct Parser<'a> {
    toks: Vec<(Tok<'a>, usize)>,
    pos: usize,
    end: usize,
    chain: &'a Chain,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<Tok<'a>> {
        self.toks.get(self.pos).map(|&(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|&(_, o)| o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok<'a>> {
        let t = self.peek();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, kind: ParseErrorKind) -> Result<T, ParseError> {
        Err(ParseError { position: self.offset(), kind })
    }

    fn expect(&mut self, tok: Tok<'a>, what: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(tok) {
            self.pos += 1;
            Ok(())
        } else if self.peek().is_none() {
            self.fail(ParseErrorKind::UnexpectedEnd)
        } else {
            self.fail(ParseErrorKind::Expected(what))
        }
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek() == Some(Tok::Arrow) {
            self.pos += 1;
            let rhs = self.imp()?;
            Ok(lhs.imp(rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(Tok::Bar) {
            self.pos += 1;
            lhs = lhs.or(self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.prod()?;
        while self.peek() == Some(Tok::Amp) {
            self.pos += 1;
            lhs = lhs.and(self.prod()?);
        }
        Ok(lhs)
    }

    fn prod(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(Tok::Star) {
            self.pos += 1;
            lhs = lhs.prod(self.unary()?);
        }
        Ok(lhs)
    }

    /// After a modal keyword, reads an optional `(label)` grade.  A single
    /// word token that names a chain element and is immediately followed by
    /// `)` is a grade; anything else rewinds and re-parses as an argument.
    fn grade(&mut self) -> Result<Option<(Element, usize)>, ParseError> {
        if self.peek() != Some(Tok::LParen) {
            return Ok(None);
        }
        let save = self.pos;
        self.pos += 1;
        if let Some(Tok::Word(w)) = self.peek() {
            let label_at = self.offset();
            if self.toks.get(self.pos + 1).map(|&(t, _)| t) == Some(Tok::RParen) {
                if let Ok(b) = self.chain.element(w) {
                    self.pos += 2;
                    return Ok(Some((b, label_at)));
                }
            }
        }
        self.pos = save;
        Ok(None)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Word(w)) if KEYWORDS.contains(&w) => {
                self.pos += 1;
                match w {
                    "delta" => Ok(self.unary()?.delta()),
                    "A" => Ok(self.unary()?.univ()),
                    "E" => Ok(self.unary()?.exist()),
                    modal => {
                        let grade = self.grade()?;
                        if let Some((b, label_at)) = grade {
                            if (modal == "sbox" || modal == "sdia") && b.index() == 0 {
                                return Err(ParseError {
                                    position: label_at,
                                    kind: ParseErrorKind::ZeroStrictCut,
                                });
                            }
                            let arg = self.unary()?;
                            Ok(match modal {
                                "box" => arg.box_at(b),
                                "dia" => arg.dia_at(b),
                                "sbox" => arg.sbox_at(b),
                                _ => arg.sdia_at(b),
                            })
                        } else {
                            let arg = self.unary()?;
                            Ok(match modal {
                                "box" => arg.fuzzy_box(),
                                "dia" => arg.fuzzy_dia(),
                                "sbox" => arg.fuzzy_sbox(),
                                _ => arg.fuzzy_sdia(),
                            })
                        }
                    }
                }
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Word(w)) => {
                if w.as_bytes()[0].is_ascii_digit() {
                    // Bare numeric labels are not formulas; constants need `#`.
                    Err(ParseError { position: at, kind: ParseErrorKind::Expected("a formula") })
                } else {
                    Ok(Formula::var(w))
                }
            }
            Some(Tok::Hash) => match self.bump() {
                Some(Tok::Word(w)) => match self.chain.element(w) {
                    Ok(b) => Ok(Formula::Const(b)),
                    Err(_) => Err(ParseError {
                        position: self.toks[self.pos - 1].1,
                        kind: ParseErrorKind::UnknownElement(w.to_string()),
                    }),
                },
                Some(_) => self.fail(ParseErrorKind::Expected("an element label after `#`")),
                None => Err(ParseError {
                    position: self.end,
                    kind: ParseErrorKind::UnexpectedEnd,
                }),
            },
            Some(Tok::LParen) => {
                let f = self.imp()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(_) => Err(ParseError { position: at, kind: ParseErrorKind::Expected("a formula") }),
            None => Err(ParseError { position: self.end, kind: ParseErrorKind::UnexpectedEnd }),
        }
    }
}

/// Parses a formula over the given chain.
pub fn parse(text: &str, chain: &Chain) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), chain };
    let f = p.imp()?;
    if p.pos != p.toks.len() {
        return p.fail(ParseErrorKind::TrailingInput);
    }
    Ok(f)
}

/// Binding strength used by the printer; larger binds tighter.
fn level(f: &Formula) -> u8 {
    use Formula::*;
    match f {
        Imp(..) => 1,
        Or(..) => 2,
        And(..) => 3,
        Prod(..) => 4,
        Neg(_) | Delta(_) | Box(_) | Dia(_) | SBox(_) | SDia(_) | BoxCut(..) | DiaCut(..)
        | SBoxCut(..) | SDiaCut(..) | Univ(_) | Exist(_) => 5,
        Var(_) | Const(_) => 6,
    }
}

fn print_at(f: &Formula, min_level: u8, chain: &Chain, out: &mut String) {
    let own = level(f);
    if own < min_level {
        out.push('(');
        print_at(f, 0, chain, out);
        out.push(')');
        return;
    }
    use Formula::*;
    match f {
        Var(v) => out.push_str(v),
        Const(b) => {
            out.push('#');
            out.push_str(chain.label(*b));
        }
        Neg(a) => {
            out.push('~');
            print_at(a, 5, chain, out);
        }
        Delta(a) => {
            out.push_str("delta ");
            print_at(a, 5, chain, out);
        }
        Univ(a) => {
            out.push_str("A ");
            print_at(a, 5, chain, out);
        }
        Exist(a) => {
            out.push_str("E ");
            print_at(a, 5, chain, out);
        }
        Box(a) | Dia(a) | SBox(a) | SDia(a) => {
            out.push_str(match f {
                Box(_) => "box ",
                Dia(_) => "dia ",
                SBox(_) => "sbox ",
                _ => "sdia ",
            });
            print_at(a, 5, chain, out);
        }
        BoxCut(b, a) | DiaCut(b, a) | SBoxCut(b, a) | SDiaCut(b, a) => {
            out.push_str(match f {
                BoxCut(..) => "box(",
                DiaCut(..) => "dia(",
                SBoxCut(..) => "sbox(",
                _ => "sdia(",
            });
            out.push_str(chain.label(*b));
            out.push_str(") ");
            print_at(a, 5, chain, out);
        }
        // `->` associates right: the left side must bind strictly tighter.
        Imp(a, b) => {
            print_at(a, own + 1, chain, out);
            out.push_str(" -> ");
            print_at(b, own, chain, out);
        }
        // The left-associative connectives allow equal strength on the left.
        And(a, b) | Or(a, b) | Prod(a, b) => {
            let op = match f {
                And(..) => " & ",
                Or(..) => " | ",
                _ => " * ",
            };
            print_at(a, own, chain, out);
            out.push_str(op);
            print_at(b, own + 1, chain, out);
        }
    }
}

/// Renders a formula in the concrete grammar with minimal parentheses;
/// [`parse`] of the result reproduces the formula exactly.
pub fn print(f: &Formula, chain: &Chain) -> String {
    let mut out = String::new();
    print_at(f, 0, chain, &mut out);
    out
}
