//! Finite MTL-chains: linearly ordered bounded integral commutative
//! residuated lattices, extended with the Baaz–Monteiro Δ operation.
//!
//! A chain is stored as its list of element labels in ascending order
//! (index `0` is the bottom element `⊥`, the last index is the top element
//! `1`) together with the full table of the monoidal product `⊙`.  The
//! residuum `→` is always computed from the product as
//! `x → y = max { z | x ⊙ z ≤ y }`; it is never supplied by the caller.
//! Lattice meet and join coincide with `min` and `max` of the indices.
//!
//! Constructors validate every required law and report the first violation
//! with concrete witnesses, so an accepted [`Chain`] is a genuine MTL-chain
//! by construction.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

/// An element of a [`Chain`], represented by its index in the ascending
/// element order (`0` is bottom, `size - 1` is top).
///
/// Elements are plain indices, so the derived `Ord` agrees with the lattice
/// order of the chain the element belongs to.  Elements of different chains
/// must not be mixed; all operations that combine elements go through the
/// owning [`Chain`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(usize);

impl Element {
    /// Position of this element in the ascending element order.
    pub fn index(self) -> usize {
        self.0
    }

    /// The bottom element `⊥` (index `0`) of any chain.
    pub(crate) fn bottom() -> Element {
        Element(0)
    }
}

/// Errors reported by chain constructors and element lookup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeError {
    /// A chain needs at least two elements (`⊥` and `1`).
    InvalidCardinality {
        /// The rejected element count.
        n: usize,
    },
    /// A label that does not name an element of the chain.
    UnknownElement {
        /// The offending label.
        label: String,
    },
    /// Two elements carry the same label.
    DuplicateLabel {
        /// The repeated label.
        label: String,
    },
    /// The product table is not an `n × n` matrix.
    TableShape {
        /// Expected row/column count.
        expected: usize,
        /// Index of the offending row, or `expected` if the row count is wrong.
        row: usize,
        /// Number of entries found in that row (or number of rows).
        found: usize,
    },
    /// `x ⊙ y ≠ y ⊙ x` for the named elements.
    NotCommutative {
        /// Label of `x`.
        x: String,
        /// Label of `y`.
        y: String,
    },
    /// `(x ⊙ y) ⊙ z ≠ x ⊙ (y ⊙ z)` for the named elements.
    NotAssociative {
        /// Label of `x`.
        x: String,
        /// Label of `y`.
        y: String,
        /// Label of `z`.
        z: String,
    },
    /// `y ≤ z` but `x ⊙ y > x ⊙ z` for the named elements.
    NotMonotone {
        /// Label of `x`.
        x: String,
        /// Label of `y`.
        y: String,
        /// Label of `z`.
        z: String,
    },
    /// `x ⊙ 1 ≠ x` for the named element.
    UnitFails {
        /// Label of `x`.
        x: String,
    },
    /// The residuation adjunction `x ⊙ z ≤ y ⟺ z ≤ x → y` fails for the
    /// named elements.
    ResiduationFails {
        /// Label of `x`.
        x: String,
        /// Label of `y`.
        y: String,
        /// Label of `z`.
        z: String,
    },
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::InvalidCardinality { n } => {
                write!(f, "invalid-cardinality: a chain needs at least 2 elements, got {n}")
            }
            LatticeError::UnknownElement { label } => {
                write!(f, "unknown-element: no element is labelled `{label}`")
            }
            LatticeError::DuplicateLabel { label } => {
                write!(f, "duplicate label `{label}` in element list")
            }
            LatticeError::TableShape { expected, row, found } => {
                write!(
                    f,
                    "product table must be {expected}x{expected}: row {row} has {found} entries"
                )
            }
            LatticeError::NotCommutative { x, y } => {
                write!(f, "product is not commutative at ({x}, {y})")
            }
            LatticeError::NotAssociative { x, y, z } => {
                write!(f, "product is not associative at ({x}, {y}, {z})")
            }
            LatticeError::NotMonotone { x, y, z } => {
                write!(f, "product is not monotone: {y} <= {z} but {x}*{y} > {x}*{z}")
            }
            LatticeError::UnitFails { x } => {
                write!(f, "top element is not a unit: {x}*1 differs from {x}")
            }
            LatticeError::ResiduationFails { x, y, z } => {
                write!(f, "residuation law fails at ({x}, {y}, {z})")
            }
        }
    }
}

impl core::error::Error for LatticeError {}

/// A finite MTL-chain.
///
/// Elements are indexed `0..size()` in ascending lattice order.  The chain
/// owns its label list and the tables of `⊙` and `→`; all logical
/// connectives used by the semantics ([`meet`](Chain::meet),
/// [`join`](Chain::join), [`mono`](Chain::mono),
/// [`residuum`](Chain::residuum), [`neg`](Chain::neg),
/// [`delta`](Chain::delta)) are methods here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    labels: Vec<String>,
    /// Row-major `size × size` table of indices: `mono[x * size + y] = x ⊙ y`.
    mono: Vec<usize>,
    /// Row-major table of the computed residuum: `resid[x * size + y] = x → y`.
    resid: Vec<usize>,
}

/// Renders `k / d` (already in lowest terms is not required) as a decimal
/// when the reduced denominator divides a power of ten with at most six
/// digits, and as a reduced fraction `p/q` otherwise.
fn ratio_label(k: usize, d: usize) -> String {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    debug_assert!(d > 0 && k <= d);
    let g = gcd(k, d);
    let (p, q) = (k / g, d / g);
    if q == 1 {
        return p.to_string();
    }
    // Digits needed for a terminating decimal: q must be 2^a * 5^b.
    let (mut rest, mut twos, mut fives) = (q, 0u32, 0u32);
    while rest % 2 == 0 {
        rest /= 2;
        twos += 1;
    }
    while rest % 5 == 0 {
        rest /= 5;
        fives += 1;
    }
    let digits = twos.max(fives);
    if rest != 1 || digits > 6 {
        return format!("{p}/{q}");
    }
    let scale = 10usize.pow(digits);
    let mut frac = format!("{:0width$}", p * (scale / q), width = digits as usize);
    while frac.ends_with('0') {
        frac.pop();
    }
    format!("0.{frac}")
}

/// Default labels for an `n`-element equidistant chain: `k/(n-1)` for every
/// `k`, rendered uniformly — decimals when `1/(n-1)` terminates (so every
/// ratio does), reduced fractions otherwise.
fn equidistant_labels(n: usize) -> Vec<String> {
    let all_terminate = ratio_label(1, n - 1).starts_with("0.") || n == 2;
    (0..n)
        .map(|k| {
            if all_terminate || k == 0 || k == n - 1 {
                ratio_label(k, n - 1)
            } else {
                let g = {
                    fn gcd(a: usize, b: usize) -> usize {
                        if b == 0 { a } else { gcd(b, a % b) }
                    }
                    gcd(k, n - 1)
                };
                format!("{}/{}", k / g, (n - 1) / g)
            }
        })
        .collect()
}

/// The `n`-valued Łukasiewicz chain: `x ⊙ y = max(x + y - (n-1), 0)` on
/// indices, i.e. `max(x + y - 1, 0)` on the rational values `k/(n-1)`.
///
/// Errors with `invalid-cardinality` when `n < 2`.
pub fn make_lukasiewicz(n: usize) -> Result<Chain, LatticeError> {
    if n < 2 {
        return Err(LatticeError::InvalidCardinality { n });
    }
    let mono = products(n, |x, y| (x + y).saturating_sub(n - 1));
    Chain::from_index_table(equidistant_labels(n), mono)
}

/// The `n`-valued Gödel chain: `x ⊙ y = min(x, y)`.
///
/// Errors with `invalid-cardinality` when `n < 2`.
pub fn make_godel(n: usize) -> Result<Chain, LatticeError> {
    if n < 2 {
        return Err(LatticeError::InvalidCardinality { n });
    }
    let mono = products(n, |x, y| x.min(y));
    Chain::from_index_table(equidistant_labels(n), mono)
}

fn products(n: usize, f: impl Fn(usize, usize) -> usize) -> Vec<usize> {
    let mut t = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            t.push(f(x, y));
        }
    }
    t
}

/// Builds a chain from an explicit label list (ascending order, bottom
/// first) and the full `⊙` table given as labels.
///
/// Validates cardinality, label uniqueness, table shape, membership of
/// every table entry, commutativity, associativity, monotonicity, and the
/// unit law, then computes the residuum and re-checks the residuation
/// adjunction.  The first violated law is reported with witnesses.
pub fn make_custom(labels: Vec<String>, mono: &[Vec<String>]) -> Result<Chain, LatticeError> {
    let n = labels.len();
    if n < 2 {
        return Err(LatticeError::InvalidCardinality { n });
    }
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(LatticeError::DuplicateLabel { label: l.clone() });
        }
    }
    if mono.len() != n {
        return Err(LatticeError::TableShape { expected: n, row: n, found: mono.len() });
    }
    let mut table = Vec::with_capacity(n * n);
    for (r, row) in mono.iter().enumerate() {
        if row.len() != n {
            return Err(LatticeError::TableShape { expected: n, row: r, found: row.len() });
        }
        for entry in row {
            let idx = labels
                .iter()
                .position(|l| l == entry)
                .ok_or_else(|| LatticeError::UnknownElement { label: entry.clone() })?;
            table.push(idx);
        }
    }
    Chain::from_index_table(labels, table)
}

impl Chain {
    /// Shared constructor: validates the monoid laws on an index table,
    /// computes the residuum, and re-checks the residuation adjunction.
    fn from_index_table(labels: Vec<String>, mono: Vec<usize>) -> Result<Chain, LatticeError> {
        let n = labels.len();
        debug_assert_eq!(mono.len(), n * n);
        let at = |x: usize, y: usize| mono[x * n + y];
        for x in 0..n {
            if at(x, n - 1) != x {
                return Err(LatticeError::UnitFails { x: labels[x].clone() });
            }
            for y in 0..n {
                if at(x, y) != at(y, x) {
                    return Err(LatticeError::NotCommutative {
                        x: labels[x].clone(),
                        y: labels[y].clone(),
                    });
                }
                for z in 0..n {
                    if at(at(x, y), z) != at(x, at(y, z)) {
                        return Err(LatticeError::NotAssociative {
                            x: labels[x].clone(),
                            y: labels[y].clone(),
                            z: labels[z].clone(),
                        });
                    }
                    if y <= z && at(x, y) > at(x, z) {
                        return Err(LatticeError::NotMonotone {
                            x: labels[x].clone(),
                            y: labels[y].clone(),
                            z: labels[z].clone(),
                        });
                    }
                }
            }
        }
        // Residuum from the product: x -> y = max { z | x * z <= y }.
        // x * 0 = 0 <= y always holds, so the maximum exists.
        let mut resid = vec![0usize; n * n];
        for x in 0..n {
            for y in 0..n {
                resid[x * n + y] = (0..n).rev().find(|&z| at(x, z) <= y).unwrap_or(0);
            }
        }
        let chain = Chain { labels, mono, resid };
        // The adjunction is a consequence of the laws above, but it is the
        // defining property of the residuum, so verify it outright.
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let adjoint = chain.mono_idx(x, z) <= y;
                    let residual = z <= chain.resid[x * n + y];
                    if adjoint != residual {
                        return Err(LatticeError::ResiduationFails {
                            x: chain.labels[x].clone(),
                            y: chain.labels[y].clone(),
                            z: chain.labels[z].clone(),
                        });
                    }
                }
            }
        }
        Ok(chain)
    }

    fn mono_idx(&self, x: usize, y: usize) -> usize {
        self.mono[x * self.labels.len() + y]
    }

    /// Number of elements.
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// The bottom element `⊥`.
    pub fn bottom(&self) -> Element {
        Element(0)
    }

    /// The top element `1`.
    pub fn top(&self) -> Element {
        Element(self.labels.len() - 1)
    }

    /// The unique co-atom `k`: the largest element below the top.
    pub fn coatom(&self) -> Element {
        Element(self.labels.len() - 2)
    }

    /// All elements in ascending order.
    pub fn elements(&self) -> impl DoubleEndedIterator<Item = Element> + '_ {
        (0..self.labels.len()).map(Element)
    }

    /// All elements strictly above bottom, in ascending order.
    pub fn positive_elements(&self) -> impl DoubleEndedIterator<Item = Element> + '_ {
        (1..self.labels.len()).map(Element)
    }

    /// The element at the given index, if in range.
    pub fn element_at(&self, index: usize) -> Option<Element> {
        (index < self.labels.len()).then_some(Element(index))
    }

    /// Looks up an element by label; errors with `unknown-element`.
    pub fn element(&self, label: &str) -> Result<Element, LatticeError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(Element)
            .ok_or_else(|| LatticeError::UnknownElement { label: label.into() })
    }

    /// The label of an element.
    pub fn label(&self, x: Element) -> &str {
        &self.labels[x.0]
    }

    /// Lattice order: `x ≤ y`.
    pub fn leq(&self, x: Element, y: Element) -> bool {
        x.0 <= y.0
    }

    /// Lattice meet `x ∧ y` (= `min` on a chain).
    pub fn meet(&self, x: Element, y: Element) -> Element {
        Element(x.0.min(y.0))
    }

    /// Lattice join `x ∨ y` (= `max` on a chain).
    pub fn join(&self, x: Element, y: Element) -> Element {
        Element(x.0.max(y.0))
    }

    /// Monoidal product `x ⊙ y`.
    pub fn mono(&self, x: Element, y: Element) -> Element {
        Element(self.mono_idx(x.0, y.0))
    }

    /// Residuum `x → y = max { z | x ⊙ z ≤ y }`.
    pub fn residuum(&self, x: Element, y: Element) -> Element {
        Element(self.resid[x.0 * self.labels.len() + y.0])
    }

    /// Negation `¬x = x → ⊥`.
    pub fn neg(&self, x: Element) -> Element {
        self.residuum(x, Element(0))
    }

    /// Baaz–Monteiro Δ: `Δ(1) = 1` and `Δ(x) = ⊥` for `x < 1`.
    pub fn delta(&self, x: Element) -> Element {
        if x == self.top() { self.top() } else { Element(0) }
    }

    /// The double-residual meet `⋀_{a ∈ B} ((b → a) → a)`, which equals `b`
    /// on every chain.
    pub fn double_residual(&self, b: Element) -> Element {
        self.elements()
            .map(|a| self.residuum(self.residuum(b, a), a))
            .fold(self.top(), |acc, v| self.meet(acc, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(c: &Chain, l: &str) -> Element {
        c.element(l).expect("element")
    }

    #[test]
    fn lukasiewicz_labels_are_decimal_when_terminating() {
        let c = make_lukasiewicz(11).unwrap();
        let labels: Vec<&str> = c.elements().map(|e| c.label(e)).collect();
        assert_eq!(
            labels,
            ["0", "0.1", "0.2", "0.3", "0.4", "0.5", "0.6", "0.7", "0.8", "0.9", "1"]
        );
        let c3 = make_lukasiewicz(3).unwrap();
        let labels3: Vec<&str> = c3.elements().map(|e| c3.label(e)).collect();
        assert_eq!(labels3, ["0", "0.5", "1"]);
    }

    #[test]
    fn non_terminating_ratios_fall_back_to_fractions() {
        let c = make_lukasiewicz(4).unwrap();
        let labels: Vec<&str> = c.elements().map(|e| c.label(e)).collect();
        assert_eq!(labels, ["0", "1/3", "2/3", "1"]);
        // A single non-terminating ratio switches the whole chain to
        // fraction labels, so 3/6 is written 1/2 rather than 0.5.
        let c7 = make_godel(7).unwrap();
        let labels7: Vec<&str> = c7.elements().map(|e| c7.label(e)).collect();
        assert_eq!(labels7, ["0", "1/6", "1/3", "1/2", "2/3", "5/6", "1"]);
    }

    #[test]
    fn lukasiewicz_11_operation_values() {
        let c = make_lukasiewicz(11).unwrap();
        assert_eq!(c.mono(el(&c, "0.8"), el(&c, "0.8")), el(&c, "0.6"));
        assert_eq!(c.residuum(el(&c, "0.7"), el(&c, "0.4")), el(&c, "0.7"));
        assert_eq!(c.neg(el(&c, "0.3")), el(&c, "0.7"));
        assert_eq!(c.delta(el(&c, "0.9")), el(&c, "0"));
        assert_eq!(c.delta(el(&c, "1")), el(&c, "1"));
        assert_eq!(c.meet(el(&c, "0.4"), el(&c, "0.9")), el(&c, "0.4"));
        assert_eq!(c.join(el(&c, "0.4"), el(&c, "0.9")), el(&c, "0.9"));
    }

    #[test]
    fn goedel_negation_collapses_positive_elements() {
        let c = make_godel(3).unwrap();
        assert_eq!(c.mono(el(&c, "0.5"), el(&c, "0.5")), el(&c, "0.5"));
        assert_eq!(c.neg(el(&c, "0.5")), el(&c, "0"));
        assert_eq!(c.neg(el(&c, "0")), el(&c, "1"));
        assert_eq!(c.residuum(el(&c, "0.5"), el(&c, "0")), el(&c, "0"));
        assert_eq!(c.residuum(el(&c, "1"), el(&c, "0.5")), el(&c, "0.5"));
    }

    #[test]
    fn cardinality_below_two_is_rejected() {
        for n in [0, 1] {
            assert_eq!(make_lukasiewicz(n).unwrap_err(), LatticeError::InvalidCardinality { n });
            assert_eq!(make_godel(n).unwrap_err(), LatticeError::InvalidCardinality { n });
        }
        let labels: Vec<String> = ["0"].iter().map(|s| s.to_string()).collect();
        assert_eq!(
            make_custom(labels, &[vec!["0".into()]]).unwrap_err(),
            LatticeError::InvalidCardinality { n: 1 }
        );
    }

    fn named(labels: &[&str]) -> Vec<String> {
        labels.iter().map(|s| s.to_string()).collect()
    }

    fn rows(r: &[&[&str]]) -> Vec<Vec<String>> {
        r.iter().map(|row| row.iter().map(|s| s.to_string()).collect()).collect()
    }

    #[test]
    fn custom_min_chain_is_accepted() {
        let c = make_custom(
            named(&["0", "b", "1"]),
            &rows(&[&["0", "0", "0"], &["0", "b", "b"], &["0", "b", "1"]]),
        )
        .unwrap();
        assert_eq!(c.size(), 3);
        assert_eq!(c.coatom(), el(&c, "b"));
        assert_eq!(c.residuum(el(&c, "1"), el(&c, "b")), el(&c, "b"));
        assert_eq!(c.residuum(el(&c, "b"), el(&c, "b")), el(&c, "1"));
    }

    #[test]
    fn custom_validation_reports_the_broken_law() {
        // Non-commutative at (0, b).
        let e = make_custom(
            named(&["0", "b", "1"]),
            &rows(&[&["0", "b", "0"], &["0", "b", "b"], &["0", "b", "1"]]),
        )
        .unwrap_err();
        assert!(matches!(e, LatticeError::NotCommutative { .. }), "got {e}");

        // The constant-zero product is a commutative monotone semigroup
        // but the top element is no unit.
        let e = make_custom(
            named(&["0", "b", "1"]),
            &rows(&[&["0", "0", "0"], &["0", "0", "0"], &["0", "0", "0"]]),
        )
        .unwrap_err();
        assert_eq!(e, LatticeError::UnitFails { x: "b".into() });

        // b*b = b but b*1 = 0 breaks monotonicity (and associativity on
        // the way); the first violation in check order is reported.
        let e = make_custom(
            named(&["0", "b", "1"]),
            &rows(&[&["0", "0", "0"], &["0", "b", "0"], &["0", "0", "1"]]),
        )
        .unwrap_err();
        assert!(
            matches!(
                e,
                LatticeError::NotMonotone { .. }
                    | LatticeError::UnitFails { .. }
                    | LatticeError::NotAssociative { .. }
            ),
            "got {e}"
        );

        // Table entry outside the carrier.
        let e = make_custom(
            named(&["0", "b", "1"]),
            &rows(&[&["0", "0", "0"], &["0", "c", "b"], &["0", "b", "1"]]),
        )
        .unwrap_err();
        assert_eq!(e, LatticeError::UnknownElement { label: "c".into() });

        // Ragged table.
        let e = make_custom(
            named(&["0", "b", "1"]),
            &rows(&[&["0", "0", "0"], &["0", "b"], &["0", "b", "1"]]),
        )
        .unwrap_err();
        assert_eq!(e, LatticeError::TableShape { expected: 3, row: 1, found: 2 });

        // Duplicate label.
        let e = make_custom(
            named(&["0", "b", "b"]),
            &rows(&[&["0", "0", "0"], &["0", "b", "b"], &["0", "b", "b"]]),
        )
        .unwrap_err();
        assert_eq!(e, LatticeError::DuplicateLabel { label: "b".into() });
    }

    #[test]
    fn unknown_element_lookup() {
        let c = make_lukasiewicz(3).unwrap();
        assert_eq!(
            c.element("0.7").unwrap_err(),
            LatticeError::UnknownElement { label: "0.7".into() }
        );
    }

    #[test]
    fn residuation_and_prelinearity_hold_on_sample_chains() {
        for c in [make_lukasiewicz(5).unwrap(), make_godel(5).unwrap()] {
            for x in c.elements() {
                for y in c.elements() {
                    for z in c.elements() {
                        let adjoint = c.leq(c.mono(x, z), y);
                        let residual = c.leq(z, c.residuum(x, y));
                        assert_eq!(adjoint, residual, "residuation at ({x:?},{y:?},{z:?})");
                    }
                    // Prelinearity: (x -> y) v (y -> x) = 1.
                    let pl = c.join(c.residuum(x, y), c.residuum(y, x));
                    assert_eq!(pl, c.top());
                }
            }
        }
    }

    #[test]
    fn double_residual_recovers_every_element() {
        for c in [make_lukasiewicz(6).unwrap(), make_godel(6).unwrap()] {
            for b in c.elements() {
                assert_eq!(c.double_residual(b), b);
            }
        }
    }
}
