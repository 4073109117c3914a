//! Aligned plain-text tables and one-line statements, shared by the CLI
//! and the bundled example sheets.

use mvpref_core::lattice::{Chain, Element};
use mvpref_core::prefs::PrefQuantifier;
use mvpref_core::relation::CrispRelation;
use mvpref_core::syntax::{print, Formula};

/// Renders an aligned table: `corner` heads the row-label column and
/// `headers` the value columns.  Labels are left-aligned, values
/// right-aligned, with two spaces between columns.
pub fn table(corner: &str, headers: &[String], rows: &[(String, Vec<String>)]) -> String {
    let label_width = rows
        .iter()
        .map(|(label, _)| label.len())
        .chain([corner.len()])
        .max()
        .unwrap_or(0);
    let widths: Vec<usize> = headers
        .iter()
        .enumerate()
        .map(|(i, h)| {
            rows.iter().map(|(_, cells)| cells[i].len()).chain([h.len()]).max().unwrap()
        })
        .collect();
    let mut out = String::new();
    let mut line = |label: &str, cells: &[String]| {
        out.push_str(&format!("{label:<label_width$}"));
        for (cell, &w) in cells.iter().zip(&widths) {
            out.push_str(&format!("  {cell:>w$}"));
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    };
    line(corner, headers);
    for (label, cells) in rows {
        line(label, cells);
    }
    out
}

/// Renders a square fuzzy-relation-style table whose row and column
/// headers are the world names.
pub fn matrix(corner: &str, worlds: &[String], cells: &[Vec<String>]) -> String {
    let rows: Vec<(String, Vec<String>)> =
        worlds.iter().cloned().zip(cells.iter().cloned()).collect();
    table(corner, worlds, &rows)
}

/// Renders a crisp relation as a 0/1 matrix over the world names.
pub fn crisp_matrix(corner: &str, worlds: &[String], rel: &CrispRelation) -> String {
    let cells: Vec<Vec<String>> = (0..worlds.len())
        .map(|u| {
            (0..worlds.len()).map(|v| u8::from(rel.get(u, v)).to_string()).collect()
        })
        .collect();
    matrix(corner, worlds, &cells)
}

/// Renders a crisp relation as a set of world-name pairs, `{}` when empty.
pub fn pair_set(worlds: &[String], rel: &CrispRelation) -> String {
    let pairs: Vec<String> = rel
        .pairs()
        .into_iter()
        .map(|(u, v)| format!("({}, {})", worlds[u], worlds[v]))
        .collect();
    format!("{{{}}}", pairs.join(", "))
}

/// Renders a preference statement with its degree, e.g.
/// `b: l <=ae h = 0.5` (the context prefix only when present).
pub fn preference_line(
    chain: &Chain,
    quantifier: PrefQuantifier,
    strict: bool,
    phi: &Formula,
    psi: &Formula,
    context: Option<&Formula>,
    degree: Element,
) -> String {
    let op = format!("{}{}", if strict { "<" } else { "<=" }, quantifier.name());
    let body = format!(
        "{} {op} {} = {}",
        print(phi, chain),
        print(psi, chain),
        chain.label(degree)
    );
    match context {
        Some(delta) => format!("{}: {body}", print(delta, chain)),
        None => body,
    }
}
