//! The bundled worked-example sheets.
//!
//! Each sheet is rendered from the bundled models and compared byte for
//! byte against its golden text; `mvpref examples` reports any drift.
//! Bundled data that fails to parse is a build defect, so the renderers
//! panic rather than report input errors.

use mvpref_core::lattice::Chain;
use mvpref_core::model::PreferenceModel;
use mvpref_core::prefs::{eval_preference, PrefQuantifier};
use mvpref_core::relation::FuzzyRelation;
use mvpref_core::syntax::{parse, print, Formula};

use crate::data;
use crate::doc::read_document;
use crate::render;

/// The light-meal alternative of the dinner scenario.
pub const LIGHT: &str = "(#0.8 & f) | (#0.2 & m)";
/// The hearty-meal alternative of the dinner scenario.
pub const HEARTY: &str = "(#0.7 & m) | (#0.3 & f)";

/// One sheet: its identifier, the golden text, and what this build
/// renders for it.
#[derive(Clone, Debug)]
pub struct ExampleRun {
    /// Sheet identifier (e.g. `4.1`).
    pub id: &'static str,
    /// The golden sheet.
    pub expected: &'static str,
    /// The rendered sheet.
    pub actual: String,
}

impl ExampleRun {
    /// True when the rendering matches the golden sheet byte for byte.
    pub fn ok(&self) -> bool {
        self.expected == self.actual
    }
}

/// Renders every bundled sheet alongside its golden text.
pub fn run_all() -> Vec<ExampleRun> {
    let run = |id, expected, actual| ExampleRun { id, expected, actual };
    vec![
        run("2.2", include_str!("../data/golden/example_2_2.txt"), example_2_2()),
        run("2.3", include_str!("../data/golden/example_2_3.txt"), example_2_3()),
        run("2.4", include_str!("../data/golden/example_2_4.txt"), example_2_4()),
        run("4.1", include_str!("../data/golden/example_4_1.txt"), example_4_1()),
        run("7.1", include_str!("../data/golden/example_7_1.txt"), example_7_1()),
        run("7.2", include_str!("../data/golden/example_7_2.txt"), example_7_2()),
        run("7.3", include_str!("../data/golden/example_7_3.txt"), example_7_3()),
    ]
}

/// The dinner-scenario model shipped with the crate.
pub fn dinner_model() -> PreferenceModel {
    read_document(data::DINNER_MODEL)
        .expect("bundled dinner model parses")
        .to_preference_model()
        .expect("bundled dinner model validates")
}

fn formula(chain: &Chain, text: &str) -> Formula {
    parse(text, chain).expect("bundled formula parses")
}

fn fuzzy_cells(chain: &Chain, rel: &FuzzyRelation) -> Vec<Vec<String>> {
    (0..rel.size())
        .map(|u| {
            (0..rel.size()).map(|v| chain.label(rel.get(u, v)).to_string()).collect()
        })
        .collect()
}

fn example_2_2() -> String {
    let m = dinner_model();
    let table =
        render::matrix("P", m.worlds(), &fuzzy_cells(m.chain(), m.relation()));
    format!("example 2.2: a graded preference relation over four dinner plans\n\n{table}")
}

fn example_2_3() -> String {
    let m = dinner_model();
    let chain = m.chain();
    let indifference =
        render::matrix("P~", m.worlds(), &fuzzy_cells(chain, &m.relation().indifference()));
    let strict =
        render::matrix("P<", m.worlds(), &fuzzy_cells(chain, &m.relation().strict_part()));
    format!(
        "example 2.3: indifference and strict part of the dinner relation\n\n\
         {indifference}\n{strict}"
    )
}

fn example_2_4() -> String {
    let m = read_document(data::SCALE_MODEL)
        .expect("bundled scale model parses")
        .to_preference_model()
        .expect("bundled scale model validates");
    let chain = m.chain();
    let b = chain.element("b").expect("the scale has a middle element");
    let table = render::matrix("P", m.worlds(), &fuzzy_cells(chain, m.relation()));
    let cut_then_strict = m
        .relation()
        .strict_of_cut(b)
        .expect("the middle element is positive");
    let strict_then_cut = m.relation().cut_of_strict(b);
    format!(
        "example 2.4: cutting and strictening do not commute\n\n{table}\n\
         (P_b)^< = {}\n(P^<)_b = {}\n",
        render::pair_set(m.worlds(), &cut_then_strict),
        render::pair_set(m.worlds(), &strict_then_cut),
    )
}

fn example_4_1() -> String {
    let m = dinner_model();
    let chain = m.chain();
    let light = formula(chain, LIGHT);
    let hearty = formula(chain, HEARTY);
    let rows: Vec<(String, Vec<String>)> =
        [("l", &light, false), ("h", &hearty, false), ("l", &light, true), ("h", &hearty, true)]
            .into_iter()
            .map(|(name, f, diamond)| {
                let (label, f) = if diamond {
                    (format!("dia {name}"), f.clone().fuzzy_dia())
                } else {
                    (name.to_string(), f.clone())
                };
                let values = m.eval_all(&f).expect("bundled formulas evaluate");
                (label, values.iter().map(|&v| chain.label(v).to_string()).collect())
            })
            .collect();
    format!(
        "example 4.1: graded possibility over the dinner model\n\n\
         l := {}\nh := {}\n\n{}",
        print(&light, chain),
        print(&hearty, chain),
        render::table("", m.worlds(), &rows),
    )
}

fn degrees(
    m: &PreferenceModel,
    statements: &[(PrefQuantifier, &Formula, &Formula, Option<&Formula>)],
) -> String {
    statements
        .iter()
        .map(|&(quantifier, phi, psi, context)| {
            let degree = eval_preference(m, quantifier, false, phi, psi, context)
                .expect("bundled statements evaluate");
            let mut line =
                render::preference_line(m.chain(), quantifier, false, phi, psi, context, degree);
            line.push('\n');
            line
        })
        .collect()
}

fn example_7_1() -> String {
    use PrefQuantifier::{ExistsExists as EE, ForallExists as AE};
    let m = dinner_model();
    let chain = m.chain();
    let f = formula(chain, "f");
    let meat = formula(chain, "m");
    let bm = formula(chain, "b & m");
    let bf = formula(chain, "b & f");
    let lines = degrees(
        &m,
        &[
            (AE, &f, &meat, None),
            (AE, &meat, &f, None),
            (EE, &f, &meat, None),
            (EE, &meat, &f, None),
            (AE, &bm, &bf, None),
        ],
    );
    format!("example 7.1: global preference degrees between crisp menus\n\n{lines}")
}

fn example_7_2() -> String {
    use PrefQuantifier::ForallExists as AE;
    let m = dinner_model();
    let chain = m.chain();
    let light = formula(chain, LIGHT);
    let hearty = formula(chain, HEARTY);
    let lines = degrees(&m, &[(AE, &light, &hearty, None), (AE, &hearty, &light, None)]);
    format!(
        "example 7.2: preference between the fuzzy menus\n\n\
         l := {}\nh := {}\n\n{lines}",
        print(&light, chain),
        print(&hearty, chain),
    )
}

fn example_7_3() -> String {
    use PrefQuantifier::ForallExists as AE;
    let m = dinner_model();
    let chain = m.chain();
    let beach = formula(chain, "b");
    let light = formula(chain, LIGHT);
    let hearty = formula(chain, HEARTY);
    let rows: Vec<(String, Vec<String>)> = [&hearty, &light]
        .into_iter()
        .map(|f| {
            let seen = beach.clone().and(f.clone()).fuzzy_dia();
            let values = m.eval_all(&seen).expect("bundled formulas evaluate");
            (
                print(&seen, chain),
                values.iter().map(|&v| chain.label(v).to_string()).collect(),
            )
        })
        .collect();
    let lines = degrees(
        &m,
        &[(AE, &light, &hearty, Some(&beach)), (AE, &hearty, &light, Some(&beach))],
    );
    format!(
        "example 7.3: the same preferences in the beach context\n\n\
         l := {}\nh := {}\n\n{}\n{lines}",
        print(&light, chain),
        print(&hearty, chain),
        render::table("", m.worlds(), &rows),
    )
}
