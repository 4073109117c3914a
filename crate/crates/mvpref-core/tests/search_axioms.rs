//! Interdefinability of the modal families and countermodels to corrupted
//! axiom schemas, via bounded search.  Two formulas agree at every world of
//! every model in a class exactly when their biconditional is valid there,
//! so each desugaring is checked as a validity within bounds.

mod common;

use std::collections::BTreeMap;

use mvpref_core::lattice::{make_godel, make_lukasiewicz};
use mvpref_core::relation::FuzzyRelation;
use mvpref_core::search::{is_valid_bounded, ModelClass, SearchBounds, Verdict};
use mvpref_core::syntax::{
    self, desugar_box_from_dia, desugar_cuts_via_delta, desugar_dia_from_box,
    desugar_graded_from_cuts,
};
use mvpref_core::{Chain, Formula, PreferenceModel};

/// A two-world preference model with P(u,v) = `uv`, P(v,u) = `vu`, and the
/// variable p taking `p_vals` at (u, v).
fn preference_two_worlds(chain: &Chain, uv: &str, vu: &str, p_vals: &[&str]) -> PreferenceModel {
    let e = |l: &str| chain.element(l).unwrap();
    let entries = vec![chain.top(), e(uv), e(vu), chain.top()];
    let relation = FuzzyRelation::new(2, entries).unwrap();
    let valuation =
        BTreeMap::from([("p".to_string(), p_vals.iter().map(|l| e(l)).collect::<Vec<_>>())]);
    PreferenceModel::new(
        chain.clone(),
        vec!["u".to_string(), "v".to_string()],
        relation,
        valuation,
    )
    .unwrap()
}

fn exhaustive(chain: &Chain, class: ModelClass, max_worlds: usize) -> SearchBounds {
    let mut b = SearchBounds::new(chain.clone());
    b.model_class = class;
    b.max_worlds = max_worlds;
    b.variables = Vec::new(); // the formula's own variables suffice
    b
}

fn random_only(chain: &Chain, class: ModelClass, max_worlds: usize, samples: usize) -> SearchBounds {
    let mut b = exhaustive(chain, class, max_worlds);
    b.enumerate_exhaustively = false;
    b.random_samples = samples;
    b.seed = 0xC0FFEE;
    b
}

fn assert_equivalent(f: &Formula, g: &Formula, bounds: &SearchBounds, what: &str) {
    // e(v, f ↔ g) = 1 iff e(v, f) = e(v, g): the biconditional is the
    // product of the two residuals, and both are 1 exactly on equality.
    let iff = f.clone().iff(g.clone());
    match is_valid_bounded(&iff, bounds).expect("search within budget") {
        Verdict::ValidWithinBounds => {}
        Verdict::CountermodelFound { model, world } => {
            let left = model.eval_all(f).unwrap()[world];
            let right = model.eval_all(g).unwrap()[world];
            panic!(
                "{what}: values diverge at world {world}: {} vs {}",
                model.chain().label(left),
                model.chain().label(right)
            );
        }
    }
}

fn fuzzy_formulas(chain: &Chain) -> Vec<Formula> {
    let parse = |s: &str| syntax::parse(s, chain).unwrap();
    vec![
        parse("dia p"),
        parse("box p"),
        parse("box dia p"),
        parse("dia (p -> box p)"),
        parse("box (p & dia p)"),
    ]
}

fn graded_formulas(chain: &Chain) -> Vec<Formula> {
    let coatom = chain.label(chain.coatom()).to_string();
    let parse = |s: &str| syntax::parse(s, chain).unwrap();
    vec![
        parse(&format!("dia({coatom}) p")),
        parse("box(1) p"),
        parse(&format!("box({coatom}) dia(1) p")),
    ]
}

fn strict_formulas(chain: &Chain) -> Vec<Formula> {
    let coatom = chain.label(chain.coatom()).to_string();
    let parse = |s: &str| syntax::parse(s, chain).unwrap();
    vec![
        parse("sdia p"),
        parse("sbox p"),
        parse(&format!("sbox({coatom}) p")),
        parse("sdia(1) (p & sbox(1) p)"),
    ]
}

#[test]
fn diamonds_define_boxes_and_vice_versa_exhaustively() {
    let chain = make_lukasiewicz(3).unwrap();
    let bounds = exhaustive(&chain, ModelClass::GeneralFuzzy, 2);
    for f in fuzzy_formulas(&chain).iter().chain(graded_formulas(&chain).iter()) {
        assert_equivalent(f, &desugar_dia_from_box(f, &chain), &bounds, "dia-from-box");
        assert_equivalent(f, &desugar_box_from_dia(f, &chain), &bounds, "box-from-dia");
    }
    // Strict modalities live on preference models only.
    let bounds = exhaustive(&chain, ModelClass::Preference, 2);
    for f in strict_formulas(&chain) {
        assert_equivalent(&f, &desugar_dia_from_box(&f, &chain), &bounds, "sdia-from-sbox");
        assert_equivalent(&f, &desugar_box_from_dia(&f, &chain), &bounds, "sbox-from-sdia");
    }
}

#[test]
fn interdefinability_survives_random_larger_models() {
    for chain in [make_lukasiewicz(5).unwrap(), make_godel(4).unwrap()] {
        let bounds = random_only(&chain, ModelClass::GeneralFuzzy, 4, 60);
        for f in fuzzy_formulas(&chain) {
            assert_equivalent(&f, &desugar_dia_from_box(&f, &chain), &bounds, "dia-from-box");
            assert_equivalent(&f, &desugar_box_from_dia(&f, &chain), &bounds, "box-from-dia");
        }
        let bounds = random_only(&chain, ModelClass::Preference, 4, 60);
        for f in strict_formulas(&chain) {
            assert_equivalent(&f, &desugar_dia_from_box(&f, &chain), &bounds, "sdia-from-sbox");
        }
    }
}

#[test]
fn fuzzy_modalities_aggregate_their_graded_cuts() {
    let chain = make_lukasiewicz(3).unwrap();
    let bounds = exhaustive(&chain, ModelClass::Preference, 2);
    for f in fuzzy_formulas(&chain).iter().chain(strict_formulas(&chain).iter()) {
        assert_equivalent(f, &desugar_graded_from_cuts(f, &chain), &bounds, "graded-from-cuts");
    }
    let bounds = random_only(&chain, ModelClass::Preference, 4, 80);
    for f in fuzzy_formulas(&chain) {
        assert_equivalent(&f, &desugar_graded_from_cuts(&f, &chain), &bounds, "graded-from-cuts");
    }
}

#[test]
fn delta_characterises_the_weak_graded_boxes() {
    let chain = make_lukasiewicz(3).unwrap();
    let bounds = exhaustive(&chain, ModelClass::Preference, 2);
    for f in graded_formulas(&chain) {
        assert_equivalent(&f, &desugar_cuts_via_delta(&f, &chain), &bounds, "cuts-via-delta");
    }
    let bounds = random_only(&chain, ModelClass::Preference, 4, 80);
    for f in graded_formulas(&chain) {
        assert_equivalent(&f, &desugar_cuts_via_delta(&f, &chain), &bounds, "cuts-via-delta");
    }
}

#[test]
fn the_delta_characterisation_of_strict_boxes_lands_on_the_wrong_cut_order() {
    // Δ thresholds the fuzzy ◇^< aggregate, so the characterisation computes
    // the meet of φ over (P^<)_b — the cut of the strict part — while
    // sbox(b) is the meet over (P_b)^< — the strict part of the cut.  The
    // two differ, and bounded search finds the smallest separating model.
    let chain = make_lukasiewicz(3).unwrap();
    let half = chain.element("0.5").unwrap();
    let p = Formula::var("p");
    let f = p.clone().sbox_at(half);
    let g = desugar_cuts_via_delta(&f, &chain);

    let bounds = exhaustive(&chain, ModelClass::Preference, 2);
    let verdict = is_valid_bounded(&f.clone().iff(g.clone()), &bounds).unwrap();
    let Verdict::CountermodelFound { model, world } = verdict else {
        panic!("the strict Δ-characterisation should be refutable");
    };
    let left = model.eval_all(&f).unwrap()[world];
    let right = model.eval_all(&g).unwrap()[world];
    assert_ne!(left, right);

    // Hand-built witness: P(u,v) = 1, P(v,u) = 0.5 puts (u,v) into the cut
    // of the strict part at level 0.5 but not into the strict part of the
    // 0.5-cut, so with p(v) = 0 the box reads 1 and the Δ-form reads 0.
    let witness = preference_two_worlds(&chain, "1", "0.5", &["1", "0"]);
    assert_eq!(witness.eval(0, &f).unwrap(), chain.top());
    assert_eq!(witness.eval(0, &g).unwrap(), chain.bottom());

    // On crisp preference models the two cut orders coincide and the
    // characterisation is exact.
    let crisp = preference_two_worlds(&chain, "1", "0", &["1", "0"]);
    for formula in strict_formulas(&chain) {
        let desugared = desugar_cuts_via_delta(&formula, &chain);
        assert_eq!(
            crisp.eval_all(&formula).unwrap(),
            crisp.eval_all(&desugared).unwrap(),
            "crisp agreement for {}",
            syntax::print(&formula, &chain)
        );
    }
}

#[test]
fn corrupting_the_nesting_axiom_yields_a_countermodel() {
    // Sound: □_a φ → □_b φ for a ≤ b (higher cuts are smaller, boxes grow).
    // Corrupted (reversed): □_1 p → □_{0.5} p must fail on some preorder.
    let chain = make_lukasiewicz(3).unwrap();
    let half = chain.element("0.5").unwrap();
    let p = Formula::var("p");

    let sound = p.clone().box_at(half).imp(p.clone().box_at(chain.top()));
    let bounds = exhaustive(&chain, ModelClass::Preference, 2);
    assert!(is_valid_bounded(&sound, &bounds).unwrap().is_valid());

    let corrupted = p.clone().box_at(chain.top()).imp(p.clone().box_at(half));
    match is_valid_bounded(&corrupted, &bounds).unwrap() {
        Verdict::ValidWithinBounds => panic!("corrupted nesting should fail"),
        Verdict::CountermodelFound { model, world } => {
            let value = model.eval_all(&corrupted).unwrap()[world];
            assert_ne!(value, chain.top(), "the countermodel must actually refute");
        }
    }
}

#[test]
fn corrupting_the_first_interaction_axiom_yields_a_countermodel() {
    // Sound: □^<_b φ → □_a □^<_b φ for b ≤ a.  Corrupted: levels with a < b.
    let chain = make_lukasiewicz(3).unwrap();
    let half = chain.element("0.5").unwrap();
    let top = chain.top();
    let p = Formula::var("p");

    let sound = p.clone().sbox_at(half).imp(p.clone().sbox_at(half).box_at(top));
    let bounds = exhaustive(&chain, ModelClass::Preference, 2);
    assert!(is_valid_bounded(&sound, &bounds).unwrap().is_valid());

    let corrupted = p.clone().sbox_at(top).imp(p.clone().sbox_at(top).box_at(half));
    match is_valid_bounded(&corrupted, &bounds).unwrap() {
        Verdict::ValidWithinBounds => panic!("corrupted interaction should fail"),
        Verdict::CountermodelFound { model, world } => {
            let value = model.eval_all(&corrupted).unwrap()[world];
            assert_ne!(value, chain.top());
        }
    }
}
