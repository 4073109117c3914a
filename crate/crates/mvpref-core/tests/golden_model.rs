//! Model-level golden values for the dinner scenario: evaluation of the
//! fuzzy meal formulas and their ◇-images against the frozen tables.

mod common;

use common::*;

#[test]
fn the_meal_formulas_evaluate_to_the_frozen_rows() {
    let model = travel_model();
    let chain = model.chain().clone();

    let l = parse(&chain, FORMULA_L);
    let h = parse(&chain, FORMULA_H);

    assert_eq!(labels(&chain, &model.eval_all(&l).unwrap()), EVAL_L.to_vec());
    assert_eq!(labels(&chain, &model.eval_all(&h).unwrap()), EVAL_H.to_vec());
}

#[test]
fn diamond_rows_match_the_frozen_tables() {
    let model = travel_model();
    let chain = model.chain().clone();

    let dia_l = parse(&chain, FORMULA_L).fuzzy_dia();
    let dia_h = parse(&chain, FORMULA_H).fuzzy_dia();

    assert_eq!(labels(&chain, &model.eval_all(&dia_l).unwrap()), DIA_L.to_vec());
    assert_eq!(labels(&chain, &model.eval_all(&dia_h).unwrap()), DIA_H.to_vec());
}

#[test]
fn contextualised_diamond_rows_match_the_frozen_tables() {
    let model = travel_model();
    let chain = model.chain().clone();

    let b = parse(&chain, "b");
    let dia_bh = b.clone().and(parse(&chain, FORMULA_H)).fuzzy_dia();
    let dia_bl = b.and(parse(&chain, FORMULA_L)).fuzzy_dia();

    assert_eq!(labels(&chain, &model.eval_all(&dia_bh).unwrap()), DIA_B_AND_H.to_vec());
    assert_eq!(labels(&chain, &model.eval_all(&dia_bl).unwrap()), DIA_B_AND_L.to_vec());
}

#[test]
fn reflexivity_bounds_the_diamond_from_below() {
    // e(v, ◇φ) ≥ e(v, φ) on every preference model: P(v,v) = 1.
    let model = travel_model();
    let chain = model.chain().clone();
    for text in [FORMULA_L, FORMULA_H, "f", "m", "b & f"] {
        let f = parse(&chain, text);
        let plain = model.eval_all(&f).unwrap();
        let dia = model.eval_all(&f.fuzzy_dia()).unwrap();
        for (p, d) in plain.iter().zip(dia.iter()) {
            assert!(chain.leq(*p, *d), "◇ must dominate at {text}");
        }
    }
}

#[test]
fn box_and_diamond_respect_the_galois_inequalities() {
    // □φ ≤ φ ≤ ◇φ world-wise (reflexivity), and A φ ≤ □φ, ◇φ ≤ E φ.
    let model = travel_model();
    let chain = model.chain().clone();
    let f = parse(&chain, FORMULA_L);

    let boxed = model.eval_all(&f.clone().fuzzy_box()).unwrap();
    let plain = model.eval_all(&f).unwrap();
    let dia = model.eval_all(&f.clone().fuzzy_dia()).unwrap();
    let univ = model.eval_all(&f.clone().univ()).unwrap();
    let exist = model.eval_all(&f.exist()).unwrap();

    for i in 0..4 {
        assert!(chain.leq(boxed[i], plain[i]));
        assert!(chain.leq(plain[i], dia[i]));
        assert!(chain.leq(univ[i], boxed[i]));
        assert!(chain.leq(dia[i], exist[i]));
    }
    // A and E are constant rows.
    assert!(univ.iter().all(|&v| v == univ[0]));
    assert!(exist.iter().all(|&v| v == exist[0]));
}
