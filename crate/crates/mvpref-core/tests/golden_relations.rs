//! Relation-level golden values for the dinner scenario and the small
//! order-of-operations example: strict part, indifference, cuts, and the
//! cut-versus-strict interplay.

mod common;

use common::*;

#[test]
fn the_dinner_relation_is_a_fuzzy_preorder() {
    let chain = chain11();
    let p = travel_relation(&chain);
    assert!(p.is_reflexive(&chain));
    assert!(p.is_meet_transitive());
}

#[test]
fn the_strict_part_matches_the_frozen_table() {
    let chain = chain11();
    let strict = travel_relation(&chain).strict_part();
    let expected: Vec<Vec<String>> =
        P_STRICT.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
    assert_eq!(relation_labels(&chain, &strict), expected);
}

#[test]
fn the_indifference_part_matches_the_frozen_table() {
    let chain = chain11();
    let indiff = travel_relation(&chain).indifference();
    let expected: Vec<Vec<String>> =
        P_INDIFF.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
    assert_eq!(relation_labels(&chain, &indiff), expected);

    // Indifference is symmetric and reflexive by construction.
    for u in 0..4 {
        assert_eq!(indiff.get(u, u), chain.top());
        for v in 0..4 {
            assert_eq!(indiff.get(u, v), indiff.get(v, u));
        }
    }
}

#[test]
fn cuts_of_the_dinner_relation_are_the_expected_preorders() {
    let chain = chain11();
    let p = travel_relation(&chain);

    // P_{0.8}: every pair with degree at least 0.8.
    let cut = p.cut(el(&chain, "0.8"));
    let mut expected = vec![(0, 0), (1, 1), (2, 2), (3, 3)];
    expected.extend([(1, 0), (1, 3), (2, 0)]);
    expected.sort_unstable();
    assert_eq!(cut.pairs(), expected);
    assert!(cut.is_reflexive());
    assert!(cut.is_transitive());

    // P_{0.5} keeps everything, P_1 only the diagonal.
    assert_eq!(p.cut(el(&chain, "0.5")).pairs().len(), 16);
    assert_eq!(p.cut(chain.top()).pairs(), vec![(0, 0), (1, 1), (2, 2), (3, 3)]);
}

#[test]
fn strict_cuts_agree_with_the_strict_table() {
    let chain = chain11();
    let p = travel_relation(&chain);
    let strict = p.strict_part();

    // Frozen sizes per positive level 0.1, …, 1.  Every entry of P is at
    // least 0.5, so (P_b)^< is empty up to that level even though the strict
    // part has six positive pairs; from 0.6 on the two notions coincide.
    let of_cut_sizes = [0, 0, 0, 0, 0, 6, 4, 3, 0, 0];
    let of_strict_sizes = [6, 6, 6, 6, 6, 6, 4, 3, 0, 0];

    for (i, b) in chain.positive_elements().enumerate() {
        // (P_b)^<  — cut first, then discard the symmetric pairs.
        let of_cut = p.strict_of_cut(b).expect("positive level");
        // (P^<)_b  — strict part first, then cut.
        let of_strict = p.cut_of_strict(b);

        assert_eq!(of_cut.pairs().len(), of_cut_sizes[i], "(P_b)^< at {}", chain.label(b));
        assert_eq!(of_strict.pairs().len(), of_strict_sizes[i], "(P^<)_b at {}", chain.label(b));

        // The first is always contained in the second.
        for (u, v) in of_cut.pairs() {
            assert!(of_strict.get(u, v), "(P_b)^< ⊆ (P^<)_b failed at {b:?} {u} {v}");
        }
        if of_cut_sizes[i] == of_strict_sizes[i] {
            assert_eq!(of_cut.pairs(), of_strict.pairs(), "level {}", chain.label(b));
        }
    }

    // Pointwise, P^<(u,v) is the largest positive b with (u,v) ∈ (P^<)_b.
    for u in 0..4 {
        for v in 0..4 {
            let best = chain
                .positive_elements()
                .filter(|&b| p.cut_of_strict(b).get(u, v))
                .max_by(|a, c| if chain.leq(*a, *c) { core::cmp::Ordering::Less } else { core::cmp::Ordering::Greater });
            assert_eq!(strict.get(u, v), best.unwrap_or(chain.bottom()));
        }
    }
}

#[test]
fn cut_level_zero_is_degenerate_for_the_strict_reading() {
    let chain = chain11();
    let p = travel_relation(&chain);
    assert!(p.strict_of_cut(chain.bottom()).is_err());
    // The plain cut at 0 is the universal relation.
    assert_eq!(p.cut(chain.bottom()).pairs().len(), 16);
}

#[test]
fn the_small_example_shows_the_order_of_operations_matters() {
    let chain = small_chain();
    let p = small_relation(&chain);
    let b = el(&chain, "b");

    let cut_then_strict = p.strict_of_cut(b).expect("positive level");
    assert_eq!(cut_then_strict.pairs(), SMALL_CUT_B_STRICT.to_vec());

    let strict_then_cut = p.cut_of_strict(b);
    assert_eq!(strict_then_cut.pairs(), SMALL_STRICT_CUT_B.to_vec());
}
