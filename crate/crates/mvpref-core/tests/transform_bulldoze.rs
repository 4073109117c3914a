//! Bulldozing a layered model with several clusters per level and a nested
//! cluster pair across levels: structural guarantees of the output and
//! preservation of depth-bounded formulas at the index-0 copies.

mod common;

use std::collections::BTreeMap;

use mvpref_core::lattice::make_lukasiewicz;
use mvpref_core::relation::CrispRelation;
use mvpref_core::transform::{bulldoze, to_preference_model, TransformError};
use mvpref_core::LayeredModel;

use common::parse;

/// Five worlds v, w, x, y, z over the three-element chain.
///
/// Strict level 1 has the cluster {v, w}; strict level 0.5 has the clusters
/// {v, w, x} (containing the level-1 cluster — the nested pair) and {y, z}.
/// Weak layers are reflexive closures of the strict ones, with level 0
/// universal.
fn clustered_model() -> LayeredModel {
    let chain = make_lukasiewicz(3).unwrap();
    let half = chain.element("0.5").unwrap();
    let top = chain.top();
    let bottom = chain.bottom();
    let worlds: Vec<String> = ["v", "w", "x", "y", "z"].iter().map(|s| s.to_string()).collect();

    let clique = |members: &[usize]| -> Vec<(usize, usize)> {
        members.iter().flat_map(|&a| members.iter().map(move |&b| (a, b))).collect()
    };
    let mut half_pairs = clique(&[0, 1, 2]);
    half_pairs.extend(clique(&[3, 4]));
    let s_half = CrispRelation::from_pairs(5, &half_pairs);
    let s_top = CrispRelation::from_pairs(5, &clique(&[0, 1]));

    let weak = BTreeMap::from([
        (bottom, CrispRelation::universal(5)),
        (half, s_half.reflexive_closure()),
        (top, s_top.reflexive_closure()),
    ]);
    let strict = BTreeMap::from([(half, s_half), (top, s_top)]);

    let el = |i: usize| chain.element_at(i).unwrap();
    let valuation = BTreeMap::from([
        ("p".to_string(), vec![el(2), el(0), el(1), el(0), el(2)]),
        ("q".to_string(), vec![el(0), el(2), el(2), el(1), el(0)]),
    ]);
    LayeredModel::new(chain, worlds, weak, strict, valuation).unwrap()
}

#[test]
fn the_cluster_structure_is_detected_with_parents() {
    let lm = clustered_model();
    let half = lm.chain().element("0.5").unwrap();
    let top = lm.chain().top();

    assert_eq!(lm.find_clusters(half), vec![vec![0, 1, 2], vec![3, 4]]);
    assert_eq!(lm.find_clusters(top), vec![vec![0, 1]]);

    // Clusters make this model irreducible to a fuzzy preorder.
    assert!(lm.check_strict_part_condition().is_err());
    assert!(matches!(to_preference_model(&lm), Err(TransformError::NotStrictPart(_))));

    let (_, report) = bulldoze(&lm, 2).unwrap();
    assert_eq!(report.copy_count, 2);
    assert_eq!(report.levels.len(), 2);
    // Level 0.5 clusters are roots; the level-1 cluster sits inside the
    // first 0.5-cluster.
    assert_eq!(report.levels[0].clusters, vec![vec![0, 1, 2], vec![3, 4]]);
    assert_eq!(report.levels[0].parent, vec![None, None]);
    assert_eq!(report.levels[1].clusters, vec![vec![0, 1]]);
    assert_eq!(report.levels[1].parent, vec![Some(0)]);
    // Every world belongs to some cluster, so all five are copied.
    assert_eq!(report.copied_worlds, vec![0, 1, 2, 3, 4]);
    assert_eq!(report.origins.len(), 10);
}

#[test]
fn the_output_is_a_cluster_free_layered_preorder_family() {
    let lm = clustered_model();
    for k in [1, 2, 3] {
        let (out, _) = bulldoze(&lm, k).unwrap();
        assert_eq!(out.size(), 5 * k);

        // Strict layers: irreflexive, transitive, nested, and exactly the
        // strict parts of the weak layers.
        for (_, rel) in out.strict() {
            assert!(rel.is_irreflexive());
            assert!(rel.is_transitive());
        }
        assert_eq!(out.check_strict_nesting(), Ok(()));
        assert_eq!(out.check_strict_part_condition(), Ok(()));

        // No clusters remain at any positive level (k = 1 linearises by
        // cluster order alone).
        for b in out.chain().positive_elements() {
            assert!(out.find_clusters(b).is_empty(), "cluster left at K = {k}");
        }

        // With the strict-part condition and a universal level 0, the
        // output is the cut family of a genuine preference model.
        let back = to_preference_model(&out).unwrap();
        assert_eq!(back.size(), 5 * k);
    }
}

#[test]
fn copies_of_one_cluster_are_strictly_linearly_ordered() {
    let lm = clustered_model();
    let (out, _) = bulldoze(&lm, 2).unwrap();
    let top = lm.chain().top();
    let half = lm.chain().element("0.5").unwrap();
    let xi = |name: &str| out.world_index(name).unwrap();

    // Level 1: v@0 < w@0 < v@1 < w@1 — copy index first, cluster order next.
    let s = &out.strict()[&top];
    let order = ["v@0", "w@0", "v@1", "w@1"];
    for i in 0..order.len() {
        for j in 0..order.len() {
            assert_eq!(s.get(xi(order[i]), xi(order[j])), i < j);
        }
    }
    // x copies never appear at level 1 (x is only in the 0.5-cluster).
    assert!(!s.get(xi("v@0"), xi("x@0")));
    assert!(!s.get(xi("x@0"), xi("v@0")));

    // Level 0.5: the nested order within {v, w, x} extends the level-1
    // order; the second cluster {y, z} is ordered independently.
    let s = &out.strict()[&half];
    let order = ["v@0", "w@0", "x@0", "v@1", "w@1", "x@1"];
    for i in 0..order.len() {
        for j in 0..order.len() {
            assert_eq!(s.get(xi(order[i]), xi(order[j])), i < j);
        }
    }
    let order = ["y@0", "z@0", "y@1", "z@1"];
    for i in 0..order.len() {
        for j in 0..order.len() {
            assert_eq!(s.get(xi(order[i]), xi(order[j])), i < j);
        }
    }
    // Clusters at 0.5 stay unrelated.
    assert!(!s.get(xi("v@0"), xi("y@0")));
    assert!(!s.get(xi("y@0"), xi("v@0")));
}

#[test]
fn depth_bounded_formulas_survive_at_the_index_zero_copies() {
    // Polarity-uniform formulas of modal depth d keep their source values
    // at the index-0 copies when K = d + 1.  Depth 1 needs no polarity
    // caveat at all; at depth 2 the nested modality must sit on the
    // monotone side of the outer one (see the transform module docs).
    let lm = clustered_model();
    let chain = lm.chain().clone();

    for (depth, text) in [
        (1usize, "box(1) p"),
        (1, "sdia(0.5) q"),
        (1, "dia(0.5) (p & q)"),
        (1, "sbox(1) p"),
        (1, "dia p | sdia q"),
        (1, "~ dia(0.5) p"),
        (2, "box(1) box(0.5) p"),
        (2, "box(0.5) sbox(0.5) q"),
        (2, "sdia(0.5) sdia(1) p"),
        (2, "dia(1) dia(1) q"),
        (2, "dia dia (p | q)"),
        (2, "box(0.5) (p -> box(1) q)"),
        (2, "box(0.5) (dia(1) p -> q)"),
        (2, "sdia(1) p & box(1) box(1) q"),
    ] {
        let f = parse(&chain, text);
        let k = depth + 1;
        let (out, report) = bulldoze(&lm, k).unwrap();
        let source = lm.eval_all(&f).unwrap();
        let bulldozed = out.eval_all(&f).unwrap();
        for (oi, &(src, copy)) in report.origins.iter().enumerate() {
            if copy == 0 {
                assert_eq!(
                    bulldozed[oi], source[src],
                    "{text} at {} with K = {k}",
                    out.worlds()[oi]
                );
            }
        }
    }
}

#[test]
fn polarity_alternation_defeats_every_finite_copy_count() {
    // □◇ nesting is *not* preserved: a weak step from v@0 reaches the last
    // copy of w directly, and the last copy's strict successors are poorer
    // than w's own cluster, so the inner diamond under-reports there and
    // the outer meet drops below the source value.  Growing K moves the
    // last copy but never removes it.
    let lm = clustered_model();
    let chain = lm.chain().clone();
    let f = parse(&chain, "box sdia (p -> q)");
    let half = chain.element("0.5").unwrap();

    let source = lm.eval_all(&f).unwrap();
    assert_eq!(source[0], chain.top(), "source value at v");

    for k in [2, 3, 5, 8] {
        let (out, _) = bulldoze(&lm, k).unwrap();
        let bulldozed = out.eval_all(&f).unwrap();
        let v0 = out.world_index("v@0").unwrap();
        assert_eq!(bulldozed[v0], half, "defect is stable across K = {k}");
    }
}

#[test]
fn global_modalities_see_every_copy() {
    // A/E quantify over all worlds, so they are *not* expected to be
    // invariant in general; but when the source value is constant they are.
    let lm = clustered_model();
    let chain = lm.chain().clone();
    let (out, _) = bulldoze(&lm, 2).unwrap();

    let f = parse(&chain, "E p");
    let source = lm.eval_all(&f).unwrap();
    let bulldozed = out.eval_all(&f).unwrap();
    assert!(source.iter().all(|&v| v == source[0]));
    assert!(bulldozed.iter().all(|&v| v == source[0]));
}

#[test]
fn a_mixed_layer_with_an_uncopied_world_keeps_its_name() {
    // Add a sixth world outside every cluster: it must survive un-renamed.
    let lm = clustered_model();
    let chain = lm.chain().clone();
    let half = chain.element("0.5").unwrap();
    let top = chain.top();
    let bottom = chain.bottom();

    let extend = |rel: &CrispRelation, extra: &[(usize, usize)]| {
        let mut pairs = rel.pairs();
        pairs.extend_from_slice(extra);
        CrispRelation::from_pairs(6, &pairs)
    };
    // The new world 5 sits strictly below the {y, z} cluster at level 0.5.
    let s_half = extend(&lm.strict()[&half], &[(3, 5), (4, 5)]);
    let s_top = extend(&lm.strict()[&top], &[]);
    let weak = BTreeMap::from([
        (bottom, CrispRelation::universal(6)),
        (half, s_half.reflexive_closure()),
        (top, s_top.reflexive_closure()),
    ]);
    let strict = BTreeMap::from([(half, s_half), (top, s_top)]);
    let mut valuation = lm.valuation().clone();
    for row in valuation.values_mut() {
        row.push(chain.element_at(1).unwrap());
    }
    let mut worlds = lm.worlds().to_vec();
    worlds.push("t".to_string());
    let big = LayeredModel::new(chain.clone(), worlds, weak, strict, valuation).unwrap();

    let (out, report) = bulldoze(&big, 2).unwrap();
    assert_eq!(report.copied_worlds, vec![0, 1, 2, 3, 4]);
    assert_eq!(out.size(), 11);
    assert!(out.worlds().contains(&"t".to_string()));
    // The inherited edge from the cluster to t persists for every copy.
    let s = &out.strict()[&half];
    let xi = |name: &str| out.world_index(name).unwrap();
    for copy in ["y@0", "y@1", "z@0", "z@1"] {
        assert!(s.get(xi(copy), xi("t")));
    }
    assert!(!s.get(xi("t"), xi("y@0")));
    assert_eq!(out.check_strict_part_condition(), Ok(()));
    assert_eq!(out.check_strict_nesting(), Ok(()));
}

#[test]
fn element_zero_never_indexes_a_strict_layer() {
    let lm = clustered_model();
    assert!(lm.strict().get(&lm.chain().bottom()).is_none());
}
