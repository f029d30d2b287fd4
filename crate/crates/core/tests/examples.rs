//! Worked examples that cross module boundaries: amalgam words acting on
//! their coset trees, classified through the tree machinery, and the
//! quasicyclic chain fed to the subtree-intersection search.

use std::sync::Arc;

use bsk_core::amalgam::Side;
use bsk_core::constructions::{ChainElement, ChainSpec, ChainTree, PruferElement};
use bsk_core::corpus::{z2z3_spec, z4z6_spec};
use bsk_core::isometry::{
    amplitude_direct, amplitude_formula, classify, culler_morgan_check, serre_lemma_check,
    Confidence, IsometryClass, SerreLemmaVerdict,
};
use bsk_core::tree::{
    ball, lazy_subtree_intersection, subtree_distance, LazyIntersection, Subtree, TreeHost,
};

#[test]
fn word_ab_acts_with_amplitude_two() {
    let spec = z2z3_spec();
    let tree = spec.bs_tree();
    let ab = spec.parse_word("A:1 B:1").unwrap();
    let auto = spec.translation(&tree, &ab);

    let window = ball(tree.as_ref(), "A|", 4);
    let (direct, witness) = amplitude_direct(&auto, &window).unwrap();
    assert_eq!(direct, 2);
    assert_eq!(witness, "A|"); // the base vertex lies on the axis

    assert_eq!(amplitude_formula(&auto, "A|", 32).unwrap(), 2);

    let report = classify(&auto, 6).unwrap();
    assert_eq!(report.confidence, Confidence::Exact);
    match report.class {
        IsometryClass::Hyperbolic { axis_window, amplitude } => {
            assert_eq!(amplitude, 2);
            assert!(axis_window.contains(&"A|".to_string()));
            assert!(axis_window.contains(&"B|".to_string()));
        }
        other => panic!("expected hyperbolic, got {other:?}"),
    }
}

#[test]
fn factor_elements_fix_only_their_base() {
    let spec = z2z3_spec();
    let tree = spec.bs_tree();
    let a = spec.translation(&tree, &spec.parse_word("A:1").unwrap());
    let report = classify(&a, 4).unwrap();
    match &report.class {
        IsometryClass::Elliptic { fixed } => {
            assert_eq!(fixed.iter().collect::<Vec<_>>(), vec!["A|"]);
        }
        other => panic!("expected elliptic, got {other:?}"),
    }
    assert_eq!(report.confidence, Confidence::Exact);
}

#[test]
fn disjoint_factor_fixed_trees_at_distance_one() {
    let spec = z2z3_spec();
    let tree = spec.bs_tree();
    let xa = Subtree::from_connected_set(std::iter::once("A|".to_string()).collect());
    let xb = Subtree::from_connected_set(std::iter::once("B|".to_string()).collect());
    let (d, bridge) = subtree_distance(tree.as_ref(), &xa, &xb, 8).unwrap();
    assert_eq!(d, 1);
    assert_eq!(bridge.vertices(), &["A|", "B|"]);

    let a = spec.translation(&tree, &spec.parse_word("A:1").unwrap());
    let b = spec.translation(&tree, &spec.parse_word("B:1").unwrap());
    let verdict = culler_morgan_check(&a, &b, 8).unwrap();
    assert_eq!((verdict.amplitude_g, verdict.amplitude_h, verdict.dist), (0, 0, 1));
    assert_eq!(verdict.amplitude_gh, 2);
    assert!(verdict.equal);
}

#[test]
fn composition_law_for_hyperbolic_and_elliptic() {
    // g = ab translates its axis by 2; h fixes a single vertex two edges off
    // that axis, so amp(gh) = 2 + 0 + 2*2
    let spec = z2z3_spec();
    let tree = spec.bs_tree();
    let g = spec.translation(&tree, &spec.parse_word("A:1 B:1").unwrap());
    let h_word = spec.parse_word("B:1 A:1 B:1 A:1 B:2").unwrap(); // w b w^-1
    let h = spec.translation(&tree, &h_word);
    let verdict = culler_morgan_check(&g, &h, 12).unwrap();
    assert_eq!(verdict.amplitude_g, 2);
    assert_eq!(verdict.amplitude_h, 0);
    assert_eq!(verdict.dist, 2);
    assert_eq!(verdict.amplitude_gh, 6);
    assert!(verdict.equal);
}

#[test]
fn serre_lemma_not_applicable_to_a_and_b() {
    let spec = z2z3_spec();
    let tree = spec.bs_tree();
    let a = spec.translation(&tree, &spec.parse_word("A:1").unwrap());
    let b = spec.translation(&tree, &spec.parse_word("B:1").unwrap());
    match serre_lemma_check(&a, &b, 8).unwrap() {
        SerreLemmaVerdict::NotApplicable { g, h, gh } => {
            assert_eq!(g, "elliptic");
            assert_eq!(h, "elliptic");
            assert_eq!(gh, "hyperbolic(2)");
        }
        other => panic!("expected not-applicable, got {other:?}"),
    }
}

#[test]
fn conjugation_carries_characteristic_subtrees() {
    let spec = z4z6_spec();
    let tree = spec.bs_tree();
    for (f_word, g_word) in
        [("B:1", "A:1"), ("A:1 B:1", "B:2"), ("B:2 A:1", "A:3"), ("A:1 B:1", "A:1")]
    {
        let f = spec.parse_word(f_word).unwrap();
        let g = spec.parse_word(g_word).unwrap();
        let conj = spec.multiply(&spec.multiply(&f, &g), &spec.inverse(&f));
        let g_auto = spec.translation(&tree, &g);
        let c_auto = spec.translation(&tree, &conj);
        let rg = classify(&g_auto, 8).unwrap();
        let rc = classify(&c_auto, 8).unwrap();
        match (&rg.class, &rc.class) {
            (IsometryClass::Elliptic { fixed: xg }, IsometryClass::Elliptic { fixed: xc }) => {
                // f(X_g) = X_{fgf^-1} on the exactly-known fixed sets
                if rg.confidence == Confidence::Exact && rc.confidence == Confidence::Exact {
                    let image: std::collections::BTreeSet<String> = xg
                        .iter()
                        .map(|v| spec.act_on_key(&f, v).unwrap())
                        .collect();
                    assert_eq!(&image, xc, "conjugating {g_word} by {f_word}");
                }
            }
            (
                IsometryClass::Hyperbolic { amplitude: ag, .. },
                IsometryClass::Hyperbolic { amplitude: ac, .. },
            ) => assert_eq!(ag, ac),
            other => panic!("class changed under conjugation: {other:?}"),
        }
    }
}

#[test]
fn chain_fixed_subtrees_share_a_tail() {
    let chain = ChainTree::new(Arc::new(ChainSpec::prufer("prufer2", 2)), 10);
    let tree = chain.tree().clone();
    let half = ChainElement::Prufer(PruferElement { num: 1, level: 1 });
    let quarter = ChainElement::Prufer(PruferElement { num: 1, level: 2 });
    let fix_half = |v: &str| chain.fixes(&half, v).unwrap_or(false);
    let fix_quarter = |v: &str| chain.fixes(&quarter, v).unwrap_or(false);
    let members: Vec<&dyn Fn(&str) -> bool> = vec![&fix_half, &fix_quarter];
    match lazy_subtree_intersection(tree.as_ref() as &dyn TreeHost, &members, 6).unwrap() {
        LazyIntersection::SharedTail { half_line, entry } => {
            // the common part follows the spine from level 2 onward
            assert_eq!(entry, vec![1, 2]);
            assert_eq!(half_line[0], "L0|0");
            assert!(half_line.len() >= 6);
        }
        other => panic!("expected a shared tail certificate, got {other:?}"),
    }
}

#[test]
fn chain_disjoint_level_zero_sets_rejected() {
    let chain = ChainTree::new(Arc::new(ChainSpec::prufer("prufer2", 2)), 10);
    let tree = chain.tree().clone();
    // two different singleton cosets at level 0 are disjoint subtrees
    let only_root = |v: &str| v == "L0|0";
    let only_other = |v: &str| v == "L0|1/2^1";
    let members: Vec<&dyn Fn(&str) -> bool> = vec![&only_root, &only_other];
    let err = lazy_subtree_intersection(tree.as_ref() as &dyn TreeHost, &members, 4).unwrap_err();
    assert_eq!(err, bsk_core::tree::TreeError::DisjointPair { i: 0, j: 1 });
}

#[test]
fn translated_edge_stabilizer_is_the_stabilizer_intersection() {
    let spec = z4z6_spec();
    let w = spec.parse_word("B:1 A:1").unwrap();
    let va = spec.act(&w, &spec.parse_vertex_key("A|").unwrap());
    let vb = spec.act(&w, &spec.parse_vertex_key("B|").unwrap());
    let edge = spec.edge_between(&va, &vb).unwrap();
    for g in spec.words_up_to(3) {
        let both = spec.stabilizes(&g, &va) && spec.stabilizes(&g, &vb);
        assert_eq!(both, edge.contains(&spec, &g), "word {}", spec.render_word(&g));
    }
    // and the named elements are exactly w C w^-1
    for c in edge.elements(&spec) {
        let pulled = spec.multiply(&spec.multiply(&spec.inverse(&w), &c), &w);
        assert!(spec.lies_in_amalgam(&pulled));
    }
}

#[test]
fn small_windows_report_horizon_limited() {
    // a deep conjugate: the characteristic subtree sits outside a radius-2
    // window, so nothing definite may be claimed there
    let spec = z2z3_spec();
    let tree = spec.bs_tree();
    let w = spec.parse_word("B:1 A:1 B:1 A:1 B:2 A:1 B:2 A:1 B:2").unwrap();
    let auto = spec.translation(&tree, &w);
    let report = classify(&auto, 2).unwrap();
    assert_eq!(report.confidence, Confidence::HorizonLimited);
    // a big enough window settles it exactly
    let report = classify(&auto, 12).unwrap();
    assert_eq!(report.confidence, Confidence::Exact);
}

#[test]
fn coset_keys_respect_metric_under_action() {
    let spec = z4z6_spec();
    let tree = spec.bs_tree();
    let w = spec.parse_word("B:1 A:1 B:2").unwrap();
    let window = ball(tree.as_ref(), "A|", 3);
    let vs: Vec<&str> = window.vertices().collect();
    for (i, &x) in vs.iter().enumerate() {
        for &y in vs.iter().skip(i + 1) {
            let before = bsk_core::tree::distance(tree.as_ref(), x, y, 16).unwrap();
            let wx = spec.act_on_key(&w, x).unwrap();
            let wy = spec.act_on_key(&w, y).unwrap();
            let after = bsk_core::tree::distance(tree.as_ref(), &wx, &wy, 32).unwrap();
            assert_eq!(before, after, "distance must be preserved from {x} / {y}");
        }
    }
}

#[test]
fn transversal_choice_does_not_change_invariants() {
    // respell the B-side transversal of the order-6 factor: cosets of {0,3}
    // may be represented by 0, 4, 5 instead of 0, 1, 2
    let standard = z4z6_spec();
    let z2 = standard.amalgamated().clone();
    let z4 = standard.factor(Side::A).clone();
    let z6 = standard.factor(Side::B).clone();
    let pa = bsk_core::group::GroupHom::new(z2.clone(), z4, vec![0, 2]).unwrap();
    let pb = bsk_core::group::GroupHom::new(z2, z6, vec![0, 3]).unwrap();
    let respelt =
        bsk_core::amalgam::AmalgamSpec::with_transversals("z4z6-alt", pa, pb, None, Some(&[0, 4, 5]))
            .unwrap();
    assert_eq!(standard.words_up_to(4).len(), respelt.words_up_to(4).len());
    let tree_a = standard.bs_tree();
    let tree_b = respelt.bs_tree();
    assert_eq!(tree_a.neighbors("A|").len(), tree_b.neighbors("A|").len());
    assert_eq!(tree_a.neighbors("B|").len(), tree_b.neighbors("B|").len());
    // the same raw word classifies identically under either spelling
    for raw in ["A:1 B:1", "B:1 A:1 B:2", "A:1 B:2 A:1 B:4", "B:4 A:3", "A:2 B:3"] {
        let wa = standard.parse_word(raw).unwrap();
        let wb = respelt.parse_word(raw).unwrap();
        let la = match standard.classify_element(&wa) {
            bsk_core::amalgam::ElementClass::Hyperbolic { translation_length, .. } => {
                translation_length
            }
            _ => 0,
        };
        let lb = match respelt.classify_element(&wb) {
            bsk_core::amalgam::ElementClass::Hyperbolic { translation_length, .. } => {
                translation_length
            }
            _ => 0,
        };
        assert_eq!(la, lb, "word {raw}");
        assert_eq!(wa.syllable_length(), wb.syllable_length(), "word {raw}");
    }
}
