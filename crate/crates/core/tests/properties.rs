//! Property tests for the structural invariants: the vertex metric, geodesic
//! symmetry, the pairwise-intersection property of subtrees, determinism of
//! lazy exploration, and the normal-form laws.

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;

use bsk_core::amalgam::Side;
use bsk_core::corpus::{z2z3_spec, z4z6_spec};
use bsk_core::graph::FiniteGraph;
use bsk_core::group::FiniteGroup;
use bsk_core::tree::{ball, distance, geodesic, subtree_intersection, FiniteTree, Subtree};

/// A random tree on n vertices from a parent array: vertex i attaches to a
/// uniformly chosen earlier vertex.
fn arb_tree(max_n: usize) -> impl Strategy<Value = FiniteTree> {
    (2..=max_n)
        .prop_flat_map(|n| proptest::collection::vec(any::<u32>(), n - 1).prop_map(move |raw| {
            let mut g = FiniteGraph::new();
            for i in 0..n {
                g.add_vertex(format!("v{i:02}")).unwrap();
            }
            for (i, r) in raw.iter().enumerate() {
                let child = i + 1;
                let parent = (*r as usize) % child;
                g.add_edge_pair(
                    format!("e{child}"),
                    format!("E{child}"),
                    &format!("v{parent:02}"),
                    &format!("v{child:02}"),
                )
                .unwrap();
            }
            FiniteTree::new(g).unwrap()
        }))
}

fn vertex_names(t: &FiniteTree) -> Vec<String> {
    t.vertices().map(str::to_string).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metric_axioms_hold((tree, picks) in arb_tree(12).prop_flat_map(|t| {
        let n = t.vertex_count();
        (Just(t), proptest::collection::vec(0..n, 3))
    })) {
        let names = vertex_names(&tree);
        let x = &names[picks[0]];
        let y = &names[picks[1]];
        let z = &names[picks[2]];
        let d = |a: &str, b: &str| distance(&tree, a, b, 64).unwrap();
        prop_assert_eq!(d(x, y), d(y, x));
        prop_assert_eq!(d(x, y) == 0, x == y);
        prop_assert!(d(x, z) <= d(x, y) + d(y, z));
    }

    #[test]
    fn geodesics_reverse((tree, picks) in arb_tree(12).prop_flat_map(|t| {
        let n = t.vertex_count();
        (Just(t), proptest::collection::vec(0..n, 2))
    })) {
        let names = vertex_names(&tree);
        let g = geodesic(&tree, &names[picks[0]], &names[picks[1]], 64).unwrap();
        let back = geodesic(&tree, &names[picks[1]], &names[picks[0]], 64).unwrap();
        let reversed = g.reversed();
        prop_assert_eq!(reversed.vertices(), back.vertices());
    }

    #[test]
    fn pairwise_intersecting_subtrees_share_a_vertex((tree, seeds) in arb_tree(10).prop_flat_map(|t| {
        let n = t.vertex_count();
        (Just(t), proptest::collection::vec((0..n, 1usize..4), 3))
    })) {
        // grow each subtree as a ball in the tree; force pairwise overlap by
        // including the whole geodesic to a shared hub
        let names = vertex_names(&tree);
        let hub = &names[0];
        let subtrees: Vec<Subtree> = seeds
            .iter()
            .map(|&(center, radius)| {
                let mut verts: BTreeSet<String> = ball(&tree, &names[center], radius)
                    .vertices()
                    .map(str::to_string)
                    .collect();
                for v in geodesic(&tree, &names[center], hub, 64).unwrap().vertices() {
                    verts.insert(v.clone());
                }
                Subtree::new(&tree, verts).unwrap()
            })
            .collect();
        let common = subtree_intersection(&subtrees).unwrap();
        prop_assert!(!common.is_empty());
        prop_assert!(common.contains(hub));
    }

    #[test]
    fn bidirectional_search_matches_naive_search((tree, picks) in arb_tree(14).prop_flat_map(|t| {
        let n = t.vertex_count();
        (Just(t), proptest::collection::vec(0..n, 2))
    })) {
        // naive single-source breadth-first distances as the oracle
        let names = vertex_names(&tree);
        let start = &names[picks[0]];
        let goal = &names[picks[1]];
        let mut dist = std::collections::BTreeMap::from([(start.clone(), 0usize)]);
        let mut queue = std::collections::VecDeque::from([start.clone()]);
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            for w in bsk_core::tree::TreeHost::neighbors(&tree, &v) {
                if !dist.contains_key(&w) {
                    dist.insert(w.clone(), d + 1);
                    queue.push_back(w);
                }
            }
        }
        let expected = dist[goal];
        prop_assert_eq!(distance(&tree, start, goal, 64).unwrap(), expected);
        // the parent-chain oracle agrees as well
        let oracle = bsk_core::tree::DistanceOracle::new(&tree, &names[0], tree.vertex_count());
        prop_assert_eq!(oracle.distance(&tree, start, goal, 64).unwrap(), expected);
        // and the geodesic it returns is a reduced path of that length
        let g = geodesic(&tree, start, goal, 64).unwrap();
        prop_assert_eq!(g.len(), expected);
        for pair in g.vertices().windows(2) {
            prop_assert!(bsk_core::tree::TreeHost::neighbors(&tree, &pair[0]).contains(&pair[1]));
        }
        for triple in g.vertices().windows(3) {
            prop_assert!(triple[0] != triple[2]);
        }
    }

    #[test]
    fn reduce_is_idempotent_and_invariant(raw in proptest::collection::vec((0..2usize, 0..6usize), 0..12)) {
        let spec = z4z6_spec();
        let letters: Vec<(Side, usize)> = raw
            .iter()
            .map(|&(side, x)| {
                let side = if side == 0 { Side::A } else { Side::B };
                (side, x % spec.factor(side).order())
            })
            .collect();
        let w = spec.reduce(&letters);
        // re-reducing the canonical spelling is a fixed point
        prop_assert_eq!(&spec.reduce(&spec.letters_of(&w)), &w);
        // and the rendered spelling parses back to the same word
        prop_assert_eq!(&spec.parse_word(&spec.render_word(&w)).unwrap(), &w);
    }

    #[test]
    fn multiplication_is_associative(raws in proptest::collection::vec((0..2usize, 0..6usize), 3..9)) {
        let spec = z4z6_spec();
        let letters: Vec<(Side, usize)> = raws
            .iter()
            .map(|&(side, x)| {
                let side = if side == 0 { Side::A } else { Side::B };
                (side, x % spec.factor(side).order())
            })
            .collect();
        let third = letters.len() / 3;
        let u = spec.reduce(&letters[..third]);
        let v = spec.reduce(&letters[third..2 * third]);
        let w = spec.reduce(&letters[2 * third..]);
        prop_assert_eq!(
            spec.multiply(&spec.multiply(&u, &v), &w),
            spec.multiply(&u, &spec.multiply(&v, &w))
        );
    }

    #[test]
    fn action_is_a_homomorphism_on_vertices(
        raw_u in proptest::collection::vec((0..2usize, 0..3usize), 0..5),
        raw_v in proptest::collection::vec((0..2usize, 0..3usize), 0..5),
        vertex_pick in 0..20usize,
    ) {
        let spec = z2z3_spec();
        let to_letters = |raw: &[(usize, usize)]| -> Vec<(Side, usize)> {
            raw.iter()
                .map(|&(side, x)| {
                    let side = if side == 0 { Side::A } else { Side::B };
                    (side, x % spec.factor(side).order())
                })
                .collect()
        };
        let u = spec.reduce(&to_letters(&raw_u));
        let v = spec.reduce(&to_letters(&raw_v));
        let tree = spec.bs_tree();
        let window = ball(tree.as_ref(), "A|", 3);
        let keys: Vec<&str> = window.vertices().collect();
        let key = keys[vertex_pick % keys.len()];
        let uv = spec.multiply(&u, &v);
        let one_step = spec.act_on_key(&uv, key).unwrap();
        let two_steps = spec.act_on_key(&u, &spec.act_on_key(&v, key).unwrap()).unwrap();
        prop_assert_eq!(one_step, two_steps);
    }

    #[test]
    fn lazy_balls_reexplore_identically(radius in 1usize..5) {
        let spec = z2z3_spec();
        let tree = spec.bs_tree();
        let b1 = ball(tree.as_ref(), "A|", radius);
        let b2 = ball(tree.as_ref(), "A|", radius);
        let v1: Vec<&str> = b1.vertices().collect();
        let v2: Vec<&str> = b2.vertices().collect();
        prop_assert_eq!(v1, v2);
        prop_assert_eq!(b1.edges(tree.as_ref()), b2.edges(tree.as_ref()));
        // expansion adjacency is symmetric
        for v in b1.vertices() {
            for w in bsk_core::tree::TreeHost::neighbors(tree.as_ref(), v) {
                prop_assert!(
                    bsk_core::tree::TreeHost::neighbors(tree.as_ref(), &w)
                        .contains(&v.to_string())
                );
            }
        }
    }

    #[test]
    fn subgroup_closures_satisfy_lagrange(gens in proptest::collection::vec(0..6usize, 1..3)) {
        let g = Arc::new(FiniteGroup::cyclic("z6", 6));
        let sub = g.subgroup_closure(&gens);
        prop_assert!(g.check_subgroup(&sub).is_ok());
        let t = g.left_cosets(&sub).unwrap();
        prop_assert_eq!(t.coset_count() * sub.len(), g.order());
        for x in g.elements() {
            prop_assert_eq!(t.rep(t.rep(x)), t.rep(x));
        }
    }
}
