use proptest::prelude::*;

use tree_interdiction::testkit::{brute_force_mspit, random_tree, GeneratorConfig, Shape};
use tree_interdiction::{
    all_upgraded_min_distance, build_tree, chain_g_table, evaluate_min_distance,
    solve_with_tables, Decomposition, EdgeRecord, Length, NodeLabel, RootedTree, UpgradeSet,
};

fn shape() -> impl Strategy<Value = Shape> {
    prop::sample::select(Shape::ALL.to_vec())
}

fn small_tree() -> impl Strategy<Value = RootedTree> {
    (2usize..=12, any::<u64>(), shape(), 0u64..=15, 0u64..=15).prop_map(|(n, seed, sh, w, d)| {
        random_tree(&GeneratorConfig::new(n, seed).shape(sh).weights(w, d))
    })
}

fn tree_and_set() -> impl Strategy<Value = (RootedTree, UpgradeSet)> {
    small_tree().prop_flat_map(|t| {
        let nl = t.non_leaves();
        let len = nl.len();
        (Just(t), prop::sample::subsequence(nl, 0..=len))
            .prop_map(|(t, s)| (t, UpgradeSet::from_iter(s)))
    })
}

/// Per-leaf walk to the root, independent of the evaluator's BFS pass.
fn naive_min_distance(tree: &RootedTree, s: &UpgradeSet) -> Length {
    tree.leaves()
        .into_iter()
        .map(|leaf| {
            let mut total = 0;
            let mut v = leaf;
            while let Some(p) = tree.parent(v) {
                total += if s.contains(p) {
                    tree.u(v).unwrap()
                } else {
                    tree.w(v).unwrap()
                };
                v = p;
            }
            total
        })
        .min()
        .unwrap()
}

fn subtree_of(tree: &RootedTree, root: NodeLabel) -> RootedTree {
    let mut records = Vec::new();
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        for c in tree.children(v) {
            records.push(EdgeRecord::new(
                c,
                v,
                tree.w(c).unwrap() as i64,
                tree.u(c).unwrap() as i64,
            ));
            stack.push(c);
        }
    }
    build_tree(&records, root).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn evaluator_matches_naive_walk((tree, s) in tree_and_set()) {
        prop_assert_eq!(evaluate_min_distance(&tree, &s).unwrap(), naive_min_distance(&tree, &s));
    }

    #[test]
    fn evaluator_is_bracketed((tree, s) in tree_and_set()) {
        let v = evaluate_min_distance(&tree, &s).unwrap();
        prop_assert!(v >= evaluate_min_distance(&tree, &UpgradeSet::new()).unwrap());
        prop_assert!(v <= all_upgraded_min_distance(&tree));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn adding_a_leaf_is_an_error((tree, s) in tree_and_set()) {
        let mut s = s;
        s.insert(tree.leaves()[0]);
        prop_assert!(evaluate_min_distance(&tree, &s).is_err());
    }

    #[test]
    fn monotone_under_inclusion((tree, s) in tree_and_set(), extra in any::<prop::sample::Index>()) {
        let nl = tree.non_leaves();
        let mut bigger = s.clone();
        bigger.insert(nl[extra.index(nl.len())]);
        prop_assert!(
            evaluate_min_distance(&tree, &bigger).unwrap() >= evaluate_min_distance(&tree, &s).unwrap()
        );
    }

    #[test]
    fn decomposition_invariants(tree in small_tree()) {
        let d = Decomposition::new(&tree);
        // Chains partition the edges.
        let mut edges: Vec<NodeLabel> = d.chains().flat_map(|c| c.edges().to_vec()).collect();
        edges.sort_unstable();
        let mut all: Vec<NodeLabel> = tree.labels().iter().copied().filter(|&v| v != tree.root()).collect();
        all.sort_unstable();
        prop_assert_eq!(edges, all);
        prop_assert_eq!(d.chains().map(|c| c.beta()).sum::<usize>(), tree.node_count() - 1);

        for c in d.chains() {
            for &o in c.original_owner() {
                prop_assert_eq!(tree.children(o).len(), 1);
                prop_assert!(o != tree.root());
            }
            prop_assert!(c.tail_deltas().windows(2).all(|w| w[0] >= w[1]));
            let w: Length = c.edges().iter().map(|&e| tree.w(e).unwrap()).sum();
            prop_assert_eq!(w, c.w_sum());
            prop_assert_eq!(tree.parent(c.edges()[0]), Some(c.top()));
        }

        // Layers step by at most one along every edge, and only at branching nodes.
        for &v in tree.labels() {
            if let Some(p) = tree.parent(v) {
                let (lv, lp) = (d.layer(v).unwrap(), d.layer(p).unwrap());
                let branching = tree.children(v).len() >= 2;
                prop_assert_eq!(lv, lp + u32::from(branching));
                prop_assert_eq!(d.edge_layer(v), Some(lp));
            }
        }

        // One critical descendant per child edge of every junction.
        prop_assert_eq!(d.cd(tree.root()).len(), tree.children(tree.root()).len());
        for v in d.branching() {
            prop_assert_eq!(d.cd(v).len(), tree.children(v).len());
            prop_assert_eq!(d.layer(v), Some(d.layer(d.ca(v).unwrap()).unwrap() + 1));
        }

        // Children before parents.
        let order = d.order();
        for (i, &v) in order.iter().enumerate() {
            for h in d.cd(v) {
                if let Some(j) = order.iter().position(|&x| x == h) {
                    prop_assert!(j < i);
                }
            }
        }
    }

    #[test]
    fn chain_table_is_exchange_optimal(tree in small_tree(), budget in 0usize..6) {
        let d = Decomposition::new(&tree);
        for c in d.chains() {
            let t = chain_g_table(c, budget);
            // Brute force over which of the beta upgradable chain nodes to take:
            // bit 0 is the top, bit i the owner of tail edge i.
            let beta = c.beta();
            let mut best: [Vec<Option<Length>>; 2] = [vec![None; beta + 1], vec![None; beta + 1]];
            for mask in 0u32..(1 << beta) {
                let k = mask.count_ones() as usize;
                let eps = (mask & 1) as usize;
                let mut len = c.w_sum();
                if eps == 1 {
                    len += c.head_delta();
                }
                for (i, d) in c.tail_deltas().iter().enumerate() {
                    if mask >> (i + 1) & 1 == 1 {
                        len += d;
                    }
                }
                let slot = &mut best[eps][k];
                *slot = Some(slot.map_or(len, |b: Length| b.max(len)));
            }
            for eps in 0..=1u8 {
                for k in 0..=beta {
                    let expect = if k <= budget { best[eps as usize][k] } else { None };
                    prop_assert_eq!(t.get(eps, k).ok(), expect, "eps={} k={}", eps, k);
                }
                let vals: Vec<Length> = (0..=beta).filter_map(|k| t.get(eps, k).ok()).collect();
                let steps: Vec<Length> = vals.windows(2).map(|w| w[1] - w[0]).collect();
                prop_assert!(steps.windows(2).all(|s| s[0] >= s[1]));
            }
        }
    }

    #[test]
    fn dp_matches_oracle_and_sets_replay(tree in small_tree(), budget in 0usize..12) {
        let (sol, tables) = solve_with_tables(&tree, budget);
        let (oracle, _) = brute_force_mspit(&tree, budget).unwrap();
        prop_assert_eq!(sol.value, oracle);
        prop_assert!(sol.upgraded.len() <= budget);
        prop_assert_eq!(evaluate_min_distance(&tree, &sol.upgraded).unwrap(), sol.value);

        // F = max over eps on every junction table.
        let d = tables.decomposition();
        for v in d.order() {
            for q in 1..=d.cd(v).len() {
                for t in [tables.serial(v, q).unwrap(), tables.parallel(v, q).unwrap()] {
                    for k in 0..=t.k_max() {
                        let expect = match (t.get(0, k), t.get(1, k)) {
                            (None, None) => None,
                            (a, b) => Some(a.unwrap_or(0).max(b.unwrap_or(0))),
                        };
                        prop_assert_eq!(t.value(k), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn subtree_cells_are_realizable(tree in small_tree()) {
        let k_all = tree.non_leaf_count();
        let (_, tables) = solve_with_tables(&tree, k_all);
        let d = tables.decomposition();
        for v in d.order() {
            let sub = subtree_of(&tree, v);
            let table = tables.subtree(v).unwrap();
            prop_assert_eq!(table.value(0), Some(evaluate_min_distance(&sub, &UpgradeSet::new()).unwrap()));
            for k in 0..=table.k_max() {
                let s = tables.reconstruct_subtree(v, k).unwrap();
                prop_assert!(s.len() <= k);
                prop_assert_eq!(evaluate_min_distance(&sub, &s).unwrap(), table.value(k).unwrap());
            }
        }
    }

    #[test]
    fn solve_is_deterministic(tree in small_tree(), budget in 0usize..12) {
        let a = solve_with_tables(&tree, budget).0;
        let b = solve_with_tables(&tree.clone(), budget).0;
        prop_assert_eq!(a, b);
    }
}

#[test]
fn arbitrary_labels_are_supported() {
    // Same shape as a small broom, relabelled with sparse ids.
    let tree = build_tree(
        &[
            EdgeRecord::new(900, 40, 2, 9),
            EdgeRecord::new(17, 900, 1, 3),
            EdgeRecord::new(5000, 900, 4, 4),
            EdgeRecord::new(3, 17, 1, 8),
        ],
        40,
    )
    .unwrap();
    for k in 0..=tree.non_leaf_count() {
        let (sol, _) = solve_with_tables(&tree, k);
        assert_eq!(sol.value, brute_force_mspit(&tree, k).unwrap().0);
    }
}
