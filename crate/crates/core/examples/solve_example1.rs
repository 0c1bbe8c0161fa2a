//! Solve the ten-node example at every budget and print the chosen upgrades.
//!
//!     cargo run --example solve_example1

use tree_interdiction::fixtures::example1;
use tree_interdiction::{all_upgraded_min_distance, solve_with_tables};

fn main() {
    let tree = example1();
    println!(
        "n={} leaves={:?} ceiling={}",
        tree.node_count(),
        tree.leaves(),
        all_upgraded_min_distance(&tree)
    );
    let (_, tables) = solve_with_tables(&tree, tree.non_leaf_count());
    for k in 0..=tree.non_leaf_count() {
        let set = tables.reconstruct(k);
        println!("K={k} value={} upgrade={:?}", tables.optimal_value(k), set.to_vec());
    }

    let best = tree_interdiction::solve_mspit(&tree, 1);
    println!("applied lengths at K=1:");
    for (child, len) in &best.applied_weights {
        println!("  {} -> {child}: {len}", tree.parent(*child).unwrap());
    }
}
