//! Layers, junctions and chains of a tree, plus the tables at each junction.
//!
//!     cargo run --example inspect_decomposition -- [instance file]

use tree_interdiction::fixtures::example1;
use tree_interdiction::{parse_instance, solve_with_tables, Decomposition};

fn main() {
    let tree = match std::env::args().nth(1) {
        Some(path) => parse_instance(&std::fs::read_to_string(path).unwrap()).unwrap(),
        None => example1(),
    };
    let d = Decomposition::new(&tree);
    for &v in tree.labels() {
        print!("v{v} layer={}", d.layer(v).unwrap());
        if let Some(a) = d.ca(v) {
            print!(" ca=v{a}");
        }
        println!();
    }
    println!("branching: {:?}", d.branching());
    println!("order: {:?}", d.order());
    for c in d.chains() {
        println!(
            "chain v{}..v{}: edges={:?} head_delta={} tail={:?} w_sum={}",
            c.top(),
            c.bottom(),
            c.edges(),
            c.head_delta(),
            c.tail_deltas(),
            c.w_sum()
        );
    }

    let budget = 2.min(tree.non_leaf_count());
    let (_, tables) = solve_with_tables(&tree, budget);
    for v in d.order() {
        let t = tables.subtree(v).unwrap();
        let cells: Vec<String> = (0..=t.k_max())
            .map(|k| format!("F({k})={}", t.value(k).unwrap()))
            .collect();
        println!("subtree v{v}: {}", cells.join(" "));
    }
}
