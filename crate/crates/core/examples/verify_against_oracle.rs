//! Cross-check the DP against exhaustive search on small random trees.
//!
//!     cargo run --example verify_against_oracle -- [trees]

use tree_interdiction::testkit::{brute_force_mspit, random_tree, GeneratorConfig, Shape};
use tree_interdiction::{evaluate_min_distance, solve_mspit};

fn main() {
    let trees: u64 = std::env::args().nth(1).map_or(200, |s| s.parse().unwrap());
    let mut checked = 0;
    for seed in 0..trees {
        let shape = Shape::ALL[seed as usize % Shape::ALL.len()];
        let n = 3 + seed as usize % 10;
        let tree = random_tree(&GeneratorConfig::new(n, seed).shape(shape));
        for k in 0..=tree.non_leaf_count() {
            let dp = solve_mspit(&tree, k);
            let (oracle, witness) = brute_force_mspit(&tree, k).unwrap();
            assert_eq!(dp.value, oracle, "{shape} n={n} seed={seed} K={k}");
            assert_eq!(evaluate_min_distance(&tree, &dp.upgraded).unwrap(), dp.value);
            if dp.upgraded != witness {
                // Ties: both sets are optimal.
                assert_eq!(evaluate_min_distance(&tree, &witness).unwrap(), oracle);
            }
            checked += 1;
        }
    }
    println!("{trees} trees, {checked} budgets: all match");
}
