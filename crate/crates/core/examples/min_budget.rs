//! Fewest upgrades needed to push the shortest root-leaf distance to a target.
//!
//!     cargo run --example min_budget -- [target]

use tree_interdiction::fixtures::example1;
use tree_interdiction::{solve_mcspit, BudgetError};

fn main() {
    let tree = example1();
    let targets: Vec<u64> = match std::env::args().nth(1) {
        Some(t) => vec![t.parse().expect("target must be a non-negative integer")],
        None => vec![7, 13, 14, 18, 20, 21],
    };
    for d in targets {
        match solve_mcspit(&tree, d) {
            Ok(a) => {
                let probes: Vec<String> =
                    a.query.probes.iter().map(|(k, v)| format!("F({k})={v}")).collect();
                println!(
                    "D={d}: K*={} value={} upgrade={:?} [{}]",
                    a.kstar,
                    a.solution.value,
                    a.solution.upgraded.to_vec(),
                    probes.join(" ")
                );
            }
            Err(e @ BudgetError::TargetUnreachable { .. }) => println!("D={d}: {e}"),
        }
    }
}
