//! Shortest-path interdiction on rooted trees by upgrading nodes.
//!
//! Every edge has a base length `w` and an upgraded length `u >= w`.
//! Upgrading a node (unit cost) switches all edges to its children to `u`.
//! Two problems are solved exactly:
//!
//! * [`solve_mspit`]: with at most `K` upgrades, maximise the shortest
//!   root-leaf distance. A chain decomposition of the tree feeds a bottom-up
//!   DP in `O(n K^2)` time.
//! * [`solve_mcspit`]: the fewest upgrades that make the shortest root-leaf
//!   distance at least `D`, by binary search over `K`.
//!
//! [`testkit`] carries brute-force oracles for both and a seeded generator.
//!
//! ```
//! use tree_interdiction::{fixtures, solve_mcspit, solve_mspit};
//!
//! let tree = fixtures::example1();
//! let best = solve_mspit(&tree, 1);
//! assert_eq!(best.value, 13);
//! assert_eq!(best.upgraded.to_vec(), vec![1]);
//!
//! assert_eq!(solve_mcspit(&tree, 14).unwrap().kstar, 2);
//! ```

pub mod bench;
pub mod budget;
pub mod chain;
pub mod cli;
pub mod decomposition;
pub mod dp;
pub mod fixtures;
pub mod format;
pub mod testkit;
pub mod tree;

pub use budget::{solve_mcspit, BudgetAnswer, BudgetError, BudgetQuery};
pub use chain::{chain_g_table, ChainTable, InfeasibleIndex};
pub use decomposition::{Chain, Decomposition};
pub use dp::{combine_parallel, combine_serial, solve_mspit, solve_with_tables, BranchTable, DpTables};
pub use format::{emit_instance, parse_instance, parse_instance_scaled, FormatError};
pub use tree::{
    all_upgraded_min_distance, build_tree, evaluate_min_distance, EdgeRecord, Length, NodeLabel,
    RootedTree, Solution, TreeError, UpgradeSet,
};
