//! Minimum number of upgrades that lifts the shortest root-leaf distance to
//! a target, by binary search over the budget of the max-distance solver.

use thiserror::Error;

use crate::dp::solve_mspit;
use crate::tree::{all_upgraded_min_distance, Length, RootedTree, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum BudgetError {
    #[error("unreachable: ceiling {ceiling} is below target {target}")]
    TargetUnreachable { target: Length, ceiling: Length },
}

/// Trace of one search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetQuery {
    pub target: Length,
    /// Final bracket `(lo, hi)`: `F(lo) < target <= F(hi)`, `lo = None` when
    /// zero upgrades already suffice.
    pub bounds: (Option<usize>, usize),
    /// Every `(k, F(k))` evaluated, in probe order.
    pub probes: Vec<(usize, Length)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetAnswer {
    pub kstar: usize,
    pub solution: Solution,
    pub query: BudgetQuery,
}

/// Smallest `k` with `solve_mspit(tree, k).value >= target`.
pub fn solve_mcspit(tree: &RootedTree, target: Length) -> Result<BudgetAnswer, BudgetError> {
    let ceiling = all_upgraded_min_distance(tree);
    if ceiling < target {
        return Err(BudgetError::TargetUnreachable { target, ceiling });
    }
    let mut probes = Vec::new();
    let mut probe = |k: usize| {
        let s = solve_mspit(tree, k);
        probes.push((k, s.value));
        s
    };

    let base = probe(0);
    if base.value >= target {
        return Ok(BudgetAnswer {
            kstar: 0,
            solution: base,
            query: BudgetQuery {
                target,
                bounds: (None, 0),
                probes,
            },
        });
    }

    // F(lo) < target <= F(hi); F(non_leaf_count) is the ceiling.
    let (mut lo, mut hi) = (0, tree.non_leaf_count());
    let mut witness: Option<Solution> = None;
    while hi - lo > 1 {
        let mid = (lo + hi).div_ceil(2);
        let s = probe(mid);
        if s.value >= target {
            hi = mid;
            witness = Some(s);
        } else {
            lo = mid;
        }
    }
    let solution = witness.unwrap_or_else(|| probe(hi));
    Ok(BudgetAnswer {
        kstar: hi,
        solution,
        query: BudgetQuery {
            target,
            bounds: (Some(lo), hi),
            probes,
        },
    })
}
