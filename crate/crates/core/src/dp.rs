//! Bottom-up tree DP.
//!
//! For each junction `v` with branches `h_1..h_p` (its critical descendants):
//!
//! * the *serial* table of branch `q` covers chain `h_q` plus the subtree
//!   below `h_q`: `f(eps, k) = max g(eps, k1) + F_child(k - k1)`;
//! * the *parallel* table covers the first `q` branches together:
//!   `f(eps, k) = max min(serial_q(eps, k1), parallel_{q-1}(eps, k2))` over
//!   `k1 + k2 - eps = k`, since an upgrade of `v` is shared by every branch.
//!
//! `k` always counts exactly `k` upgraded nodes. Each cell keeps the
//! maximising `k1` so the upgrade set can be rebuilt without storing sets.

use crate::chain::{chain_g_table, ChainTable};
use crate::decomposition::Decomposition;
use crate::tree::{Length, NodeLabel, RootedTree, Solution, UpgradeSet};

/// Values of one `f` table split by `eps`, with backpointers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchTable {
    cap: usize,
    vals: [Vec<Option<Length>>; 2],
    back: [Vec<u32>; 2],
}

impl BranchTable {
    fn empty(cap: usize, budget: usize) -> Self {
        let len = cap.min(budget) + 1;
        Self {
            cap,
            vals: [vec![None; len], vec![None; len]],
            back: [vec![0; len], vec![0; len]],
        }
    }

    /// Number of upgradable (non-leaf) nodes covered by this table.
    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Largest stored `k`.
    pub fn k_max(&self) -> usize {
        self.vals[0].len() - 1
    }

    pub fn get(&self, eps: u8, k: usize) -> Option<Length> {
        self.vals[eps as usize].get(k).copied().flatten()
    }

    /// `F(k) = max_eps f(eps, k)`, with the smaller `eps` winning ties.
    pub fn best(&self, k: usize) -> Option<(Length, u8)> {
        match (self.get(0, k), self.get(1, k)) {
            (Some(a), Some(b)) if b > a => Some((b, 1)),
            (Some(a), _) => Some((a, 0)),
            (None, Some(b)) => Some((b, 1)),
            (None, None) => None,
        }
    }

    pub fn value(&self, k: usize) -> Option<Length> {
        self.best(k).map(|b| b.0)
    }

    /// Recorded maximising `k1` for cell `(eps, k)`.
    pub fn backpointer(&self, eps: u8, k: usize) -> Option<usize> {
        self.get(eps, k).map(|_| self.back[eps as usize][k] as usize)
    }

    fn offer(&mut self, eps: u8, k: usize, value: Length, k1: usize) {
        let slot = &mut self.vals[eps as usize][k];
        if slot.is_none_or(|cur| value > cur) {
            *slot = Some(value);
            self.back[eps as usize][k] = k1 as u32;
        }
    }
}

/// Serial composition of a chain with the subtree hanging below it.
///
/// `child` is the full table of the chain's bottom junction, or `None` when
/// the chain ends in a leaf (then the subtree contributes 0 with no budget).
pub fn combine_serial(
    chain: &ChainTable,
    child: Option<&BranchTable>,
    budget: usize,
) -> BranchTable {
    let child_cap = child.map_or(0, BranchTable::cap);
    let mut out = BranchTable::empty(chain.beta() + child_cap, budget);
    let child_k_max = child.map_or(0, BranchTable::k_max);
    for eps in 0..=1u8 {
        let Some(k1_max) = chain.k_max(eps) else {
            continue;
        };
        for k1 in usize::from(eps)..=k1_max {
            let g = chain.get(eps, k1).expect("within chain domain");
            for k2 in 0..=child_k_max {
                let k = k1 + k2;
                if k > out.k_max() {
                    break;
                }
                let below = match child {
                    Some(t) => t.value(k2).expect("full tables are dense"),
                    None => 0,
                };
                out.offer(eps, k, g + below, k1);
            }
        }
    }
    out
}

/// Parallel composition of branch `q` (serial table) with branches `1..q-1`.
pub fn combine_parallel(
    serial: &BranchTable,
    prefix: &BranchTable,
    budget: usize,
) -> BranchTable {
    let mut out = BranchTable::empty(serial.cap + prefix.cap - 1, budget);
    for eps in 0..=1u8 {
        let e = usize::from(eps);
        for k1 in e..=serial.k_max() {
            let Some(a) = serial.get(eps, k1) else {
                continue;
            };
            for k2 in e..=prefix.k_max() {
                let k = k1 + k2 - e;
                if k > out.k_max() {
                    break;
                }
                if let Some(b) = prefix.get(eps, k2) {
                    out.offer(eps, k, a.min(b), k1);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
struct JunctionTables {
    // Bottom node (dense index) of each branch, in branch order.
    branches: Vec<usize>,
    serial: Vec<BranchTable>,
    parallel: Vec<BranchTable>,
}

/// All tables of one solve.
#[derive(Debug, Clone)]
pub struct DpTables {
    budget: usize,
    labels: Vec<NodeLabel>,
    chains: Vec<Option<ChainTable>>,
    junctions: Vec<Option<JunctionTables>>,
    decomposition: Decomposition,
    root: usize,
}

impl DpTables {
    /// Runs the DP; no table stores more than `budget` upgrades.
    pub fn build(tree: &RootedTree, decomposition: Decomposition, budget: usize) -> Self {
        let n = tree.node_count();
        let chains: Vec<Option<ChainTable>> = decomposition
            .chains
            .iter()
            .map(|c| c.as_ref().map(|c| chain_g_table(c, budget)))
            .collect();

        let mut junctions: Vec<Option<JunctionTables>> = vec![None; n];
        for &v in &decomposition.order {
            let branches = decomposition.structure.cd[v].clone();
            let mut serial = Vec::with_capacity(branches.len());
            let mut parallel: Vec<BranchTable> = Vec::with_capacity(branches.len());
            for &h in &branches {
                let chain = chains[h].as_ref().expect("every branch has a chain");
                let child = junctions[h].as_ref().map(JunctionTables::full);
                let s = combine_serial(chain, child, budget);
                let p = match parallel.last() {
                    None => s.clone(),
                    Some(prev) => combine_parallel(&s, prev, budget),
                };
                serial.push(s);
                parallel.push(p);
            }
            junctions[v] = Some(JunctionTables {
                branches,
                serial,
                parallel,
            });
        }

        Self {
            budget,
            labels: tree.labels().to_vec(),
            chains,
            junctions,
            root: tree.root_idx(),
            decomposition,
        }
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomposition
    }

    fn junction(&self, v: NodeLabel) -> Option<&JunctionTables> {
        let i = self.labels.binary_search(&v).ok()?;
        self.junctions[i].as_ref()
    }

    /// Serial table of the `q`-th branch (1-based) of junction `v`.
    pub fn serial(&self, v: NodeLabel, q: usize) -> Option<&BranchTable> {
        self.junction(v)?.serial.get(q.checked_sub(1)?)
    }

    /// Parallel table of the first `q` branches of junction `v`.
    pub fn parallel(&self, v: NodeLabel, q: usize) -> Option<&BranchTable> {
        self.junction(v)?.parallel.get(q.checked_sub(1)?)
    }

    /// Serial table of the branch of `v` ending at critical descendant `h`.
    pub fn serial_for(&self, v: NodeLabel, h: NodeLabel) -> Option<&BranchTable> {
        let j = self.junction(v)?;
        let hi = self.labels.binary_search(&h).ok()?;
        let q = j.branches.iter().position(|&b| b == hi)?;
        j.serial.get(q)
    }

    /// Table of the whole subtree below junction `v`.
    pub fn subtree(&self, v: NodeLabel) -> Option<&BranchTable> {
        self.junction(v).map(JunctionTables::full)
    }

    pub fn root_table(&self) -> &BranchTable {
        self.junctions[self.root].as_ref().unwrap().full()
    }

    /// Optimal value at exactly `k` upgrades (`k` clamped to the table).
    pub fn optimal_value(&self, k: usize) -> Length {
        let t = self.root_table();
        t.value(k.min(t.k_max())).expect("root table is dense")
    }

    /// Rebuilds the upgrade set behind `F(T_root, k)`.
    pub fn reconstruct(&self, k: usize) -> UpgradeSet {
        let k = k.min(self.root_table().k_max());
        self.collect(self.root, k)
    }

    /// Upgrade set behind `F(T_v, k)` for junction `v`, within its subtree.
    pub fn reconstruct_subtree(&self, v: NodeLabel, k: usize) -> Option<UpgradeSet> {
        let i = self.labels.binary_search(&v).ok()?;
        let table = self.junctions[i].as_ref()?.full();
        table.value(k)?;
        Some(self.collect(i, k))
    }

    fn collect(&self, v: usize, k: usize) -> UpgradeSet {
        let mut out = UpgradeSet::new();
        let mut stack = vec![Task::Subtree { v, k }];
        while let Some(task) = stack.pop() {
            match task {
                Task::Subtree { v, k } => {
                    if k == 0 {
                        continue;
                    }
                    let j = self.junctions[v].as_ref().unwrap();
                    let (_, eps) = j.full().best(k).unwrap();
                    if eps == 1 {
                        out.insert(self.labels[v]);
                    }
                    stack.push(Task::Parallel {
                        v,
                        q: j.branches.len(),
                        eps,
                        k,
                    });
                }
                Task::Parallel { v, q, eps, k } => {
                    let j = self.junctions[v].as_ref().unwrap();
                    if q == 1 {
                        stack.push(Task::Serial { v, q, eps, k });
                    } else {
                        let k1 = j.parallel[q - 1].backpointer(eps, k).unwrap();
                        stack.push(Task::Serial { v, q, eps, k: k1 });
                        stack.push(Task::Parallel {
                            v,
                            q: q - 1,
                            eps,
                            k: k + usize::from(eps) - k1,
                        });
                    }
                }
                Task::Serial { v, q, eps, k } => {
                    let j = self.junctions[v].as_ref().unwrap();
                    let k1 = j.serial[q - 1].backpointer(eps, k).unwrap();
                    let h = j.branches[q - 1];
                    let chain = self.decomposition.chains[h].as_ref().unwrap();
                    let tail = k1 - usize::from(eps);
                    for &owner in &chain.original_owner()[..tail] {
                        out.insert(owner);
                    }
                    if k > k1 {
                        stack.push(Task::Subtree { v: h, k: k - k1 });
                    }
                }
            }
        }
        out
    }

    pub fn chain_table(&self, bottom: NodeLabel) -> Option<&ChainTable> {
        let i = self.labels.binary_search(&bottom).ok()?;
        self.chains[i].as_ref()
    }
}

impl JunctionTables {
    fn full(&self) -> &BranchTable {
        self.parallel.last().expect("junctions have at least one branch")
    }
}

enum Task {
    Subtree { v: usize, k: usize },
    Parallel { v: usize, q: usize, eps: u8, k: usize },
    Serial { v: usize, q: usize, eps: u8, k: usize },
}

/// Maximises the shortest root-leaf distance with at most `budget` upgrades.
///
/// Budgets above the number of non-leaf nodes are clamped.
pub fn solve_mspit(tree: &RootedTree, budget: usize) -> Solution {
    solve_with_tables(tree, budget).0
}

/// As [`solve_mspit`], also returning the DP tables.
pub fn solve_with_tables(tree: &RootedTree, budget: usize) -> (Solution, DpTables) {
    let k = budget.min(tree.non_leaf_count());
    let tables = DpTables::build(tree, Decomposition::new(tree), k);
    let value = tables.optimal_value(k);
    let set = tables.reconstruct(k);
    let solution = Solution::from_set(tree, set).expect("reconstructed set is valid");
    assert_eq!(
        solution.value, value,
        "reconstructed upgrade set does not reproduce the DP value"
    );
    (solution, tables)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::example1;
    use crate::tree::{build_tree, EdgeRecord};

    fn cells(t: &BranchTable) -> Vec<(u8, usize, Length)> {
        let mut out = Vec::new();
        for eps in 0..=1 {
            for k in 0..=t.k_max() {
                if let Some(v) = t.get(eps, k) {
                    out.push((eps, k, v));
                }
            }
        }
        out
    }

    #[test]
    fn example1_serial_branches_of_root() {
        let (_, tables) = solve_with_tables(&example1(), 1);
        let v7 = tables.serial_for(1, 7).unwrap();
        assert_eq!(cells(v7), vec![(0, 0, 7), (0, 1, 14), (1, 1, 13)]);
        let v2 = tables.serial_for(1, 2).unwrap();
        assert_eq!(cells(v2), vec![(0, 0, 10), (0, 1, 16), (1, 1, 14)]);
        let v6 = tables.serial_for(1, 6).unwrap();
        assert_eq!(cells(v6), vec![(0, 0, 9), (0, 1, 11), (1, 1, 18)]);
    }

    #[test]
    fn example1_parallel_tables() {
        let (_, tables) = solve_with_tables(&example1(), 1);
        assert_eq!(
            cells(tables.subtree(7).unwrap()),
            vec![(0, 0, 3), (0, 1, 3), (1, 1, 10)]
        );
        assert_eq!(
            cells(tables.subtree(2).unwrap()),
            vec![(0, 0, 4), (1, 1, 10)]
        );
        assert_eq!(
            cells(tables.subtree(1).unwrap()),
            vec![(0, 0, 7), (0, 1, 9), (1, 1, 13)]
        );
    }

    #[test]
    fn example1_optimum() {
        let t = example1();
        let sol = solve_mspit(&t, 1);
        assert_eq!(sol.value, 13);
        assert_eq!(sol.upgraded.to_vec(), vec![1]);

        let sol = solve_mspit(&t, 0);
        assert_eq!(sol.value, 7);
        assert!(sol.upgraded.is_empty());
    }

    #[test]
    fn single_edge() {
        let t = build_tree(&[EdgeRecord::new(2, 1, 5, 7)], 1).unwrap();
        let sol = solve_mspit(&t, 1);
        assert_eq!((sol.value, sol.upgraded.to_vec()), (7, vec![1]));
        assert_eq!(solve_mspit(&t, 10).value, 7);
    }

    #[test]
    fn leaf_bottom_branch_without_budget() {
        let t = example1();
        let (_, tables) = solve_with_tables(&t, 0);
        let s = tables.serial_for(2, 3).unwrap();
        assert_eq!(cells(s), vec![(0, 0, 7)]);
    }

    #[test]
    fn parallel_with_unupgradable_side() {
        // Branch A: single leaf edge (cap 1, only the shared top upgrade).
        // Branch B: a longer chain.
        let tree = build_tree(
            &[
                EdgeRecord::new(2, 1, 5, 9),
                EdgeRecord::new(3, 1, 1, 2),
                EdgeRecord::new(4, 3, 1, 8),
            ],
            1,
        )
        .unwrap();
        let (_, tables) = solve_with_tables(&tree, 2);
        let a = tables.serial_for(1, 2).unwrap();
        let b = tables.serial_for(1, 4).unwrap();
        let p = tables.subtree(1).unwrap();
        assert_eq!(cells(a), vec![(0, 0, 5), (1, 1, 9)]);
        for k in 0..=p.k_max() {
            assert_eq!(p.get(0, k), b.get(0, k).map(|x| x.min(5)));
            assert_eq!(p.get(1, k), b.get(1, k).map(|x| x.min(9)));
        }
    }
}
