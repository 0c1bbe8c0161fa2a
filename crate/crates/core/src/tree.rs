//! Rooted-tree model, validation, and the objective evaluator.
//!
//! Every edge is identified by its child endpoint. Upgrading a node `v`
//! switches every edge `v -> child` from its base length `w` to its upgraded
//! length `u`. The objective of an upgrade set is the minimum, over all
//! leaves, of the root-leaf path length under the applied lengths.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

/// Integral edge length. All arithmetic is exact.
pub type Length = u64;

/// External node label as it appears in instance files.
pub type NodeLabel = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("cycle detected through node {node}")]
    CycleDetected { node: NodeLabel },
    #[error("node {node} is not connected to root {root}")]
    DisconnectedInput { node: NodeLabel, root: NodeLabel },
    #[error("node {child} has more than one parent record")]
    DuplicateChild { child: NodeLabel },
    #[error("edge into node {child} has a negative length")]
    NegativeWeight { child: NodeLabel },
    #[error("edge into node {child} has w={w} greater than u={u}")]
    UpgradeBelowBase { child: NodeLabel, w: i64, u: i64 },
    #[error("tree must have at least 2 nodes, got {n}")]
    TrivialTree { n: usize },
    #[error("node {node} is a leaf and cannot be upgraded")]
    LeafInSet { node: NodeLabel },
    #[error("unknown node {node}")]
    UnknownNode { node: NodeLabel },
}

/// One `child parent w u` record of the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeRecord {
    pub child: NodeLabel,
    pub parent: NodeLabel,
    pub w: i64,
    pub u: i64,
}

impl EdgeRecord {
    pub fn new(child: NodeLabel, parent: NodeLabel, w: i64, u: i64) -> Self {
        Self { child, parent, w, u }
    }
}

/// Immutable, validated rooted tree.
///
/// Nodes are stored densely; dense index order equals ascending label order,
/// so every "ascending node id" tie-break is simply ascending index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    labels: Vec<NodeLabel>,
    index: HashMap<NodeLabel, usize>,
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    // Indexed by child; the root's slot is unused and holds 0.
    w: Vec<Length>,
    u: Vec<Length>,
    bfs: Vec<usize>,
    leaves: Vec<usize>,
}

pub fn build_tree(records: &[EdgeRecord], root: NodeLabel) -> Result<RootedTree, TreeError> {
    RootedTree::new(records, root)
}

impl RootedTree {
    pub fn new(records: &[EdgeRecord], root: NodeLabel) -> Result<Self, TreeError> {
        let mut labels: BTreeSet<NodeLabel> = BTreeSet::new();
        labels.insert(root);
        for r in records {
            labels.insert(r.child);
            labels.insert(r.parent);
        }
        let n = labels.len();
        if n < 2 {
            return Err(TreeError::TrivialTree { n });
        }
        let labels: Vec<NodeLabel> = labels.into_iter().collect();
        let index: HashMap<NodeLabel, usize> =
            labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();

        let mut parent = vec![None; n];
        let mut w = vec![0; n];
        let mut u = vec![0; n];
        for r in records {
            let c = index[&r.child];
            if parent[c].is_some() {
                return Err(TreeError::DuplicateChild { child: r.child });
            }
            if r.w < 0 || r.u < 0 {
                return Err(TreeError::NegativeWeight { child: r.child });
            }
            if r.w > r.u {
                return Err(TreeError::UpgradeBelowBase {
                    child: r.child,
                    w: r.w,
                    u: r.u,
                });
            }
            parent[c] = Some(index[&r.parent]);
            w[c] = r.w as Length;
            u[c] = r.u as Length;
        }
        let root_idx = index[&root];
        if parent[root_idx].is_some() {
            // Following parents from the root must come back around.
            return Err(TreeError::CycleDetected { node: root });
        }

        let mut children = vec![Vec::new(); n];
        for c in 0..n {
            if let Some(p) = parent[c] {
                children[p].push(c);
            }
        }

        let mut bfs = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        bfs.push(root_idx);
        seen[root_idx] = true;
        let mut head = 0;
        while head < bfs.len() {
            let v = bfs[head];
            head += 1;
            for &c in &children[v] {
                if !seen[c] {
                    seen[c] = true;
                    bfs.push(c);
                }
            }
        }
        if bfs.len() < n {
            let stray = (0..n).find(|&i| !seen[i]).unwrap();
            return Err(classify_unreached(stray, &parent, &labels, root));
        }

        let leaves = (0..n).filter(|&v| children[v].is_empty()).collect();
        Ok(Self {
            labels,
            index,
            root: root_idx,
            parent,
            children,
            w,
            u,
            bfs,
            leaves,
        })
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn root(&self) -> NodeLabel {
        self.labels[self.root]
    }

    pub fn labels(&self) -> &[NodeLabel] {
        &self.labels
    }

    pub fn contains(&self, v: NodeLabel) -> bool {
        self.index.contains_key(&v)
    }

    pub fn parent(&self, v: NodeLabel) -> Option<NodeLabel> {
        let i = *self.index.get(&v)?;
        self.parent[i].map(|p| self.labels[p])
    }

    /// Children of `v` in ascending label order (the set `A(v)` of edges).
    pub fn children(&self, v: NodeLabel) -> Vec<NodeLabel> {
        match self.index.get(&v) {
            Some(&i) => self.children[i].iter().map(|&c| self.labels[c]).collect(),
            None => Vec::new(),
        }
    }

    /// Base length of the edge entering `child`.
    pub fn w(&self, child: NodeLabel) -> Option<Length> {
        self.edge_index(child).map(|c| self.w[c])
    }

    /// Upgraded length of the edge entering `child`.
    pub fn u(&self, child: NodeLabel) -> Option<Length> {
        self.edge_index(child).map(|c| self.u[c])
    }

    pub fn delta(&self, child: NodeLabel) -> Option<Length> {
        self.edge_index(child).map(|c| self.u[c] - self.w[c])
    }

    pub fn leaves(&self) -> Vec<NodeLabel> {
        self.leaves.iter().map(|&v| self.labels[v]).collect()
    }

    pub fn is_leaf(&self, v: NodeLabel) -> bool {
        self.index
            .get(&v)
            .is_some_and(|&i| self.children[i].is_empty())
    }

    /// Non-leaf nodes in ascending label order: the only nodes worth upgrading.
    pub fn non_leaves(&self) -> Vec<NodeLabel> {
        (0..self.node_count())
            .filter(|&v| !self.children[v].is_empty())
            .map(|v| self.labels[v])
            .collect()
    }

    pub fn non_leaf_count(&self) -> usize {
        self.node_count() - self.leaves.len()
    }

    /// Edge records in ascending child order.
    pub fn records(&self) -> Vec<EdgeRecord> {
        (0..self.node_count())
            .filter_map(|c| {
                self.parent[c].map(|p| {
                    EdgeRecord::new(
                        self.labels[c],
                        self.labels[p],
                        self.w[c] as i64,
                        self.u[c] as i64,
                    )
                })
            })
            .collect()
    }

    /// Validates `nodes` against this tree and wraps them as an upgrade set.
    pub fn upgrade_set<I>(&self, nodes: I) -> Result<UpgradeSet, TreeError>
    where
        I: IntoIterator<Item = NodeLabel>,
    {
        let set = UpgradeSet::from_iter(nodes);
        self.check_upgrade_set(&set)?;
        Ok(set)
    }

    fn check_upgrade_set(&self, s: &UpgradeSet) -> Result<(), TreeError> {
        for &v in s.iter() {
            match self.index.get(&v) {
                None => return Err(TreeError::UnknownNode { node: v }),
                Some(&i) if self.children[i].is_empty() => {
                    return Err(TreeError::LeafInSet { node: v })
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn edge_index(&self, child: NodeLabel) -> Option<usize> {
        let c = *self.index.get(&child)?;
        self.parent[c].map(|_| c)
    }

    // Crate-internal dense accessors used by the decomposition and the DP.

    pub(crate) fn root_idx(&self) -> usize {
        self.root
    }

    pub(crate) fn label_of(&self, i: usize) -> NodeLabel {
        self.labels[i]
    }

    pub(crate) fn parent_idx(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    pub(crate) fn children_idx(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub(crate) fn w_idx(&self, child: usize) -> Length {
        self.w[child]
    }

    pub(crate) fn delta_idx(&self, child: usize) -> Length {
        self.u[child] - self.w[child]
    }

    pub(crate) fn bfs_order(&self) -> &[usize] {
        &self.bfs
    }

    /// Undirected degree: parent edge plus child edges.
    pub(crate) fn degree_idx(&self, i: usize) -> usize {
        self.children[i].len() + usize::from(self.parent[i].is_some())
    }

    fn applied_idx(&self, child: usize, upgraded: &[bool]) -> Length {
        let p = self.parent[child].expect("root has no parent edge");
        if upgraded[p] {
            self.u[child]
        } else {
            self.w[child]
        }
    }

    fn min_distance_with(&self, upgraded: &[bool]) -> Length {
        let mut dist = vec![0; self.node_count()];
        for &v in &self.bfs[1..] {
            let p = self.parent[v].unwrap();
            dist[v] = dist[p] + self.applied_idx(v, upgraded);
        }
        self.leaves.iter().map(|&t| dist[t]).min().unwrap()
    }

    pub(crate) fn mask_of(&self, s: &UpgradeSet) -> Vec<bool> {
        let mut mask = vec![false; self.node_count()];
        for v in s.iter() {
            mask[self.index[v]] = true;
        }
        mask
    }
}

fn classify_unreached(
    stray: usize,
    parent: &[Option<usize>],
    labels: &[NodeLabel],
    root: NodeLabel,
) -> TreeError {
    let mut visited = vec![false; parent.len()];
    let mut v = stray;
    loop {
        if visited[v] {
            return TreeError::CycleDetected { node: labels[v] };
        }
        visited[v] = true;
        match parent[v] {
            Some(p) => v = p,
            None => {
                return TreeError::DisconnectedInput {
                    node: labels[stray],
                    root,
                }
            }
        }
    }
}

/// Set of upgraded nodes, kept sorted by label.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpgradeSet {
    nodes: BTreeSet<NodeLabel>,
}

impl UpgradeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, v: NodeLabel) -> bool {
        self.nodes.insert(v)
    }

    pub fn contains(&self, v: NodeLabel) -> bool {
        self.nodes.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &NodeLabel> {
        self.nodes.iter()
    }

    pub fn to_vec(&self) -> Vec<NodeLabel> {
        self.nodes.iter().copied().collect()
    }
}

impl FromIterator<NodeLabel> for UpgradeSet {
    fn from_iter<I: IntoIterator<Item = NodeLabel>>(iter: I) -> Self {
        Self {
            nodes: iter.into_iter().collect(),
        }
    }
}

/// An optimal (or witnessing) upgrade with its objective value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub value: Length,
    pub upgraded: UpgradeSet,
    /// Applied length of every edge, keyed by child label.
    pub applied_weights: BTreeMap<NodeLabel, Length>,
}

impl Solution {
    /// Builds the solution for `s`, evaluating its objective on `tree`.
    pub fn from_set(tree: &RootedTree, s: UpgradeSet) -> Result<Self, TreeError> {
        let value = evaluate_min_distance(tree, &s)?;
        let applied_weights = applied_weights(tree, &s)?;
        Ok(Self {
            value,
            upgraded: s,
            applied_weights,
        })
    }
}

/// Applied edge lengths under upgrade set `s`.
pub fn applied_weights(
    tree: &RootedTree,
    s: &UpgradeSet,
) -> Result<BTreeMap<NodeLabel, Length>, TreeError> {
    tree.check_upgrade_set(s)?;
    let mask = tree.mask_of(s);
    Ok((0..tree.node_count())
        .filter(|&c| tree.parent[c].is_some())
        .map(|c| (tree.labels[c], tree.applied_idx(c, &mask)))
        .collect())
}

/// Minimum root-leaf distance after upgrading every node of `s`.
pub fn evaluate_min_distance(tree: &RootedTree, s: &UpgradeSet) -> Result<Length, TreeError> {
    tree.check_upgrade_set(s)?;
    Ok(tree.min_distance_with(&tree.mask_of(s)))
}

/// Minimum root-leaf distance with every non-leaf node upgraded, i.e. the
/// minimum root-leaf path length under `u`. No budget can exceed this.
pub fn all_upgraded_min_distance(tree: &RootedTree) -> Length {
    let mask: Vec<bool> = (0..tree.node_count())
        .map(|v| !tree.children[v].is_empty())
        .collect();
    tree.min_distance_with(&mask)
}
