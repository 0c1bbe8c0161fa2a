//! Structural scaffolding for the tree DP: layers, branching nodes,
//! critical descendants/ancestors, chains, and the bottom-up order.
//!
//! A *junction* is the root or any non-root node of undirected degree > 2.
//! Each junction owns one chain per critical descendant; a chain runs from
//! the junction down through degree-2 nodes until it reaches the next
//! junction or a leaf. Chains partition the edge set.

use std::collections::HashMap;

use crate::tree::{Length, NodeLabel, RootedTree};

/// `Layer(v)` per node and the layer number of each edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layers {
    layer: Vec<u32>,
    // Indexed by child; root slot unused.
    edge_layer: Vec<u32>,
    labels: HashMap<NodeLabel, usize>,
}

impl Layers {
    pub fn layer(&self, v: NodeLabel) -> Option<u32> {
        self.labels.get(&v).map(|&i| self.layer[i])
    }

    /// Layer number of the edge entering `child`.
    pub fn edge_layer(&self, child: NodeLabel) -> Option<u32> {
        let &i = self.labels.get(&child)?;
        (self.edge_layer[i] > 0).then_some(self.edge_layer[i])
    }
}

/// Layers by breadth-first search: the root has layer 1 and a node starts a
/// new layer exactly when its degree exceeds 2.
pub fn compute_layers(tree: &RootedTree) -> Layers {
    let n = tree.node_count();
    let mut layer = vec![0u32; n];
    let mut edge_layer = vec![0u32; n];
    for &v in tree.bfs_order() {
        match tree.parent_idx(v) {
            None => layer[v] = 1,
            Some(p) => {
                layer[v] = layer[p] + u32::from(tree.degree_idx(v) > 2);
                edge_layer[v] = layer[p].min(layer[v]);
            }
        }
    }
    Layers {
        layer,
        edge_layer,
        labels: (0..n).map(|i| (tree.label_of(i), i)).collect(),
    }
}

/// Branching set together with the critical descendant/ancestor relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalStructure {
    pub(crate) branching: Vec<usize>,
    // Empty for non-junctions; ascending index (= ascending label).
    pub(crate) cd: Vec<Vec<usize>>,
    pub(crate) ca: Vec<Option<usize>>,
    pub(crate) is_junction: Vec<bool>,
}

/// Finds `V*`, `CD` and `CA`.
///
/// Walking down from each junction through degree-2 nodes reaches exactly the
/// nodes that sit one layer deeper (branching nodes) or on the same layer
/// (leaves), so the walk and the layer-based characterisation agree.
pub fn critical_structure(tree: &RootedTree, layers: &Layers) -> CriticalStructure {
    let n = tree.node_count();
    let root = tree.root_idx();
    let is_junction: Vec<bool> = (0..n)
        .map(|v| v == root || tree.degree_idx(v) > 2)
        .collect();
    let branching: Vec<usize> = (0..n).filter(|&v| v != root && is_junction[v]).collect();

    let mut cd = vec![Vec::new(); n];
    let mut ca = vec![None; n];
    for top in (0..n).filter(|&v| is_junction[v]) {
        for &first in tree.children_idx(top) {
            let bottom = walk_to_bottom(tree, &is_junction, first);
            debug_assert_eq!(
                layers.layer[bottom],
                layers.layer[top] + u32::from(is_junction[bottom])
            );
            cd[top].push(bottom);
            ca[bottom] = Some(top);
        }
        cd[top].sort_unstable();
    }
    CriticalStructure {
        branching,
        cd,
        ca,
        is_junction,
    }
}

fn walk_to_bottom(tree: &RootedTree, is_junction: &[bool], mut v: usize) -> usize {
    while !is_junction[v] && tree.children_idx(v).len() == 1 {
        v = tree.children_idx(v)[0];
    }
    v
}

/// Path from a junction down to one of its critical descendants.
///
/// Position 0 is the edge leaving `top`; positions `1..beta` (the tail) are
/// reordered so their deltas are non-increasing, ties by ascending owner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub(crate) top_idx: usize,
    pub(crate) bottom_idx: usize,
    top: NodeLabel,
    bottom: NodeLabel,
    edges: Vec<NodeLabel>,
    owners: Vec<NodeLabel>,
    head_delta: Length,
    tail_deltas: Vec<Length>,
    w_sum: Length,
}

impl Chain {
    fn from_path(tree: &RootedTree, path: &[usize]) -> Self {
        // path: top, interior..., bottom
        let head = path[1];
        let mut tail: Vec<(Length, NodeLabel, NodeLabel)> = path
            .windows(2)
            .skip(1)
            .map(|e| (tree.delta_idx(e[1]), tree.label_of(e[0]), tree.label_of(e[1])))
            .collect();
        tail.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

        let mut edges = vec![tree.label_of(head)];
        edges.extend(tail.iter().map(|t| t.2));
        Self {
            top_idx: path[0],
            bottom_idx: *path.last().unwrap(),
            top: tree.label_of(path[0]),
            bottom: tree.label_of(*path.last().unwrap()),
            edges,
            owners: tail.iter().map(|t| t.1).collect(),
            head_delta: tree.delta_idx(head),
            tail_deltas: tail.iter().map(|t| t.0).collect(),
            w_sum: path[1..].iter().map(|&c| tree.w_idx(c)).sum(),
        }
    }

    pub fn top(&self) -> NodeLabel {
        self.top
    }

    pub fn bottom(&self) -> NodeLabel {
        self.bottom
    }

    /// Edge count.
    pub fn beta(&self) -> usize {
        self.edges.len()
    }

    /// Edges (by child label) in processing order: head, then sorted tail.
    pub fn edges(&self) -> &[NodeLabel] {
        &self.edges
    }

    pub fn head_delta(&self) -> Length {
        self.head_delta
    }

    pub fn tail_deltas(&self) -> &[Length] {
        &self.tail_deltas
    }

    /// Interior node whose child edge sits at each tail position.
    pub fn original_owner(&self) -> &[NodeLabel] {
        &self.owners
    }

    /// Base length of the whole chain.
    pub fn w_sum(&self) -> Length {
        self.w_sum
    }
}

/// One chain per critical descendant, indexed densely by the bottom node.
pub fn extract_chains(tree: &RootedTree, cs: &CriticalStructure) -> Vec<Option<Chain>> {
    let mut chains = vec![None; tree.node_count()];
    for (top, bottoms) in cs.cd.iter().enumerate() {
        for &bottom in bottoms {
            let mut path = vec![bottom];
            let mut v = bottom;
            while v != top {
                v = tree.parent_idx(v).expect("chain climbs to its top");
                path.push(v);
            }
            path.reverse();
            chains[bottom] = Some(Chain::from_path(tree, &path));
        }
    }
    chains
}

/// Junctions by descending layer, ties by descending label.
pub fn processing_order(cs: &CriticalStructure, layers: &Layers) -> Vec<usize> {
    let mut order: Vec<usize> = (0..cs.is_junction.len())
        .filter(|&v| cs.is_junction[v])
        .collect();
    order.sort_by(|&a, &b| layers.layer[b].cmp(&layers.layer[a]).then(b.cmp(&a)));
    order
}

/// Everything the DP needs, derived once from an immutable tree.
#[derive(Debug, Clone)]
pub struct Decomposition {
    labels: Vec<NodeLabel>,
    index: HashMap<NodeLabel, usize>,
    layers: Layers,
    pub(crate) structure: CriticalStructure,
    pub(crate) chains: Vec<Option<Chain>>,
    pub(crate) order: Vec<usize>,
}

impl Decomposition {
    pub fn new(tree: &RootedTree) -> Self {
        let layers = compute_layers(tree);
        let structure = critical_structure(tree, &layers);
        let chains = extract_chains(tree, &structure);
        let order = processing_order(&structure, &layers);
        Self {
            labels: tree.labels().to_vec(),
            index: layers.labels.clone(),
            layers,
            structure,
            chains,
            order,
        }
    }

    pub fn layers(&self) -> &Layers {
        &self.layers
    }

    pub fn layer(&self, v: NodeLabel) -> Option<u32> {
        self.layers.layer(v)
    }

    pub fn edge_layer(&self, child: NodeLabel) -> Option<u32> {
        self.layers.edge_layer(child)
    }

    /// Non-root nodes of degree > 2, ascending.
    pub fn branching(&self) -> Vec<NodeLabel> {
        self.structure
            .branching
            .iter()
            .map(|&v| self.labels[v])
            .collect()
    }

    /// Critical descendants of a junction in branch order; empty otherwise.
    pub fn cd(&self, v: NodeLabel) -> Vec<NodeLabel> {
        self.index
            .get(&v)
            .map(|&i| self.structure.cd[i].iter().map(|&c| self.labels[c]).collect())
            .unwrap_or_default()
    }

    pub fn ca(&self, v: NodeLabel) -> Option<NodeLabel> {
        let &i = self.index.get(&v)?;
        self.structure.ca[i].map(|a| self.labels[a])
    }

    /// The chain ending at critical descendant `v`.
    pub fn chain(&self, v: NodeLabel) -> Option<&Chain> {
        self.chains[*self.index.get(&v)?].as_ref()
    }

    pub fn chains(&self) -> impl Iterator<Item = &Chain> {
        self.chains.iter().flatten()
    }

    /// Junctions in bottom-up processing order.
    pub fn order(&self) -> Vec<NodeLabel> {
        self.order.iter().map(|&v| self.labels[v]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::example1;
    use crate::tree::{build_tree, EdgeRecord};

    fn path_tree(deltas: &[i64]) -> RootedTree {
        let recs: Vec<_> = deltas
            .iter()
            .enumerate()
            .map(|(i, &d)| EdgeRecord::new(i as u64 + 2, i as u64 + 1, 1, 1 + d))
            .collect();
        build_tree(&recs, 1).unwrap()
    }

    #[test]
    fn example1_layers() {
        let d = Decomposition::new(&example1());
        assert_eq!(d.layer(1), Some(1));
        assert_eq!(d.layer(2), Some(2));
        assert_eq!(d.layer(5), Some(1));
        assert_eq!(d.layer(7), Some(2));
        assert_eq!(d.edge_layer(2), Some(1));
        assert_eq!(d.edge_layer(1), None);
    }

    #[test]
    fn path_layers_are_all_one() {
        let t = path_tree(&[1, 2, 3, 4, 5]);
        let d = Decomposition::new(&t);
        for v in 1..=6 {
            assert_eq!(d.layer(v), Some(1));
        }
        assert_eq!(d.order(), vec![1]);
        assert!(d.branching().is_empty());
    }

    #[test]
    fn example1_critical_structure() {
        let d = Decomposition::new(&example1());
        assert_eq!(d.branching(), vec![2, 7]);
        assert_eq!(d.cd(1), vec![2, 6, 7]);
        assert_eq!(d.cd(2), vec![3, 4]);
        assert_eq!(d.cd(7), vec![8, 10]);
        assert_eq!(d.ca(2), Some(1));
        assert_eq!(d.ca(10), Some(7));
        assert_eq!(d.ca(9), None);
        assert_eq!(d.order(), vec![7, 2, 1]);
    }

    #[test]
    fn example1_chains() {
        let d = Decomposition::new(&example1());
        let c6 = d.chain(6).unwrap();
        assert_eq!((c6.top(), c6.beta(), c6.w_sum()), (1, 2, 9));
        assert_eq!(c6.head_delta(), 9);
        assert_eq!(c6.tail_deltas(), &[2]);
        assert_eq!(c6.original_owner(), &[5]);

        let c10 = d.chain(10).unwrap();
        assert_eq!((c10.top(), c10.beta(), c10.w_sum()), (7, 2, 9));
        assert_eq!(c10.head_delta(), 6);
        assert_eq!(c10.tail_deltas(), &[5]);
        assert_eq!(c10.original_owner(), &[9]);

        assert_eq!(d.chains().map(Chain::beta).sum::<usize>(), 9);
    }

    #[test]
    fn tail_is_sorted_and_owners_follow() {
        let t = path_tree(&[4, 3, 9, 5]);
        let d = Decomposition::new(&t);
        let c = d.chain(5).unwrap();
        assert_eq!(c.head_delta(), 4);
        assert_eq!(c.tail_deltas(), &[9, 5, 3]);
        assert_eq!(c.original_owner(), &[3, 4, 2]);
        assert_eq!(c.edges(), &[2, 4, 5, 3]);
    }

    #[test]
    fn tail_ties_break_by_owner() {
        let t = path_tree(&[0, 2, 2, 2]);
        let c = Decomposition::new(&t).chain(5).cloned().unwrap();
        assert_eq!(c.original_owner(), &[2, 3, 4]);
    }

    #[test]
    fn star_has_only_the_root_junction() {
        let recs: Vec<_> = (2..=6).map(|c| EdgeRecord::new(c, 1, 1, 2)).collect();
        let d = Decomposition::new(&build_tree(&recs, 1).unwrap());
        assert_eq!(d.order(), vec![1]);
        assert_eq!(d.cd(1), vec![2, 3, 4, 5, 6]);
        assert!(d.chains().all(|c| c.beta() == 1));
    }
}
