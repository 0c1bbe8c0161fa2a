//! Brute-force oracles and a seeded instance generator.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::tree::{
    all_upgraded_min_distance, build_tree, evaluate_min_distance, EdgeRecord, Length, RootedTree,
    UpgradeSet,
};

/// Largest non-leaf count the oracles will enumerate.
pub const ORACLE_LIMIT: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{non_leaves} non-leaf nodes exceeds the oracle limit of {limit}")]
    TooLargeForOracle { non_leaves: usize, limit: usize },
    #[error("unreachable: ceiling {ceiling} is below target {target}")]
    TargetUnreachable { target: Length, ceiling: Length },
}

fn guard(tree: &RootedTree) -> Result<(), OracleError> {
    let non_leaves = tree.non_leaf_count();
    if non_leaves > ORACLE_LIMIT {
        return Err(OracleError::TooLargeForOracle {
            non_leaves,
            limit: ORACLE_LIMIT,
        });
    }
    Ok(())
}

/// Exact optimum by enumerating every set of at most `budget` non-leaves.
///
/// Subsets are visited by increasing size, lexicographically within a size,
/// and only a strictly better value replaces the incumbent.
pub fn brute_force_mspit(
    tree: &RootedTree,
    budget: usize,
) -> Result<(Length, UpgradeSet), OracleError> {
    guard(tree)?;
    let candidates = tree.non_leaves();
    let ceiling = all_upgraded_min_distance(tree);
    let mut best = (
        evaluate_min_distance(tree, &UpgradeSet::new()).unwrap(),
        UpgradeSet::new(),
    );
    for size in 1..=budget.min(candidates.len()) {
        if best.0 == ceiling {
            break;
        }
        for combo in candidates.iter().copied().combinations(size) {
            let s = UpgradeSet::from_iter(combo);
            let value = evaluate_min_distance(tree, &s).unwrap();
            if value > best.0 {
                best = (value, s);
                if value == ceiling {
                    break;
                }
            }
        }
    }
    Ok(best)
}

/// Smallest budget reaching `target`, by linear scan of the oracle.
pub fn brute_force_mcspit(tree: &RootedTree, target: Length) -> Result<usize, OracleError> {
    guard(tree)?;
    let ceiling = all_upgraded_min_distance(tree);
    if ceiling < target {
        return Err(OracleError::TargetUnreachable { target, ceiling });
    }
    (0..=tree.non_leaf_count())
        .find(|&k| brute_force_mspit(tree, k).map(|b| b.0 >= target).unwrap_or(false))
        .ok_or(OracleError::TargetUnreachable { target, ceiling })
}

/// Tree shapes the generator can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    /// Each new node attaches to a uniformly random earlier node.
    UniformAttachment,
    /// A spine path with every other node hung directly off it.
    Caterpillar,
    /// A long handle into a head node that carries path-shaped bristles.
    Broom,
    /// Each new node attaches to a random node with fewer than two children.
    BinaryIsh,
    /// A single root-leaf path.
    Path,
    /// Every node a child of the root.
    Star,
}

impl Shape {
    pub const ALL: [Shape; 6] = [
        Shape::UniformAttachment,
        Shape::Caterpillar,
        Shape::Broom,
        Shape::BinaryIsh,
        Shape::Path,
        Shape::Star,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Shape::UniformAttachment => "uniform-attachment",
            Shape::Caterpillar => "caterpillar",
            Shape::Broom => "broom",
            Shape::BinaryIsh => "binary-ish",
            Shape::Path => "path",
            Shape::Star => "star",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Shape {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Shape::ALL
            .into_iter()
            .find(|sh| sh.name() == s)
            .ok_or_else(|| format!("unknown shape `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub n: usize,
    pub seed: u64,
    pub w_max: u64,
    pub delta_max: u64,
    pub shape: Shape,
}

impl GeneratorConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            seed,
            w_max: 20,
            delta_max: 20,
            shape: Shape::UniformAttachment,
        }
    }

    pub fn shape(mut self, shape: Shape) -> Self {
        self.shape = shape;
        self
    }

    pub fn weights(mut self, w_max: u64, delta_max: u64) -> Self {
        self.w_max = w_max;
        self.delta_max = delta_max;
        self
    }
}

/// Seeded random instance with nodes `1..=n` rooted at 1.
///
/// # Panics
///
/// If `config.n < 2`.
pub fn random_tree(config: &GeneratorConfig) -> RootedTree {
    let n = config.n;
    assert!(n >= 2, "generator needs at least 2 nodes");
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    // parent[i] is the parent of node i; slots 0 and 1 unused
    let mut parent = vec![0usize; n + 1];
    match config.shape {
        Shape::UniformAttachment => {
            for i in 2..=n {
                parent[i] = rng.gen_range(1..i);
            }
        }
        Shape::Caterpillar => {
            let spine = n.div_ceil(2);
            for i in 2..=spine {
                parent[i] = i - 1;
            }
            for i in spine + 1..=n {
                parent[i] = rng.gen_range(1..=spine);
            }
        }
        Shape::Broom => {
            let handle = rng.gen_range(n.div_ceil(3)..n);
            for i in 2..=handle {
                parent[i] = i - 1;
            }
            for i in handle + 1..=n {
                parent[i] = if i == handle + 1 || rng.gen_bool(0.5) {
                    handle
                } else {
                    i - 1
                };
            }
        }
        Shape::BinaryIsh => {
            let mut open = vec![1usize];
            let mut kids = vec![0u8; n + 1];
            for i in 2..=n {
                let slot = rng.gen_range(0..open.len());
                let p = open[slot];
                parent[i] = p;
                kids[p] += 1;
                if kids[p] == 2 {
                    open.swap_remove(slot);
                }
                open.push(i);
            }
        }
        Shape::Path => {
            for i in 2..=n {
                parent[i] = i - 1;
            }
        }
        Shape::Star => {
            for p in parent.iter_mut().skip(2) {
                *p = 1;
            }
        }
    }

    let records: Vec<EdgeRecord> = (2..=n)
        .map(|i| {
            let w = rng.gen_range(0..=config.w_max);
            let u = w + rng.gen_range(0..=config.delta_max);
            EdgeRecord::new(i as u64, parent[i] as u64, w as i64, u as i64)
        })
        .collect();
    build_tree(&records, 1).expect("generator emits valid trees")
}
