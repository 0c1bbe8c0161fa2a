//! Per-chain value tables.
//!
//! For a chain with `beta` edges, `g(eps, k)` is the largest chain length
//! reachable with `k` upgrades among the chain's `beta` upgradable nodes (the
//! top junction plus the interior nodes), where `eps` says whether the top is
//! one of them. Since interior upgrades only touch their own edge, the best
//! choice is always a prefix of the delta-sorted tail.

use thiserror::Error;

use crate::decomposition::Chain;
use crate::tree::{Length, NodeLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("chain entry (eps={eps}, k={k}) is outside the feasible domain")]
pub struct InfeasibleIndex {
    pub eps: u8,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainTable {
    beta: usize,
    // g0[k] for 0 <= k <= min(beta-1, K)
    g0: Vec<Length>,
    // g1[k-1] for 1 <= k <= min(beta, K)
    g1: Vec<Length>,
}

/// Builds `g` with running prefix sums over the sorted tail.
pub fn chain_g_table(chain: &Chain, budget: usize) -> ChainTable {
    let beta = chain.beta();
    let tail = chain.tail_deltas();

    let mut g0 = Vec::with_capacity(beta.min(budget + 1));
    let mut acc = chain.w_sum();
    g0.push(acc);
    for &d in tail.iter().take(budget) {
        acc += d;
        g0.push(acc);
    }

    let mut g1 = Vec::new();
    if budget >= 1 {
        let mut acc = chain.w_sum() + chain.head_delta();
        g1.push(acc);
        for &d in tail.iter().take(budget - 1) {
            acc += d;
            g1.push(acc);
        }
    }
    ChainTable { beta, g0, g1 }
}

impl ChainTable {
    pub fn beta(&self) -> usize {
        self.beta
    }

    /// Largest `k` stored for `eps`, or `None` if the side is empty.
    pub fn k_max(&self, eps: u8) -> Option<usize> {
        match eps {
            0 => Some(self.g0.len() - 1),
            _ => (!self.g1.is_empty()).then_some(self.g1.len()),
        }
    }

    pub fn is_feasible(&self, eps: u8, k: usize) -> bool {
        self.get(eps, k).is_ok()
    }

    pub fn get(&self, eps: u8, k: usize) -> Result<Length, InfeasibleIndex> {
        let v = match eps {
            0 => self.g0.get(k),
            1 if k >= 1 => self.g1.get(k - 1),
            _ => None,
        };
        v.copied().ok_or(InfeasibleIndex { eps, k })
    }

    /// Number of tail positions upgraded at `(eps, k)`.
    pub fn prefix(&self, eps: u8, k: usize) -> Result<usize, InfeasibleIndex> {
        self.get(eps, k)?;
        Ok(k - usize::from(eps))
    }
}

/// Nodes upgraded on `chain` at `(eps, k)`, the top included when `eps = 1`.
pub fn chain_upgrade_set(
    chain: &Chain,
    table: &ChainTable,
    eps: u8,
    k: usize,
) -> Result<Vec<NodeLabel>, InfeasibleIndex> {
    let tail = table.prefix(eps, k)?;
    let mut out = Vec::with_capacity(k);
    if eps == 1 {
        out.push(chain.top());
    }
    out.extend_from_slice(&chain.original_owner()[..tail]);
    Ok(out)
}
