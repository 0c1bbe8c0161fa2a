//! Timing harness: average, maximum and minimum wall time of both solvers
//! over seeded random instances of increasing size.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::budget::solve_mcspit;
use crate::dp::solve_mspit;
use crate::testkit::{random_tree, GeneratorConfig, Shape};
use crate::tree::{all_upgraded_min_distance, evaluate_min_distance, Length, UpgradeSet};

/// How the max-distance budget is chosen from the instance size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetRule {
    /// `K = ceil(n / 10)`.
    Tenth,
    Fixed(usize),
    /// Every non-leaf node.
    All,
}

impl BudgetRule {
    pub fn budget(self, n: usize, non_leaves: usize) -> usize {
        match self {
            BudgetRule::Tenth => n.div_ceil(10),
            BudgetRule::Fixed(k) => k,
            BudgetRule::All => non_leaves,
        }
    }
}

impl fmt::Display for BudgetRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BudgetRule::Tenth => f.write_str("tenth"),
            BudgetRule::Fixed(k) => write!(f, "fixed:{k}"),
            BudgetRule::All => f.write_str("all"),
        }
    }
}

impl FromStr for BudgetRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tenth" => Ok(BudgetRule::Tenth),
            "all" => Ok(BudgetRule::All),
            _ => s
                .strip_prefix("fixed:")
                .and_then(|k| k.parse().ok())
                .map(BudgetRule::Fixed)
                .ok_or_else(|| format!("unknown budget rule `{s}` (tenth, all, fixed:K)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub budget_rule: BudgetRule,
    pub shape: Shape,
    pub w_max: u64,
    pub delta_max: u64,
    /// Run the trials of one size on separate threads.
    pub parallel: bool,
}

impl BenchConfig {
    pub fn new(sizes: Vec<usize>, trials: usize, seed: u64) -> Self {
        Self {
            sizes,
            trials,
            seed,
            budget_rule: BudgetRule::Tenth,
            shape: Shape::UniformAttachment,
            w_max: 100,
            delta_max: 100,
            parallel: false,
        }
    }

    /// Generator seed of trial `trial` at size `n`.
    pub fn instance_seed(&self, n: usize, trial: usize) -> u64 {
        self.seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(((n as u64) << 20) | trial as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeStats {
    pub avg_ms: f64,
    pub max_ms: f64,
    pub min_ms: f64,
}

impl TimeStats {
    fn from_samples(ms: &[f64]) -> Self {
        Self {
            avg_ms: ms.iter().sum::<f64>() / ms.len() as f64,
            max_ms: ms.iter().copied().fold(f64::MIN, f64::max),
            min_ms: ms.iter().copied().fold(f64::MAX, f64::min),
        }
    }
}

/// Outcome of one instance; everything but the timings is deterministic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialResult {
    pub seed: u64,
    pub budget: usize,
    pub value: Length,
    pub target: Length,
    pub kstar: usize,
    #[serde(skip)]
    pub mspit_ms: f64,
    #[serde(skip)]
    pub mcspit_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub trials: Vec<TrialResult>,
    pub mspit: TimeStats,
    pub mcspit: TimeStats,
}

pub fn run_trial(config: &BenchConfig, n: usize, trial: usize) -> TrialResult {
    let seed = config.instance_seed(n, trial);
    let tree = random_tree(
        &GeneratorConfig::new(n, seed)
            .shape(config.shape)
            .weights(config.w_max, config.delta_max),
    );
    let budget = config.budget_rule.budget(n, tree.non_leaf_count());

    let start = Instant::now();
    let best = solve_mspit(&tree, budget);
    let mspit_ms = start.elapsed().as_secs_f64() * 1e3;

    let floor = evaluate_min_distance(&tree, &UpgradeSet::new()).unwrap();
    let target = (floor + all_upgraded_min_distance(&tree)) / 2;
    let start = Instant::now();
    let answer = solve_mcspit(&tree, target).expect("midpoint target is reachable");
    let mcspit_ms = start.elapsed().as_secs_f64() * 1e3;

    TrialResult {
        seed,
        budget,
        value: best.value,
        target,
        kstar: answer.kstar,
        mspit_ms,
        mcspit_ms,
    }
}

pub fn run_bench(config: &BenchConfig) -> Vec<BenchRow> {
    config
        .sizes
        .iter()
        .map(|&n| {
            let trials: Vec<TrialResult> = if config.parallel {
                std::thread::scope(|s| {
                    let handles: Vec<_> = (0..config.trials)
                        .map(|t| s.spawn(move || run_trial(config, n, t)))
                        .collect();
                    handles.into_iter().map(|h| h.join().unwrap()).collect()
                })
            } else {
                (0..config.trials).map(|t| run_trial(config, n, t)).collect()
            };
            let a: Vec<f64> = trials.iter().map(|t| t.mspit_ms).collect();
            let b: Vec<f64> = trials.iter().map(|t| t.mcspit_ms).collect();
            BenchRow {
                n,
                mspit: TimeStats::from_samples(&a),
                mcspit: TimeStats::from_samples(&b),
                trials,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_rules() {
        assert_eq!(BudgetRule::Tenth.budget(100, 40), 10);
        assert_eq!(BudgetRule::Tenth.budget(101, 40), 11);
        assert_eq!(BudgetRule::All.budget(100, 40), 40);
        assert_eq!("fixed:7".parse::<BudgetRule>(), Ok(BudgetRule::Fixed(7)));
        assert_eq!("tenth".parse::<BudgetRule>(), Ok(BudgetRule::Tenth));
        assert!("half".parse::<BudgetRule>().is_err());
    }

    #[test]
    fn single_size_aggregates() {
        let rows = run_bench(&BenchConfig::new(vec![100], 3, 1));
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert_eq!(r.trials.len(), 3);
        for s in [r.mspit, r.mcspit] {
            assert!(s.min_ms <= s.avg_ms && s.avg_ms <= s.max_ms);
        }
        assert!(r.trials.iter().all(|t| t.budget == 10));
    }

    #[test]
    fn parallel_matches_sequential() {
        let mut cfg = BenchConfig::new(vec![60, 80], 4, 9);
        let a = run_bench(&cfg);
        cfg.parallel = true;
        let b = run_bench(&cfg);
        let key = |t: &TrialResult| (t.seed, t.budget, t.value, t.target, t.kstar);
        for (x, y) in a.iter().zip(&b) {
            let xs: Vec<_> = x.trials.iter().map(key).collect();
            let ys: Vec<_> = y.trials.iter().map(key).collect();
            assert_eq!(xs, ys);
        }
    }
}
