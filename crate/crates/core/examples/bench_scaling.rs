//! Wall time of both solvers as the tree grows.
//!
//!     cargo run --release --example bench_scaling -- [sizes] [trials]

use tree_interdiction::bench::{run_bench, BenchConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let sizes: Vec<usize> = args
        .next()
        .unwrap_or_else(|| "100,500,1000,2000,3000".into())
        .split(',')
        .map(|s| s.trim().parse().unwrap())
        .collect();
    let trials = args.next().map_or(3, |s| s.parse().unwrap());

    let rows = run_bench(&BenchConfig::new(sizes, trials, 1));
    println!(
        "{:>6} {:>4} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "n", "K", "max avg", "max max", "max min", "cost avg", "cost max", "cost min"
    );
    for r in rows {
        println!(
            "{:>6} {:>4} {:>10.3} {:>10.3} {:>10.3} {:>10.3} {:>10.3} {:>10.3}",
            r.n,
            r.trials[0].budget,
            r.mspit.avg_ms,
            r.mspit.max_ms,
            r.mspit.min_ms,
            r.mcspit.avg_ms,
            r.mcspit.max_ms,
            r.mcspit.min_ms
        );
    }
}
