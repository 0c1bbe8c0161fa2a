//! Command-line front end. The binary only parses arguments and calls
//! [`run`]; everything here is testable in-process.
//!
//! Exit codes: 0 success, 2 input error, 3 unreachable target, 4 oracle
//! mismatch (`verify` only).

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::bench::{run_bench, BenchConfig, BenchRow, BudgetRule};
use crate::budget::{solve_mcspit, BudgetError};
use crate::decomposition::Decomposition;
use crate::dp::solve_mspit;
use crate::format::{emit_instance, format_length, parse_instance_scaled};
use crate::testkit::{
    brute_force_mcspit, brute_force_mspit, random_tree, GeneratorConfig, OracleError, Shape,
};
use crate::tree::{evaluate_min_distance, Length, RootedTree};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNREACHABLE: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "tree-interdiction", version, about = "Shortest-path interdiction by upgrading tree nodes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputOpts {
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Leave wall-clock fields out so output is byte-reproducible.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct InputOpts {
    pub input: PathBuf,
    /// Fixed-point digits for decimal lengths (lengths are scaled by 10^s).
    #[arg(long, default_value_t = 0)]
    pub scale: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximise the shortest root-leaf distance with at most K upgrades.
    SolveMax {
        #[command(flatten)]
        input: InputOpts,
        #[arg(long)]
        budget: usize,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Fewest upgrades reaching shortest root-leaf distance D.
    SolveCost {
        #[command(flatten)]
        input: InputOpts,
        #[arg(long)]
        target: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Write a seeded random instance.
    Gen {
        #[arg(long)]
        nodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        wmax: u64,
        #[arg(long, default_value_t = 20)]
        dmax: u64,
        #[arg(long, default_value = "uniform-attachment")]
        shape: Shape,
        /// Output file; the instance goes to stdout when omitted.
        output: Option<PathBuf>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Cross-check the DP against the brute-force oracle.
    Verify {
        #[command(flatten)]
        input: InputOpts,
        #[arg(long, conflicts_with_all = ["target", "all_budgets"])]
        budget: Option<usize>,
        #[arg(long, conflicts_with = "all_budgets")]
        target: Option<String>,
        /// Check every budget from 0 to the non-leaf count.
        #[arg(long)]
        all_budgets: bool,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Time both solvers on generated instances.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "100,500,1000,2000,3000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "tenth")]
        budget_rule: BudgetRule,
        #[arg(long, default_value = "uniform-attachment")]
        shape: Shape,
        /// Run the trials of one size concurrently.
        #[arg(long)]
        parallel: bool,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Print layers, critical descendants and chains.
    Inspect {
        #[command(flatten)]
        input: InputOpts,
        #[command(flatten)]
        out: OutputOpts,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceDigest {
    pub n: usize,
    pub leaves: usize,
    pub non_leaves: usize,
}

impl InstanceDigest {
    pub fn of(tree: &RootedTree) -> Self {
        Self {
            n: tree.node_count(),
            leaves: tree.node_count() - tree.non_leaf_count(),
            non_leaves: tree.non_leaf_count(),
        }
    }
}

/// What every command prints.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceDigest>,
    pub result: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upgraded: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunReport {
    fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            summary: None,
            instance: None,
            result: Map::new(),
            upgraded: None,
            wall_ms: None,
            seed: None,
        }
    }

    fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.result.insert(key.to_string(), value.into());
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serialises");
                s.push('\n');
                s
            }
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        if let Some(s) = &self.summary {
            out.push_str(s);
            out.push('\n');
        }
        out.push_str(&format!("command={}\n", self.command));
        if let Some(d) = &self.instance {
            out.push_str(&format!(
                "n={}\nleaves={}\nnon_leaves={}\n",
                d.n, d.leaves, d.non_leaves
            ));
        }
        for (k, v) in &self.result {
            match v {
                Value::String(s) => out.push_str(&format!("{k}={s}\n")),
                Value::Array(rows) if !rows.is_empty() && rows.iter().all(Value::is_object) => {
                    for row in rows {
                        out.push_str(&format!("{k}:"));
                        for (rk, rv) in row.as_object().unwrap() {
                            out.push_str(&format!(" {rk}={}", compact(rv)));
                        }
                        out.push('\n');
                    }
                }
                other => out.push_str(&format!("{k}={}\n", compact(other))),
            }
        }
        if let Some(u) = &self.upgraded {
            out.push_str(&format!("upgraded={}\n", compact(&json!(u))));
        }
        if let Some(ms) = self.wall_ms {
            out.push_str(&format!("wall_ms={ms:.3}\n"));
        }
        if let Some(seed) = self.seed {
            out.push_str(&format!("seed={seed}\n"));
        }
        out
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Result of running one command.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    /// Text for stdout.
    pub stdout: String,
    /// Diagnostic for stderr.
    pub stderr: String,
}

impl Outcome {
    fn report(report: &RunReport, out: &OutputOpts, code: i32) -> Self {
        Self {
            code,
            stdout: report.render(out.format),
            stderr: String::new(),
        }
    }

    fn input_error(msg: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

fn load(input: &InputOpts) -> Result<RootedTree, Outcome> {
    let text = fs::read_to_string(&input.input)
        .map_err(|e| Outcome::input_error(format!("{}: {e}", input.input.display())))?;
    parse_instance_scaled(&text, input.scale)
        .map_err(|e| Outcome::input_error(format!("{}: {e}", input.input.display())))
}

fn parse_target(tok: &str, scale: u32) -> Result<Length, Outcome> {
    // Reuse the instance length syntax through a one-edge document.
    let doc = format!("2 1\n2 1 {tok} {tok}\n");
    parse_instance_scaled(&doc, scale)
        .map(|t| t.w(2).unwrap())
        .map_err(|_| Outcome::input_error(format!("`{tok}` is not a valid target")))
}

fn elapsed_ms(start: Instant, out: &OutputOpts) -> Option<f64> {
    (!out.no_timing).then(|| start.elapsed().as_secs_f64() * 1e3)
}

fn length_value(v: Length, scale: u32) -> Value {
    if scale == 0 {
        json!(v)
    } else {
        json!(format_length(v, scale))
    }
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::SolveMax { input, budget, out } => cmd_solve_max(&input, budget, &out),
        Command::SolveCost { input, target, out } => cmd_solve_cost(&input, &target, &out),
        Command::Gen {
            nodes,
            seed,
            wmax,
            dmax,
            shape,
            output,
            out,
        } => {
            let cfg = GeneratorConfig::new(nodes, seed)
                .shape(shape)
                .weights(wmax, dmax);
            cmd_gen(&cfg, output.as_deref(), &out)
        }
        Command::Verify {
            input,
            budget,
            target,
            all_budgets,
            out,
        } => cmd_verify(&input, budget, target.as_deref(), all_budgets, &out),
        Command::Bench {
            sizes,
            trials,
            seed,
            budget_rule,
            shape,
            parallel,
            out,
        } => {
            let mut cfg = BenchConfig::new(sizes, trials, seed);
            cfg.budget_rule = budget_rule;
            cfg.shape = shape;
            cfg.parallel = parallel;
            cmd_bench(&cfg, &out)
        }
        Command::Inspect { input, out } => cmd_inspect(&input, &out),
    }
}

pub fn cmd_solve_max(input: &InputOpts, budget: usize, out: &OutputOpts) -> Outcome {
    let tree = match load(input) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let start = Instant::now();
    let sol = solve_mspit(&tree, budget);
    let mut report = RunReport::new("solve-max");
    report.wall_ms = elapsed_ms(start, out);
    report.instance = Some(InstanceDigest::of(&tree));
    report.set("budget", budget);
    report.set("value", length_value(sol.value, input.scale));
    report.upgraded = Some(sol.upgraded.to_vec());
    Outcome::report(&report, out, EXIT_OK)
}

pub fn cmd_solve_cost(input: &InputOpts, target: &str, out: &OutputOpts) -> Outcome {
    let tree = match load(input) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let target = match parse_target(target, input.scale) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let start = Instant::now();
    let answer = solve_mcspit(&tree, target);
    let mut report = RunReport::new("solve-cost");
    report.wall_ms = elapsed_ms(start, out);
    report.instance = Some(InstanceDigest::of(&tree));
    report.set("target", length_value(target, input.scale));
    match answer {
        Ok(a) => {
            report.set("kstar", a.kstar);
            report.set("value", length_value(a.solution.value, input.scale));
            report.set("probes", a.query.probes.len());
            report.upgraded = Some(a.solution.upgraded.to_vec());
            Outcome::report(&report, out, EXIT_OK)
        }
        Err(e @ BudgetError::TargetUnreachable { ceiling, .. }) => {
            report.set("error", e.to_string());
            report.set("ceiling", length_value(ceiling, input.scale));
            let mut o = Outcome::report(&report, out, EXIT_UNREACHABLE);
            o.stderr = format!("error: {e}\n");
            o
        }
    }
}

pub fn cmd_gen(cfg: &GeneratorConfig, output: Option<&Path>, out: &OutputOpts) -> Outcome {
    if cfg.n < 2 {
        return Outcome::input_error("--nodes must be at least 2");
    }
    let start = Instant::now();
    let tree = random_tree(cfg);
    let text = emit_instance(&tree);
    let Some(path) = output else {
        return Outcome {
            code: EXIT_OK,
            stdout: text,
            stderr: String::new(),
        };
    };
    if let Err(e) = fs::write(path, &text) {
        return Outcome::input_error(format!("{}: {e}", path.display()));
    }
    let mut report = RunReport::new("gen");
    report.wall_ms = elapsed_ms(start, out);
    report.instance = Some(InstanceDigest::of(&tree));
    report.set("shape", cfg.shape.name());
    report.set("wmax", cfg.w_max);
    report.set("dmax", cfg.delta_max);
    report.set("output", path.display().to_string());
    report.seed = Some(cfg.seed);
    Outcome::report(&report, out, EXIT_OK)
}

fn oracle_error(e: OracleError) -> Outcome {
    Outcome::input_error(e)
}

pub fn cmd_verify(
    input: &InputOpts,
    budget: Option<usize>,
    target: Option<&str>,
    all_budgets: bool,
    out: &OutputOpts,
) -> Outcome {
    let tree = match load(input) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let start = Instant::now();
    let mut report = RunReport::new("verify");
    report.instance = Some(InstanceDigest::of(&tree));

    let matched = if let Some(tok) = target {
        let d = match parse_target(tok, input.scale) {
            Ok(d) => d,
            Err(o) => return o,
        };
        let dp = solve_mcspit(&tree, d).map(|a| a.kstar);
        let oracle = match brute_force_mcspit(&tree, d) {
            Ok(k) => Ok(k),
            Err(OracleError::TargetUnreachable { ceiling, .. }) => Err(ceiling),
            Err(e) => return oracle_error(e),
        };
        let show = |r: Result<usize, Length>| match r {
            Ok(k) => k.to_string(),
            Err(c) => format!("unreachable(ceiling {c})"),
        };
        let dp = dp.map_err(|BudgetError::TargetUnreachable { ceiling, .. }| ceiling);
        let ok = dp == oracle;
        report.set("target", length_value(d, input.scale));
        report.set("dp", show(dp));
        report.set("oracle", show(oracle));
        report.summary = Some(format!(
            "dp={} oracle={} {}",
            show(dp),
            show(oracle),
            verdict(ok)
        ));
        ok
    } else {
        let budgets: Vec<usize> = match (budget, all_budgets) {
            (_, true) => (0..=tree.non_leaf_count()).collect(),
            (Some(k), false) => vec![k],
            (None, false) => {
                return Outcome::input_error("verify needs --budget, --target or --all-budgets")
            }
        };
        let mut rows = Vec::new();
        let mut all_ok = true;
        for &k in &budgets {
            let sol = solve_mspit(&tree, k);
            let (oracle, _) = match brute_force_mspit(&tree, k) {
                Ok(b) => b,
                Err(e) => return oracle_error(e),
            };
            let replay = evaluate_min_distance(&tree, &sol.upgraded).ok();
            let ok = sol.value == oracle
                && replay == Some(sol.value)
                && sol.upgraded.len() <= k;
            all_ok &= ok;
            rows.push(json!({
                "budget": k,
                "dp": length_value(sol.value, input.scale),
                "oracle": length_value(oracle, input.scale),
                "status": verdict(ok),
            }));
            if budgets.len() == 1 {
                report.upgraded = Some(sol.upgraded.to_vec());
                report.summary = Some(format!(
                    "dp={} oracle={} {}",
                    format_length(sol.value, input.scale),
                    format_length(oracle, input.scale),
                    verdict(ok)
                ));
            }
        }
        if budgets.len() > 1 {
            report.summary = Some(format!(
                "budgets=0..={} {}",
                tree.non_leaf_count(),
                verdict(all_ok)
            ));
        }
        report.set("checks", Value::Array(rows));
        all_ok
    };
    report.set("status", verdict(matched));
    report.wall_ms = elapsed_ms(start, out);
    Outcome::report(&report, out, if matched { EXIT_OK } else { EXIT_MISMATCH })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "MATCH"
    } else {
        "MISMATCH"
    }
}

pub fn bench_report(cfg: &BenchConfig, rows: &[BenchRow], with_timing: bool) -> RunReport {
    let mut report = RunReport::new("bench");
    report.seed = Some(cfg.seed);
    report.set("trials", cfg.trials);
    report.set("budget_rule", cfg.budget_rule.to_string());
    report.set("shape", cfg.shape.name());
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let mut row = Map::new();
            row.insert("n".into(), json!(r.n));
            row.insert(
                "budget".into(),
                json!(r.trials.first().map_or(0, |t| t.budget)),
            );
            row.insert(
                "values".into(),
                json!(r.trials.iter().map(|t| t.value).collect::<Vec<_>>()),
            );
            row.insert(
                "targets".into(),
                json!(r.trials.iter().map(|t| t.target).collect::<Vec<_>>()),
            );
            row.insert(
                "kstars".into(),
                json!(r.trials.iter().map(|t| t.kstar).collect::<Vec<_>>()),
            );
            if with_timing {
                for (name, s) in [("mspit", r.mspit), ("mcspit", r.mcspit)] {
                    row.insert(format!("{name}_avg_ms"), json!(round3(s.avg_ms)));
                    row.insert(format!("{name}_max_ms"), json!(round3(s.max_ms)));
                    row.insert(format!("{name}_min_ms"), json!(round3(s.min_ms)));
                }
            }
            Value::Object(row)
        })
        .collect();
    report.set("rows", Value::Array(rows));
    report
}

fn round3(x: f64) -> f64 {
    (x * 1e3).round() / 1e3
}

pub fn cmd_bench(cfg: &BenchConfig, out: &OutputOpts) -> Outcome {
    if cfg.trials == 0 {
        return Outcome::input_error("--trials must be positive");
    }
    if cfg.sizes.iter().any(|&n| n < 2) || !cfg.sizes.is_sorted() {
        return Outcome::input_error("--sizes must be ascending and at least 2");
    }
    let start = Instant::now();
    let rows = run_bench(cfg);
    let mut report = bench_report(cfg, &rows, !out.no_timing);
    report.wall_ms = elapsed_ms(start, out);
    Outcome::report(&report, out, EXIT_OK)
}

pub fn cmd_inspect(input: &InputOpts, out: &OutputOpts) -> Outcome {
    let tree = match load(input) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let d = Decomposition::new(&tree);
    let mut report = RunReport::new("inspect");
    report.instance = Some(InstanceDigest::of(&tree));
    let layers: Vec<Value> = tree
        .labels()
        .iter()
        .map(|&v| json!({ "node": v, "layer": d.layer(v) }))
        .collect();
    report.set("layers", Value::Array(layers));
    report.set("branching", json!(d.branching()));
    report.set("order", json!(d.order()));
    let chains: Vec<Value> = d
        .order()
        .into_iter()
        .flat_map(|v| d.cd(v))
        .map(|h| {
            let c = d.chain(h).unwrap();
            json!({
                "top": c.top(),
                "bottom": c.bottom(),
                "beta": c.beta(),
                "w_sum": c.w_sum(),
                "head_delta": c.head_delta(),
                "tail_deltas": c.tail_deltas(),
                "owners": c.original_owner(),
            })
        })
        .collect();
    report.set("chains", Value::Array(chains));
    Outcome::report(&report, out, EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::EXAMPLE1_TEXT;

    fn example_file() -> tempfile::NamedTempFile {
        let f = tempfile::NamedTempFile::new().unwrap();
        fs::write(f.path(), EXAMPLE1_TEXT).unwrap();
        f
    }

    fn opts(format: Format) -> OutputOpts {
        OutputOpts {
            format,
            no_timing: true,
        }
    }

    fn input(path: &Path) -> InputOpts {
        InputOpts {
            input: path.to_path_buf(),
            scale: 0,
        }
    }

    #[test]
    fn solve_max_text() {
        let f = example_file();
        let o = cmd_solve_max(&input(f.path()), 1, &opts(Format::Text));
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("value=13\n"));
        assert!(o.stdout.contains("upgraded=[1]\n"));
        let o = cmd_solve_max(&input(f.path()), 0, &opts(Format::Text));
        assert!(o.stdout.contains("value=7\n") && o.stdout.contains("upgraded=[]\n"));
    }

    #[test]
    fn solve_cost_codes() {
        let f = example_file();
        let o = cmd_solve_cost(&input(f.path()), "13", &opts(Format::Json));
        assert_eq!(o.code, 0);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["result"]["kstar"], 1);
        let o = cmd_solve_cost(&input(f.path()), "21", &opts(Format::Text));
        assert_eq!(o.code, EXIT_UNREACHABLE);
        assert!(o.stderr.contains("unreachable: ceiling 20"));
    }

    #[test]
    fn verify_summary_line() {
        let f = example_file();
        let o = cmd_verify(&input(f.path()), Some(1), None, false, &opts(Format::Text));
        assert_eq!(o.code, 0);
        assert!(o.stdout.starts_with("dp=13 oracle=13 MATCH\n"));
        let o = cmd_verify(&input(f.path()), None, Some("14"), false, &opts(Format::Text));
        assert!(o.stdout.starts_with("dp=2 oracle=2 MATCH\n"), "{}", o.stdout);
    }

    #[test]
    fn scaled_input() {
        let f = tempfile::NamedTempFile::new().unwrap();
        fs::write(f.path(), "3 1\n2 1 0.5 1.25\n3 1 1 1.5\n").unwrap();
        let inp = InputOpts {
            input: f.path().to_path_buf(),
            scale: 2,
        };
        let o = cmd_solve_max(&inp, 1, &opts(Format::Text));
        assert!(o.stdout.contains("value=1.25\n"), "{}", o.stdout);
        let o = cmd_solve_cost(&inp, "1.25", &opts(Format::Text));
        assert!(o.stdout.contains("kstar=1\n"), "{}", o.stdout);
    }

    #[test]
    fn bad_input_exits_2() {
        let f = tempfile::NamedTempFile::new().unwrap();
        fs::write(f.path(), "3 1\n2 1 1 2\n3 2 x 10\n").unwrap();
        let o = cmd_solve_max(&input(f.path()), 1, &opts(Format::Text));
        assert_eq!(o.code, EXIT_INPUT);
        assert!(o.stderr.contains("line 3"), "{}", o.stderr);
    }
}
