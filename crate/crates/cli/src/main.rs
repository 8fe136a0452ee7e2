//! Command-line front end. Every command prints one JSON report on stdout
//! unless it streams an edge list or CSV there instead.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use turan_cycles::blowup::{exact_blowup_cycle_count, leading_coefficient, BlowupSpec};
use turan_cycles::certificate::{certify, DEFAULT_M_BUDGET};
use turan_cycles::constructions::{
    balanced_blowup_spec, proposition_graph, verify_proposition, PropositionRow,
};
use turan_cycles::cycles::{count_cycles, shortest_odd_cycle};
use turan_cycles::graph::{format_edge_list, parse_edge_list};
use turan_cycles::repro::{fmt_real, run_suite, Suite, SuiteReport, Table};
use turan_cycles::search::exhaustive_max;
use turan_cycles::stability::{
    greedy_odd_cycle_removal, recover_partition, PartitionResult, ToleranceConfig,
};
use turan_cycles::weights::{f_value, k0_search, optimize_coefficient, OptimizerConfig};
use turan_cycles::{Error, Graph, VertexSet};

const AFTER_HELP: &str = "\
Graphs use the edge-list format: the first line holds the vertex count n,
every further line `u v` with 0-based vertices; `#` starts a comment.

Counts and rationals are emitted as decimal strings, reals with 17
significant digits. Exit status: 0 success, 1 verification failure,
2 usage or input error.";

#[derive(Parser)]
#[command(name = "turan-cycles", version, about = "Generalized Turán computations for odd cycles", after_help = AFTER_HELP)]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "TURAN_CYCLES_THREADS")]
    threads: Option<usize>,

    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count cycles of a given length.
    Count {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        length: usize,
    },
    /// Length of the shortest odd cycle (null when bipartite).
    OddGirth {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Blow-ups of cycles.
    #[command(subcommand)]
    Blowup(BlowupCommand),
    /// Best good-sequence certificate and the M-bound for k-cycles.
    Certify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        /// Maximum number of k-cycles examined when computing M.
        #[arg(long, default_value_t = DEFAULT_M_BUDGET)]
        budget: usize,
    },
    /// Structure extraction for graphs close to a blow-up.
    #[command(subcommand)]
    Stability(StabilityCommand),
    /// Weight inequalities and coefficient optimization.
    #[command(subcommand)]
    Weights(WeightsCommand),
    /// Emit explicit constructions as edge lists.
    #[command(
        subcommand,
        after_help = "Construction vertices v_1..v_{k-1} are 0..k-2; w_i is k-2+i."
    )]
    Construct(ConstructCommand),
    /// Check exact formulas.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Exhaustive maximum of k-cycles over C_ell-free graphs on n <= 8 vertices.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        ell: usize,
    },
    /// Run a reproduction suite and write its CSV tables.
    #[command(
        after_help = "Suites: proposition, oracle, certificate, stability, thresholds, optimizer, search, walk-bound, all."
    )]
    Repro {
        suite: String,
        /// Directory for CSV tables.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum BlowupCommand {
    /// Exact number of k-cycles in the blow-up.
    Count {
        #[arg(long)]
        base: usize,
        #[arg(long, value_delimiter = ',')]
        parts: Vec<usize>,
        #[arg(long)]
        k: usize,
    },
    /// Leading coefficient of the k-cycle count for part fractions w.
    Coeff {
        #[arg(long)]
        base: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Vec<f64>,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum StabilityCommand {
    /// Extract U_i, refine to W_i and reclassify leftovers.
    Extract {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.3)]
        eps4: f64,
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
    },
    /// Delete edges until no odd cycle shorter than k remains.
    Clean {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        /// Write the cleaned edge list here instead of embedding it.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum WeightsCommand {
    /// f(k, ell); positive exactly when the unbalanced blow-up wins.
    F {
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        k: usize,
    },
    /// Smallest odd k <= kmax with f(k, ell) > 0.
    #[command(
        after_help = "CSV columns: --csv writes ell,k,f; --k0-csv writes ell,k0,empirical_constant."
    )]
    K0 {
        #[arg(long, value_delimiter = ',')]
        ell: Vec<usize>,
        #[arg(long)]
        kmax: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        k0_csv: Option<PathBuf>,
    },
    /// Maximize the leading coefficient over part fractions.
    Optimize {
        #[arg(long)]
        base: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = OptimizerConfig::default().iterations)]
        iterations: usize,
        #[arg(long, default_value_t = OptimizerConfig::default().restarts)]
        restarts: usize,
    },
}

#[derive(Subcommand)]
enum ConstructCommand {
    /// Blow-up of C_base, given part sizes or balanced on n vertices.
    Blowup {
        #[arg(long)]
        base: usize,
        #[arg(
            long,
            value_delimiter = ',',
            conflicts_with = "n",
            required_unless_present = "n"
        )]
        parts: Option<Vec<usize>>,
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        output: OutputArg,
    },
    /// The (k-1)-cycle with n-k+1 attached vertices.
    Proposition {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: OutputArg,
    },
}

#[derive(Args)]
struct OutputArg {
    /// Write the edge list here and print a JSON report instead.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Cycle counts of the balanced blow-up and the construction for every n.
    #[command(after_help = "CSV columns: n,blowup,counterexample,ck2free.")]
    Proposition {
        #[arg(long)]
        k: usize,
        /// Write the CSV here and print a JSON report instead.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(anyhow::Error),
    Verification(Value),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(Error::Verification(msg)) => Failure::Verification(json!({ "failures": [msg] })),
            Some(Error::CapViolation(v)) => Failure::Verification(
                json!({ "failures": v.iter().map(ToString::to_string).collect::<Vec<_>>() }),
            ),
            _ => Failure::Usage(e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::new(e).into()
    }
}

/// What a command hands back to `main`.
enum Output {
    Report {
        inputs: Value,
        fields: Map<String, Value>,
        failed: bool,
    },
    Raw(String),
}

fn report(inputs: Value, fields: Value) -> Output {
    let Value::Object(fields) = fields else {
        unreachable!("report fields are an object")
    };
    Output::Report {
        inputs,
        fields,
        failed: false,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let result = run(&cli);
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let envelope = |inputs: Value, fields: Map<String, Value>| {
        let mut out = Map::new();
        out.insert("command".into(), json!(name));
        out.insert("inputs".into(), inputs);
        out.extend(fields);
        out.insert("elapsed_ms".into(), json!(elapsed_ms));
        out.insert("seed".into(), json!(cli.seed));
        out.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        Value::Object(out)
    };
    match result {
        Ok(Output::Report {
            inputs,
            fields,
            failed,
        }) => {
            emit(
                &serde_json::to_string_pretty(&envelope(inputs, fields)).expect("JSON"),
                true,
            );
            ExitCode::from(if failed { 1 } else { 0 })
        }
        Ok(Output::Raw(text)) => {
            emit(&text, false);
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(detail)) => {
            let Value::Object(fields) =
                json!({ "status": "verification_failed", "detail": detail })
            else {
                unreachable!()
            };
            emit(
                &serde_json::to_string_pretty(&envelope(Value::Null, fields)).expect("JSON"),
                true,
            );
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str, newline: bool) {
    let mut out = io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    if newline {
        let _ = out.write_all(b"\n");
    }
    let _ = out.flush();
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Count { .. } => "count".into(),
        Command::OddGirth { .. } => "odd-girth".into(),
        Command::Blowup(BlowupCommand::Count { .. }) => "blowup count".into(),
        Command::Blowup(BlowupCommand::Coeff { .. }) => "blowup coeff".into(),
        Command::Certify { .. } => "certify".into(),
        Command::Stability(StabilityCommand::Extract { .. }) => "stability extract".into(),
        Command::Stability(StabilityCommand::Clean { .. }) => "stability clean".into(),
        Command::Weights(WeightsCommand::F { .. }) => "weights f".into(),
        Command::Weights(WeightsCommand::K0 { .. }) => "weights k0".into(),
        Command::Weights(WeightsCommand::Optimize { .. }) => "weights optimize".into(),
        Command::Construct(ConstructCommand::Blowup { .. }) => "construct blowup".into(),
        Command::Construct(ConstructCommand::Proposition { .. }) => "construct proposition".into(),
        Command::Verify(VerifyCommand::Proposition { .. }) => "verify proposition".into(),
        Command::Search { .. } => "search".into(),
        Command::Repro { .. } => "repro".into(),
    }
}

fn load(path: &Path) -> anyhow::Result<Graph> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_edge_list(&text).with_context(|| format!("malformed edge list {}", path.display()))
}

/// Real number with 17 significant digits; non-finite values become null.
fn real(x: f64) -> Value {
    if x.is_finite() {
        serde_json::from_str(&fmt_real(x)).expect("formatted float is valid JSON")
    } else {
        Value::Null
    }
}

fn decimal(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn vertices(s: &VertexSet) -> Value {
    json!(s.to_vec())
}

fn partition_json(p: &PartitionResult) -> Value {
    let matrix: Vec<Vec<Value>> = p
        .density_matrix
        .iter()
        .map(|row| row.iter().map(|d| d.map_or(Value::Null, decimal)).collect())
        .collect();
    json!({
        "classes": p.classes.iter().map(vertices).collect::<Vec<_>>(),
        "leftover": vertices(&p.leftover),
        "density_matrix": matrix,
    })
}

fn write_or_embed(
    text: String,
    output: &Option<PathBuf>,
    inputs: Value,
    mut fields: Value,
) -> anyhow::Result<Output> {
    match output {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("cannot write {}", path.display()))?;
            fields["output"] = json!(path.display().to_string());
            Ok(report(inputs, fields))
        }
        None => Ok(Output::Raw(text)),
    }
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    Ok(String::from_utf8(
        w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?,
    )?)
}

fn write_table(dir: &Path, table: &Table) -> anyhow::Result<PathBuf> {
    let path = dir.join(format!("{}.csv", table.name));
    let header: Vec<&str> = table.header.iter().map(String::as_str).collect();
    fs::write(&path, csv_text(&header, &table.rows)?)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path)
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let seed = cli.seed;
    Ok(match &cli.command {
        Command::Count { graph, length } => {
            let g = load(graph)?;
            let count = count_cycles(&g, *length)?;
            report(
                json!({ "graph": graph.display().to_string(), "length": length }),
                json!({ "count": decimal(count) }),
            )
        }
        Command::OddGirth { graph } => {
            let g = load(graph)?;
            report(
                json!({ "graph": graph.display().to_string() }),
                json!({ "odd_girth": shortest_odd_cycle(&g) }),
            )
        }
        Command::Blowup(BlowupCommand::Count { base, parts, k }) => {
            let spec = BlowupSpec::new(*base, parts.clone())?;
            let count = exact_blowup_cycle_count(&spec, *k)?;
            report(
                json!({ "base": base, "parts": parts, "k": k }),
                json!({ "count": decimal(count) }),
            )
        }
        Command::Blowup(BlowupCommand::Coeff { base, weights, k }) => {
            let c = leading_coefficient(*base, weights, *k)?;
            report(
                json!({ "base": base, "weights": weights.iter().map(|&w| real(w)).collect::<Vec<_>>(), "k": k }),
                json!({ "coefficient": real(c) }),
            )
        }
        Command::Certify { graph, k, budget } => {
            let g = load(graph)?;
            let c = certify(&g, *k, *budget)?;
            let cert = &c.certificate;
            report(
                json!({ "graph": graph.display().to_string(), "k": k, "budget": budget }),
                json!({
                    "cycle": cert.cycle.vertices(),
                    "a_sizes": cert.a_sizes,
                    "weights": cert.weights.iter().map(decimal).collect::<Vec<_>>(),
                    "u_size": cert.u_size,
                    "per_cycle_bound_exact": decimal(&cert.per_cycle_bound_exact),
                    "per_cycle_bound": real(cert.per_cycle_bound),
                    "m": decimal(c.m.m_value),
                    "cycles_examined": c.m.cycles_examined,
                    "exhaustive": c.m.exhaustive,
                    "lemma26_bound": real(c.lemma26_bound),
                    "bound_certified": c.bound_certified,
                }),
            )
        }
        Command::Stability(StabilityCommand::Extract {
            graph,
            k,
            eps4,
            budget,
        }) => {
            let g = load(graph)?;
            let cfg = ToleranceConfig {
                eps4: *eps4,
                ..ToleranceConfig::default()
            };
            let r = recover_partition(&g, *k, &cfg, *budget)?;
            let entries: Vec<Value> = r
                .outside
                .entries
                .iter()
                .map(|e| json!({ "vertex": e.vertex, "verdict": format!("{:?}", e.verdict) }))
                .collect();
            report(
                json!({ "graph": graph.display().to_string(), "k": k, "eps4": real(*eps4), "budget": budget }),
                json!({
                    "cycle": r.cycle.vertices(),
                    "extracted": partition_json(&r.extracted),
                    "refined": partition_json(&r.refined),
                    "reclassified": r.outside.reclassified,
                    "ambiguous": r.outside.ambiguous,
                    "outside": entries,
                    "placed": r.placed,
                    "final": partition_json(r.final_partition()),
                }),
            )
        }
        Command::Stability(StabilityCommand::Clean { graph, k, output }) => {
            let g = load(graph)?;
            let r = greedy_odd_cycle_removal(&g, *k)?;
            let inputs = json!({ "graph": graph.display().to_string(), "k": k });
            let mut fields = json!({
                "removed": r.removed,
                "removed_count": r.removed.len(),
                "odd_girth": shortest_odd_cycle(&r.graph),
            });
            match output {
                Some(_) => write_or_embed(format_edge_list(&r.graph), output, inputs, fields)?,
                None => {
                    fields["edge_list"] = json!(format_edge_list(&r.graph));
                    report(inputs, fields)
                }
            }
        }
        Command::Weights(WeightsCommand::F { ell, k }) => {
            let f = f_value(*k, *ell)?;
            report(
                json!({ "ell": ell, "k": k }),
                json!({ "f": real(f), "positive": f > 0.0 }),
            )
        }
        Command::Weights(WeightsCommand::K0 {
            ell,
            kmax,
            csv,
            k0_csv,
        }) => {
            let mut results = Vec::new();
            let (mut f_rows, mut k0_rows) = (Vec::new(), Vec::new());
            for &l in ell {
                let r = k0_search(l, *kmax)?;
                let f_at = |k: usize| {
                    r.f_values
                        .iter()
                        .find(|(kk, _)| *kk == k)
                        .map(|&(_, f)| real(f))
                };
                let bracket = r
                    .k0
                    .map(|k0| json!({ "below": k0.checked_sub(2).and_then(f_at), "at": f_at(k0) }));
                results.push(json!({
                    "ell": l,
                    "k0": r.k0,
                    "bracketing_f": bracket,
                    "monotone_from": r.monotone_from,
                    "positive_after_k0": r.positive_after_k0,
                    "empirical_constant": r.empirical_constant.map(real),
                }));
                f_rows.extend(
                    r.f_values
                        .iter()
                        .map(|(k, f)| vec![l.to_string(), k.to_string(), fmt_real(*f)]),
                );
                k0_rows.push(vec![
                    l.to_string(),
                    r.k0.map_or("none".into(), |k| k.to_string()),
                    r.empirical_constant.map_or("n/a".into(), fmt_real),
                ]);
            }
            let mut fields = json!({ "results": results });
            if let Some(path) = csv {
                fs::write(path, csv_text(&["ell", "k", "f"], &f_rows)?)
                    .with_context(|| format!("cannot write {}", path.display()))?;
                fields["csv"] = json!(path.display().to_string());
            }
            if let Some(path) = k0_csv {
                fs::write(
                    path,
                    csv_text(&["ell", "k0", "empirical_constant"], &k0_rows)?,
                )
                .with_context(|| format!("cannot write {}", path.display()))?;
                fields["k0_csv"] = json!(path.display().to_string());
            }
            report(json!({ "ell": ell, "kmax": kmax }), fields)
        }
        Command::Weights(WeightsCommand::Optimize {
            base,
            k,
            iterations,
            restarts,
        }) => {
            let cfg = OptimizerConfig {
                seed,
                iterations: *iterations,
                restarts: *restarts,
                ..OptimizerConfig::default()
            };
            let r = optimize_coefficient(*base, *k, &cfg)?;
            report(
                json!({ "base": base, "k": k, "iterations": iterations, "restarts": restarts }),
                json!({
                    "weights": r.weights.as_slice().iter().map(|&w| real(w)).collect::<Vec<_>>(),
                    "coefficient": real(r.coefficient),
                    "balanced_coefficient": real(r.balanced_coefficient),
                    "ratio_to_balanced": real(r.coefficient / r.balanced_coefficient),
                    "best_start": r.best_start,
                    "converged": r.converged,
                    "gradient_norm": real(r.gradient_norm),
                    "iterations_used": r.iterations_used,
                }),
            )
        }
        Command::Construct(ConstructCommand::Blowup {
            base,
            parts,
            n,
            output,
        }) => {
            let spec = match (parts, n) {
                (Some(p), _) => BlowupSpec::new(*base, p.clone())?,
                (None, Some(n)) => balanced_blowup_spec(*base, *n)?,
                (None, None) => unreachable!("clap requires --parts or --n"),
            };
            let g = spec.materialize();
            write_or_embed(
                format_edge_list(&g),
                &output.output,
                json!({ "base": base, "parts": spec.part_sizes() }),
                json!({ "n": g.vertex_count(), "edges": g.edge_count() }),
            )?
        }
        Command::Construct(ConstructCommand::Proposition { k, n, output }) => {
            let g = proposition_graph(*k, *n)?;
            write_or_embed(
                format_edge_list(&g),
                &output.output,
                json!({ "k": k, "n": n }),
                json!({ "n": g.vertex_count(), "edges": g.edge_count() }),
            )?
        }
        Command::Verify(VerifyCommand::Proposition { k, csv }) => {
            let rows = verify_proposition(*k)?;
            let text = csv_text(
                &["n", "blowup", "counterexample", "ck2free"],
                &proposition_rows(&rows),
            )?;
            match csv {
                Some(path) => {
                    fs::write(path, text)
                        .with_context(|| format!("cannot write {}", path.display()))?;
                    report(
                        json!({ "k": k }),
                        json!({ "rows": rows.len(), "csv": path.display().to_string() }),
                    )
                }
                None => Output::Raw(text),
            }
        }
        Command::Search { n, k, ell } => {
            let r = exhaustive_max(*n, *k, *ell)?;
            report(
                json!({ "n": n, "k": k, "ell": ell }),
                json!({
                    "max_count": decimal(&r.max_count),
                    "witness_mask": r.witness_mask,
                    "witness_edges": r.witness.edges(),
                    "graphs_examined": r.graphs_examined,
                    "pruned": r.pruned,
                }),
            )
        }
        Command::Repro { suite, out } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse::<Suite>().map_err(anyhow::Error::new)?]
            };
            fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
            let mut reports = Vec::new();
            let mut failed = false;
            for s in suites {
                let r = run_suite(s, seed);
                failed |= !r.passed();
                reports.push(suite_json(&r, out)?);
            }
            let Value::Object(fields) = json!({ "passed": !failed, "suites": reports }) else {
                unreachable!()
            };
            Output::Report {
                inputs: json!({ "suite": suite, "out": out.display().to_string() }),
                fields,
                failed,
            }
        }
    })
}

fn proposition_rows(rows: &[PropositionRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.blowup_count.to_string(),
                r.counterexample_count.to_string(),
                r.ck2_free.to_string(),
            ]
        })
        .collect()
}

fn suite_json(r: &SuiteReport, dir: &Path) -> anyhow::Result<Value> {
    let tables: Vec<String> = r
        .tables
        .iter()
        .map(|t| write_table(dir, t).map(|p| p.display().to_string()))
        .collect::<anyhow::Result<_>>()?;
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
        .collect();
    Ok(json!({
        "suite": r.suite.name(),
        "passed": r.passed(),
        "checks": checks,
        "tables": tables,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_keep_seventeen_digits() {
        assert_eq!(real(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(real(f64::NAN), Value::Null);
        assert_eq!(real(-2.5).as_f64(), Some(-2.5));
    }

    #[test]
    fn csv_rows_in_header_order() {
        let text = csv_text(&["a", "b"], &[vec!["1".into(), "x y".into()]]).unwrap();
        assert_eq!(text, "a,b\n1,x y\n");
    }
}
