//! Command-line entry points: batch solving, statistics, and synthetic
//! strategy evaluation.
//!
//! Prompts are processed by a worker pool and emitted in prompt-key order,
//! so serial and parallel runs write byte-identical files. Exit codes: 0
//! success, 2 unreadable input or invalid parameters, 3 malformed record, 4
//! invariant violation (a solver bug, never bad input).

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::{mpsc, Mutex};
use std::thread;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::analysis::{
    contradiction_rate, post_alignment_rate, verify_properties, GraphStats, VerificationReport,
};
use crate::dataset::{read_judgments_file, write_judgments_file, PromptRecord};
use crate::error::{Error, Result};
use crate::graph::PreferenceGraph;
use crate::select::{
    export_pairs, select_contrasolver, select_max_confidence, select_random, Strategy, TrainingPair,
};
use crate::solver::{solve, SolverResult};
use crate::synth::{agreement_with_truth, gen_instance};

/// Resolved configuration for a `solve` run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    pub output: PathBuf,
    pub delta: f64,
    pub strategy: Strategy,
    /// Pairs per prompt for baseline strategies; `None` matches each
    /// prompt's heuristic set size.
    pub budget: Option<usize>,
    pub seed: u64,
    pub parallel: usize,
    pub report: Option<PathBuf>,
}

/// Configuration for a `stats` run.
#[derive(Debug, Clone)]
pub struct StatsConfig {
    pub input: PathBuf,
    pub delta: f64,
    pub parallel: usize,
    pub report: Option<PathBuf>,
}

/// Configuration for a `synth` run.
#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub instances: usize,
    pub nodes: usize,
    pub noise: f64,
    pub spread: f64,
    pub seed: u64,
    pub budget: Option<usize>,
    pub parallel: usize,
    pub output: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta.is_finite() && (0.5..1.0).contains(&delta)) {
        return Err(Error::validation(
            "delta",
            format!("{delta} outside [0.5, 1)"),
        ));
    }
    Ok(())
}

fn check_parallel(parallel: usize) -> Result<()> {
    if parallel < 1 {
        return Err(Error::validation(
            "parallel",
            "at least one worker required",
        ));
    }
    Ok(())
}

#[derive(Parser)]
#[command(
    name = "contrasolver",
    version,
    about = "Resolve contradictions in pairwise preference data and export training pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build per-prompt preference graphs, resolve contradictions, export pairs
    Solve {
        /// Judgments file, one JSON record per prompt per line
        #[arg(long)]
        input: PathBuf,
        /// Training-pairs output file
        #[arg(long)]
        output: PathBuf,
        /// Confidence threshold for keeping an edge
        #[arg(long, default_value_t = 0.51)]
        delta: f64,
        /// Selection strategy for exported pairs
        #[arg(long, value_enum, default_value_t = Strategy::ContraSolver)]
        strategy: Strategy,
        /// Pairs per prompt for baseline strategies (default: match the
        /// heuristic set size)
        #[arg(long)]
        budget: Option<usize>,
        /// Base seed; each prompt offsets it by its position
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        /// Machine-readable JSON report path
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Report contradiction statistics without solving
    Stats {
        /// Judgments file, one JSON record per prompt per line
        #[arg(long)]
        input: PathBuf,
        /// Confidence threshold for keeping an edge
        #[arg(long, default_value_t = 0.51)]
        delta: f64,
        /// Worker threads
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        /// Machine-readable JSON report path
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Generate synthetic instances and score strategies against hidden rewards
    Synth {
        /// Number of instances to generate
        #[arg(long, default_value_t = 100)]
        instances: usize,
        /// Responses per instance
        #[arg(long, default_value_t = 8)]
        nodes: usize,
        /// Probability of flipping each observed preference
        #[arg(long, default_value_t = 0.2)]
        noise: f64,
        /// Width of the uniform hidden-reward range
        #[arg(long, default_value_t = 4.0)]
        spread: f64,
        /// Base seed; instance k uses seed + k
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Pairs per instance for baseline strategies (default: match the
        /// heuristic set size)
        #[arg(long)]
        budget: Option<usize>,
        /// Worker threads
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        /// Write the generated instances as a judgments file
        #[arg(long)]
        output: Option<PathBuf>,
        /// Machine-readable JSON report path
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or("CONTRASOLVER_LOG", "warn");
    let _ = env_logger::Builder::from_env(env)
        .format_timestamp(None)
        .try_init();
}

/// Parses arguments and dispatches; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = err.exit_code();
            let _ = err.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Solve {
            input,
            output,
            delta,
            strategy,
            budget,
            seed,
            parallel,
            report,
        } => cmd_solve(&RunConfig {
            input,
            output,
            delta,
            strategy,
            budget,
            seed,
            parallel,
            report,
        })
        .map(|_| ()),
        Command::Stats {
            input,
            delta,
            parallel,
            report,
        } => cmd_stats(&StatsConfig {
            input,
            delta,
            parallel,
            report,
        })
        .map(|_| ()),
        Command::Synth {
            instances,
            nodes,
            noise,
            spread,
            seed,
            budget,
            parallel,
            output,
            report,
        } => cmd_synth(&SynthConfig {
            instances,
            nodes,
            noise,
            spread,
            seed,
            budget,
            parallel,
            output,
            report,
        })
        .map(|_| ()),
    };
    match outcome {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("contrasolver: {err}");
            exit_code_for(&err)
        }
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::MalformedRecord { .. } => 3,
        Error::InvariantViolation { .. } => 4,
        _ => 2,
    }
}

/// Maps `f` over the items on a pool of `workers` threads, returning the
/// results in input order regardless of completion order.
fn process_ordered<T, R, F>(items: Vec<T>, workers: usize, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(usize, T) -> R + Sync,
{
    if workers <= 1 || items.len() <= 1 {
        return items
            .into_iter()
            .enumerate()
            .map(|(i, item)| f(i, item))
            .collect();
    }
    let total = items.len();
    let (task_tx, task_rx) = mpsc::channel();
    for task in items.into_iter().enumerate() {
        task_tx.send(task).expect("task queue receiver alive");
    }
    drop(task_tx);
    let task_rx = Mutex::new(task_rx);
    let (done_tx, done_rx) = mpsc::channel();
    let mut slots: Vec<Option<R>> = (0..total).map(|_| None).collect();
    thread::scope(|scope| {
        for _ in 0..workers.min(total) {
            let done_tx = done_tx.clone();
            let task_rx = &task_rx;
            let f = &f;
            scope.spawn(move || loop {
                let task = task_rx.lock().expect("task queue lock").recv();
                let Ok((index, item)) = task else { break };
                if done_tx.send((index, f(index, item))).is_err() {
                    break;
                }
            });
        }
        drop(done_tx);
        for (index, result) in done_rx {
            slots[index] = Some(result);
        }
    });
    slots
        .into_iter()
        .map(|slot| slot.expect("worker delivered every slot"))
        .collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
struct EdgeReport {
    src: u32,
    dst: u32,
    weight: f64,
    class: &'static str,
    heuristic: bool,
}

#[derive(Debug, Clone, Serialize)]
struct WitnessReport {
    src: u32,
    dst: u32,
    weight: f64,
    path: Vec<(u32, u32)>,
}

/// Per-prompt section of the solve report.
#[derive(Debug, Clone, Serialize)]
pub struct PromptReport {
    stats: GraphStats,
    iteration_count: usize,
    edges: Vec<EdgeReport>,
    witnesses: Vec<WitnessReport>,
    verification: VerificationReport,
    duplicate_warnings: usize,
    pairs: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveSummary {
    pub prompts: usize,
    pub edges: usize,
    pub pairs_written: usize,
    pub duplicate_warnings: usize,
    pub contradiction_rate: Option<f64>,
    pub post_alignment_rate: Option<f64>,
    pub strategy: Strategy,
    pub delta: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub summary: SolveSummary,
    prompts: Vec<PromptReport>,
}

struct PromptOutcome {
    graph: PreferenceGraph,
    result: SolverResult,
    verification: VerificationReport,
    stats: GraphStats,
    pairs: Vec<TrainingPair>,
    duplicate_warnings: usize,
}

fn prompt_report(outcome: &PromptOutcome) -> PromptReport {
    let result = &outcome.result;
    let mut edges: Vec<EdgeReport> = Vec::with_capacity(result.edge_count);
    for (list, class) in [
        (&result.kept, "kept"),
        (&result.contradictory, "contradictory"),
        (&result.omitted, "omitted"),
    ] {
        edges.extend(list.iter().map(|e| {
            EdgeReport {
                src: e.src.0,
                dst: e.dst.0,
                weight: e.weight,
                class,
                heuristic: class == "kept"
                    && result
                        .heuristic
                        .binary_search_by(|h| h.key().cmp(&e.key()))
                        .is_ok(),
            }
        }));
    }
    edges.sort_by_key(|e| (e.src, e.dst));
    let witnesses = result
        .witnesses
        .iter()
        .map(|w| WitnessReport {
            src: w.contradictory_edge.src.0,
            dst: w.contradictory_edge.dst.0,
            weight: w.contradictory_edge.weight,
            path: w.cycle_path.iter().map(|e| e.key()).collect(),
        })
        .collect();
    PromptReport {
        stats: outcome.stats.clone(),
        iteration_count: result.iteration_count,
        edges,
        witnesses,
        verification: outcome.verification.clone(),
        duplicate_warnings: outcome.duplicate_warnings,
        pairs: outcome.pairs.len(),
    }
}

fn solve_one(
    config: &RunConfig,
    index: usize,
    line: usize,
    record: &PromptRecord,
) -> Result<PromptOutcome> {
    let built = record
        .build(config.delta)
        .map_err(|err| Error::MalformedRecord {
            line,
            reason: err.to_string(),
        })?;
    let graph = built.graph;
    if built.conflict_warnings > 0 {
        log::warn!(
            "{}: {} duplicate judgments with conflicting direction",
            graph.prompt_key(),
            built.conflict_warnings
        );
    }
    let result = solve(&graph);
    let verification = verify_properties(&result, &graph);
    if !verification.all_hold() {
        return Err(Error::InvariantViolation {
            prompt_key: graph.prompt_key().to_string(),
            detail: format!("{:?}", verification.counterexample),
        });
    }
    let budget = config.budget.unwrap_or(result.heuristic.len());
    let pairs = match config.strategy {
        Strategy::ContraSolver => select_contrasolver(&result, &graph)?,
        Strategy::Random => select_random(&graph, budget, config.seed.wrapping_add(index as u64)),
        Strategy::MaxConfidence => select_max_confidence(&graph, budget),
    };
    let stats = GraphStats::with_result(&graph, &result)?;
    Ok(PromptOutcome {
        graph,
        result,
        verification,
        stats,
        pairs,
        duplicate_warnings: built.conflict_warnings,
    })
}

fn write_report<S: Serialize>(report: &S, path: &Path) -> Result<()> {
    let mut writer = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut writer, report)
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    writer.write_all(b"\n")?;
    writer.flush()?;
    Ok(())
}

fn rate_text(rate: Option<f64>) -> String {
    rate.map_or_else(|| "-".to_string(), |r| format!("{r:.4}"))
}

/// Solves every prompt in the input file and writes pairs, plus an optional
/// JSON report. Verification runs on every result and any failure aborts
/// the run.
pub fn cmd_solve(config: &RunConfig) -> Result<SolveReport> {
    check_delta(config.delta)?;
    check_parallel(config.parallel)?;
    let mut records = read_judgments_file(&config.input)?;
    records.sort_by(|a, b| a.1.prompt_key.cmp(&b.1.prompt_key));

    let worked = process_ordered(records, config.parallel, |index, (line, record)| {
        solve_one(config, index, line, &record)
    });
    let mut outcomes = Vec::with_capacity(worked.len());
    for outcome in worked {
        outcomes.push(outcome?);
    }

    let graphs: Vec<PreferenceGraph> = outcomes.iter().map(|o| o.graph.clone()).collect();
    let results: Vec<SolverResult> = outcomes.iter().map(|o| o.result.clone()).collect();
    let (raw_rate, aligned_rate) = if graphs.is_empty() {
        (None, None)
    } else {
        (
            Some(contradiction_rate(&graphs)?),
            Some(post_alignment_rate(&graphs, &results)?),
        )
    };

    let all_pairs: Vec<TrainingPair> = outcomes.iter().flat_map(|o| o.pairs.clone()).collect();
    let pairs_written = export_pairs(&all_pairs, BufWriter::new(File::create(&config.output)?))?;

    let report = SolveReport {
        summary: SolveSummary {
            prompts: outcomes.len(),
            edges: outcomes.iter().map(|o| o.graph.edge_count()).sum(),
            pairs_written,
            duplicate_warnings: outcomes.iter().map(|o| o.duplicate_warnings).sum(),
            contradiction_rate: raw_rate,
            post_alignment_rate: aligned_rate,
            strategy: config.strategy,
            delta: config.delta,
            seed: config.seed,
        },
        prompts: outcomes.iter().map(prompt_report).collect(),
    };
    if let Some(path) = &config.report {
        write_report(&report, path)?;
    }

    println!("prompts              {}", report.summary.prompts);
    println!("edges                {}", report.summary.edges);
    println!(
        "contradiction rate   {}",
        rate_text(report.summary.contradiction_rate)
    );
    println!(
        "post-alignment rate  {}",
        rate_text(report.summary.post_alignment_rate)
    );
    println!("duplicate warnings   {}", report.summary.duplicate_warnings);
    println!(
        "pairs written        {} ({})",
        report.summary.pairs_written, report.summary.strategy
    );
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct StatsSummary {
    pub prompts: usize,
    pub edges: usize,
    pub contradiction_rate: Option<f64>,
    pub duplicate_warnings: usize,
    pub delta: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StatsReport {
    pub summary: StatsSummary,
    prompts: Vec<GraphStats>,
}

/// Builds every graph and reports contradiction statistics, no solving.
pub fn cmd_stats(config: &StatsConfig) -> Result<StatsReport> {
    check_delta(config.delta)?;
    check_parallel(config.parallel)?;
    let mut records = read_judgments_file(&config.input)?;
    records.sort_by(|a, b| a.1.prompt_key.cmp(&b.1.prompt_key));

    let delta = config.delta;
    let worked = process_ordered(records, config.parallel, move |_, (line, record)| {
        record
            .build(delta)
            .map_err(|err| Error::MalformedRecord {
                line,
                reason: err.to_string(),
            })
            .map(|built| (GraphStats::from_graph(&built.graph), built))
    });
    let mut stats = Vec::with_capacity(worked.len());
    let mut graphs = Vec::with_capacity(worked.len());
    let mut duplicate_warnings = 0usize;
    for outcome in worked {
        let (stat, built) = outcome?;
        duplicate_warnings += built.conflict_warnings;
        graphs.push(built.graph);
        stats.push(stat);
    }

    let rate = if graphs.is_empty() {
        None
    } else {
        Some(contradiction_rate(&graphs)?)
    };
    let report = StatsReport {
        summary: StatsSummary {
            prompts: graphs.len(),
            edges: graphs.iter().map(|g| g.edge_count()).sum(),
            contradiction_rate: rate,
            duplicate_warnings,
            delta: config.delta,
        },
        prompts: stats,
    };
    if let Some(path) = &config.report {
        write_report(&report, path)?;
    }

    println!("prompts              {}", report.summary.prompts);
    println!("edges                {}", report.summary.edges);
    println!(
        "contradiction rate   {}",
        rate_text(report.summary.contradiction_rate)
    );
    println!("duplicate warnings   {}", report.summary.duplicate_warnings);
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct StrategyOutcome {
    pub strategy: Strategy,
    pub pairs: usize,
    pub instances_with_pairs: usize,
    /// Mean per-instance agreement with the hidden rewards, over instances
    /// that produced pairs; absent when none did.
    pub mean_agreement: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SynthReport {
    pub instances: usize,
    pub nodes: usize,
    pub noise: f64,
    pub spread: f64,
    pub seed: u64,
    pub contradiction_rate: f64,
    pub post_alignment_rate: f64,
    pub strategies: Vec<StrategyOutcome>,
}

struct SynthOutcome {
    record: PromptRecord,
    graph: PreferenceGraph,
    result: SolverResult,
    agreements: [Option<f64>; 3],
    pair_counts: [usize; 3],
}

fn synth_one(config: &SynthConfig, seed: u64) -> Result<SynthOutcome> {
    let instance = gen_instance(config.nodes, config.spread, config.noise, seed)?;
    let result = solve(&instance.graph);
    let verification = verify_properties(&result, &instance.graph);
    if !verification.all_hold() {
        return Err(Error::InvariantViolation {
            prompt_key: instance.graph.prompt_key().to_string(),
            detail: format!("{:?}", verification.counterexample),
        });
    }
    let budget = config.budget.unwrap_or(result.heuristic.len());
    let selections = [
        select_contrasolver(&result, &instance.graph)?,
        select_random(&instance.graph, budget, seed),
        select_max_confidence(&instance.graph, budget),
    ];
    let mut agreements = [None; 3];
    let mut pair_counts = [0usize; 3];
    for (slot, pairs) in selections.iter().enumerate() {
        agreements[slot] = agreement_with_truth(pairs, &instance)?;
        pair_counts[slot] = pairs.len();
    }
    Ok(SynthOutcome {
        record: PromptRecord::from_instance(&instance),
        graph: instance.graph,
        result,
        agreements,
        pair_counts,
    })
}

/// Generates seeded instances, runs the three strategies at a matched
/// budget, and reports agreement with the hidden rewards.
pub fn cmd_synth(config: &SynthConfig) -> Result<SynthReport> {
    check_parallel(config.parallel)?;
    if config.instances == 0 {
        return Err(Error::validation(
            "instances",
            "at least one instance required",
        ));
    }
    let seeds: Vec<u64> = (0..config.instances as u64)
        .map(|k| config.seed.wrapping_add(k))
        .collect();
    let worked = process_ordered(seeds, config.parallel, |_, seed| synth_one(config, seed));
    let mut outcomes = Vec::with_capacity(worked.len());
    for outcome in worked {
        outcomes.push(outcome?);
    }

    let graphs: Vec<PreferenceGraph> = outcomes.iter().map(|o| o.graph.clone()).collect();
    let results: Vec<SolverResult> = outcomes.iter().map(|o| o.result.clone()).collect();
    let raw_rate = contradiction_rate(&graphs)?;
    let aligned_rate = post_alignment_rate(&graphs, &results)?;

    let strategies = [
        Strategy::ContraSolver,
        Strategy::Random,
        Strategy::MaxConfidence,
    ]
    .into_iter()
    .enumerate()
    .map(|(slot, strategy)| {
        let defined: Vec<f64> = outcomes.iter().filter_map(|o| o.agreements[slot]).collect();
        StrategyOutcome {
            strategy,
            pairs: outcomes.iter().map(|o| o.pair_counts[slot]).sum(),
            instances_with_pairs: defined.len(),
            mean_agreement: if defined.is_empty() {
                None
            } else {
                Some(defined.iter().sum::<f64>() / defined.len() as f64)
            },
        }
    })
    .collect();

    if let Some(path) = &config.output {
        let records: Vec<PromptRecord> = outcomes.iter().map(|o| o.record.clone()).collect();
        write_judgments_file(&records, path)?;
    }

    let report = SynthReport {
        instances: config.instances,
        nodes: config.nodes,
        noise: config.noise,
        spread: config.spread,
        seed: config.seed,
        contradiction_rate: raw_rate,
        post_alignment_rate: aligned_rate,
        strategies,
    };
    if let Some(path) = &config.report {
        write_report(&report, path)?;
    }

    println!(
        "instances {}  nodes {}  noise {}  contradiction rate {:.4}  post-alignment {:.4}",
        report.instances,
        report.nodes,
        report.noise,
        report.contradiction_rate,
        report.post_alignment_rate
    );
    println!(
        "{:<16} {:>8} {:>20} {:>16}",
        "strategy", "pairs", "instances with pairs", "mean agreement"
    );
    for s in &report.strategies {
        println!(
            "{:<16} {:>8} {:>20} {:>16}",
            s.strategy.to_string(),
            s.pairs,
            s.instances_with_pairs,
            rate_text(s.mean_agreement),
        );
    }
    Ok(report)
}
