mod input;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use synthminer_core::discovery::{discover_with, DiscoveryConfig, DiscoveryError, IterationRecord, Ordering};
use synthminer_core::eventlog::CausalThreshold;
use synthminer_core::net::dot::to_dot;
use synthminer_core::net::pnml::write_pnml;
use synthminer_core::net::{check_soundness, free_choice_violations, WorkflowNet, DEFAULT_STATE_CAP};
use synthminer_core::rational::{parse_decimal, ratio, serialize_exact, to_decimal_string, Rational};
use synthminer_core::{evaluate, Activity, ConformanceError, EnumerationCaps, EventLog, Score};
use thiserror::Error;

use input::{load_net, load_workflow_net, write, LogArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Failed(String),
    #[error("{0}")]
    Inconclusive(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Inconclusive(_) => 2,
        }
    }
}

impl From<ConformanceError> for CliError {
    fn from(e: ConformanceError) -> Self {
        match e {
            ConformanceError::Inconclusive { .. } => CliError::Inconclusive(format!("inconclusive: {e}")),
            ConformanceError::NoCompletion => CliError::Failed(e.to_string()),
        }
    }
}

impl From<DiscoveryError> for CliError {
    fn from(e: DiscoveryError) -> Self {
        match e {
            DiscoveryError::Conformance { source: ConformanceError::Inconclusive { .. }, .. } => {
                CliError::Inconclusive(format!("inconclusive: {e}"))
            }
            _ => CliError::Failed(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "synthminer", version, about = "Discover free-choice workflow nets from event logs")]
struct Cli {
    /// Worker threads for candidate scoring (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Discover a net from a log.
    Discover(DiscoverArgs),
    /// Fitness, precision and F1 of a PNML net on a log.
    Evaluate(EvaluateArgs),
    /// Workflow-net, free-choice and soundness verdicts for a PNML net.
    Check(CheckArgs),
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    let v = parse_decimal(s).ok_or_else(|| format!("`{s}` is not a decimal number"))?;
    if v < ratio(0, 1) || v > ratio(1, 1) {
        return Err(format!("{s} is outside [0, 1]"));
    }
    Ok(v)
}

#[derive(clap::Args, Debug)]
struct DiscoverArgs {
    #[command(flatten)]
    log: LogArgs,
    /// Minimum fitness of each selected net on its projected log.
    #[arg(long, default_value = "0.95", value_parser = rational_arg)]
    theta: Rational,
    #[arg(long, default_value = "0.9", value_parser = rational_arg)]
    causal_threshold: Rational,
    #[arg(long, default_value = "bfs")]
    ordering: Ordering,
    /// Keep the most frequent variants covering this share of traces; 1 disables.
    #[arg(long, default_value = "0.95", value_parser = rational_arg)]
    variant_coverage: Rational,
    #[arg(long, default_value_t = EnumerationCaps::default().max_candidates)]
    max_candidates: usize,
    #[arg(long, default_value_t = EnumerationCaps::default().max_abstraction_set)]
    max_abstraction_set: usize,
    #[arg(long, default_value_t = EnumerationCaps::default().max_arc_set)]
    max_arc_set: usize,
    /// Also generate candidates whose new node has a self-loop.
    #[arg(long)]
    allow_self_loops: bool,
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    state_cap: usize,
    #[arg(long)]
    out_pnml: Option<PathBuf>,
    #[arg(long)]
    out_dot: Option<PathBuf>,
    /// JSON run report.
    #[arg(long)]
    report: Option<PathBuf>,
    /// One JSON iteration record per line, written as iterations finish.
    #[arg(long)]
    iterations_jsonl: Option<PathBuf>,
    /// Leave wall times out of all outputs so reruns are byte-identical.
    #[arg(long)]
    no_timings: bool,
}

#[derive(clap::Args, Debug)]
struct EvaluateArgs {
    /// PNML model.
    model: PathBuf,
    #[command(flatten)]
    log: LogArgs,
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    state_cap: usize,
    /// JSON with exact rational scores.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct CheckArgs {
    /// PNML model.
    model: PathBuf,
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    state_cap: usize,
}

#[derive(Serialize)]
struct ConfigEcho<'a> {
    input: String,
    #[serde(flatten)]
    discovery: &'a DiscoveryConfig,
    #[serde(serialize_with = "serialize_exact")]
    variant_coverage: Rational,
}

#[derive(Serialize)]
struct LogSummary {
    traces: u64,
    variants: usize,
    activities: usize,
    kept_traces: u64,
    kept_variants: usize,
}

#[derive(Serialize)]
struct NetSummary {
    places: usize,
    transitions: usize,
    arcs: usize,
}

#[derive(Serialize)]
struct RunReport<'a> {
    config: ConfigEcho<'a>,
    log: LogSummary,
    order: Vec<Activity>,
    iterations: Vec<IterationRecord>,
    net: NetSummary,
    /// Scores on the full input log, before variant filtering.
    final_scores: Score,
    #[serde(skip_serializing_if = "Option::is_none")]
    total_time_ms: Option<f64>,
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize") + "\n"
}

fn print_scores(s: &Score) {
    println!("fitness   {}", to_decimal_string(&s.fitness, 6));
    println!("precision {}", to_decimal_string(&s.precision, 6));
    println!("f1        {}", to_decimal_string(&s.f1, 6));
}

fn summarize(w: &WorkflowNet) -> NetSummary {
    NetSummary {
        places: w.net().num_places(),
        transitions: w.net().num_transitions(),
        arcs: w.net().num_arcs(),
    }
}

fn cmd_discover(args: DiscoverArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let full = args.log.load()?;
    if full.is_empty() {
        return Err(CliError::Failed(format!("{}: the log has no traces", args.log.log.display())));
    }
    let log = full.filter_variant_coverage(&args.variant_coverage);
    log::info!(
        "{} traces, {} variants; {} variants kept",
        full.num_traces(),
        full.num_variants(),
        log.num_variants()
    );
    let config = DiscoveryConfig {
        theta: args.theta.clone(),
        causal_threshold: CausalThreshold::new(args.causal_threshold.clone()).expect("checked by the parser"),
        ordering: args.ordering,
        caps: EnumerationCaps {
            max_abstraction_set: args.max_abstraction_set,
            max_arc_set: args.max_arc_set,
            max_candidates: args.max_candidates,
            allow_self_loops: args.allow_self_loops,
        },
        state_cap: args.state_cap,
    };

    let mut jsonl = match &args.iterations_jsonl {
        Some(p) => Some(BufWriter::new(
            File::create(p).map_err(|e| CliError::Failed(format!("{}: {e}", p.display())))?,
        )),
        None => None,
    };
    let mut io_error = None;
    let mut result = discover_with(&log, &config, |rec| {
        let mut rec = rec.clone();
        if args.no_timings {
            rec.wall_time_ms = None;
        }
        eprintln!(
            "iteration {}: {} (pruning ratio {}, {} candidates, fitness {})",
            rec.index,
            rec.activity,
            to_decimal_string(&rec.pruning_ratio, 3),
            rec.candidates,
            to_decimal_string(&rec.scores.fitness, 3)
        );
        if let Some(out) = jsonl.as_mut() {
            let line = serde_json::to_string(&rec).expect("records serialize");
            if let Err(e) = writeln!(out, "{line}").and_then(|_| out.flush()) {
                io_error.get_or_insert(e);
            }
        }
    })?;
    if let Some(e) = io_error {
        let p = args.iterations_jsonl.as_ref().expect("set when writing");
        return Err(CliError::Failed(format!("{}: {e}", p.display())));
    }
    if args.no_timings {
        for rec in &mut result.iterations {
            rec.wall_time_ms = None;
        }
    }

    let final_scores = evaluate(&result.net, &full, config.state_cap)?;
    if let Some(p) = &args.out_pnml {
        write(p, &write_pnml(&result.net))?;
    }
    if let Some(p) = &args.out_dot {
        write(p, &to_dot(&result.net))?;
    }
    let order: Vec<Activity> = result.order.as_slice().to_vec();
    println!("order     {}", order.iter().map(Activity::as_str).collect::<Vec<_>>().join(" "));
    print_scores(&final_scores);
    if let Some(p) = &args.report {
        let report = RunReport {
            config: ConfigEcho {
                input: args.log.log.display().to_string(),
                discovery: &config,
                variant_coverage: args.variant_coverage.clone(),
            },
            log: LogSummary {
                traces: full.num_traces(),
                variants: full.num_variants(),
                activities: full.activities().len(),
                kept_traces: log.num_traces(),
                kept_variants: log.num_variants(),
            },
            order,
            net: summarize(&result.net),
            iterations: result.iterations,
            final_scores,
            total_time_ms: (!args.no_timings).then(|| started.elapsed().as_secs_f64() * 1000.0),
        };
        write(p, &json(&report))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct EvaluateReport {
    model: String,
    log: String,
    net: NetSummary,
    traces: u64,
    variants: usize,
    scores: Score,
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    let w = load_workflow_net(&args.model)?;
    if let Err(e) = w.validate_free_choice() {
        eprintln!("warning: {}: {e}", args.model.display());
    }
    let log: EventLog = args.log.load()?;
    let scores = evaluate(&w, &log, args.state_cap)?;
    print_scores(&scores);
    if let Some(p) = &args.report {
        let report = EvaluateReport {
            model: args.model.display().to_string(),
            log: args.log.log.display().to_string(),
            net: summarize(&w),
            traces: log.num_traces(),
            variants: log.num_variants(),
            scores,
        };
        write(p, &json(&report))?;
    }
    Ok(())
}

fn cmd_check(args: CheckArgs) -> Result<(), CliError> {
    let net = load_net(&args.model)?;
    let violations = free_choice_violations(&net);
    let mut ok = violations.is_empty();
    let workflow = WorkflowNet::from_net(net.clone());
    match &workflow {
        Ok(_) => println!("workflow net: true"),
        Err(e) => {
            ok = false;
            println!("workflow net: false ({e})");
        }
    }
    if violations.is_empty() {
        println!("free-choice: true");
    } else {
        let pairs: Vec<String> = violations
            .iter()
            .map(|(a, b)| format!("({}, {})", net.transition_name(*a), net.transition_name(*b)))
            .collect();
        println!("free-choice: false (overlapping presets differ: {})", pairs.join(", "));
    }
    let Ok(w) = workflow else {
        println!("sound: false (not a workflow net)");
        return Err(CliError::Failed("check failed".into()));
    };
    match check_soundness(&w, args.state_cap) {
        Ok(v) if v.is_sound() => println!("sound: true (state cap {})", args.state_cap),
        Ok(v) => {
            ok = false;
            println!("sound: false ({v})");
        }
        Err(e) => {
            println!("sound: inconclusive ({e})");
            return Err(CliError::Inconclusive("soundness check inconclusive".into()));
        }
    }
    if ok {
        Ok(())
    } else {
        Err(CliError::Failed("check failed".into()))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("SYNTHMINER_LOG", "warn")).init();
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: --jobs: {e}");
            return ExitCode::from(1);
        }
    }
    let outcome = match cli.command {
        Command::Discover(a) => cmd_discover(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Check(a) => cmd_check(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
