//! Argument definitions and subcommand implementations. Each command
//! returns the text destined for stdout; files are written as a side effect.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use clonesched_core::decoder::verify;
use clonesched_core::graph::generate::{
    gen_gaussian_elimination, gen_random_layered, LayeredParams,
};
use clonesched_core::oracle::{exhaustive_best, DEFAULT_LIMIT};
use clonesched_core::{decode, optimize_with, OptimizerConfig, Platform, Schedule, TaskGraph};

use crate::bench::{parse_suite, run_suite, BenchOverrides};
use crate::exec::PoolExecutor;
use crate::formats::{
    emit_antibody, emit_dag, emit_schedule, parse_antibody, parse_config, parse_dag,
    parse_platform, parse_raw_dag,
};
use crate::gantt::{svg_gantt, text_gantt};
use crate::report::{InstanceInfo, RunReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable or malformed input, bad parameters.
    #[error("{0}")]
    Input(String),
    /// Well-formed request that cannot be carried out, such as an oracle
    /// search space above the limit.
    #[error("{0}")]
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Infeasible(_) => 2,
        }
    }
}

fn input(msg: impl std::fmt::Display) -> CliError {
    CliError::Input(msg.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OnOff {
    On,
    Off,
}

impl From<OnOff> for bool {
    fn from(v: OnOff) -> bool {
        v == OnOff::On
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GanttFormat {
    Text,
    Svg,
}

/// Static DAG scheduling on heterogeneous processors with an artificial
/// immune system.
#[derive(Debug, Parser)]
#[command(name = "clonesched", version)]
pub struct Cli {
    /// Master seed for generators and the optimizer.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Gap filling in the decoder.
    #[arg(long, global = true, value_enum)]
    pub sns: Option<OnOff>,
    /// Worker threads for clone evaluation; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a task graph.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Check a task graph (and optionally a platform) for errors.
    Validate {
        dag: PathBuf,
        #[arg(long)]
        platform: Option<PathBuf>,
    },
    /// Decode one antibody into a schedule.
    Schedule {
        dag: PathBuf,
        platform: PathBuf,
        /// Comma-separated processor per task, in task-line order.
        #[arg(long)]
        antibody: String,
        #[command(flatten)]
        gantt: GanttArgs,
    },
    /// Run the optimizer.
    Optimize {
        dag: PathBuf,
        platform: PathBuf,
        #[command(flatten)]
        params: ConfigArgs,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        gantt: GanttArgs,
    },
    /// Exhaustively search all assignments.
    Oracle {
        dag: PathBuf,
        platform: PathBuf,
        /// Largest number of assignments to decode.
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: u64,
    },
    /// Run a benchmark suite.
    Bench {
        suite: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct GanttArgs {
    /// Emit a Gantt chart.
    #[arg(long, value_enum)]
    pub gantt: Option<GanttFormat>,
    /// Gantt output file; stdout when absent.
    #[arg(long, requires = "gantt")]
    pub gantt_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// Config file; flags below override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long = "iterations", short = 'K')]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub popsize: Option<usize>,
    #[arg(long)]
    pub clones: Option<usize>,
    #[arg(long)]
    pub selection_rate: Option<f64>,
    #[arg(long)]
    pub aff: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GenCommon {
    #[arg(long, default_value_t = 2)]
    pub procs: usize,
    #[arg(long, default_value_t = 1)]
    pub pt_min: u32,
    #[arg(long, default_value_t = 20)]
    pub pt_max: u32,
    #[arg(long, default_value_t = 1)]
    pub w_min: u32,
    #[arg(long, default_value_t = 10)]
    pub w_max: u32,
    /// Output file; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Gaussian elimination on an n × n matrix.
    Gaussian {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Layers of equal width, edges between consecutive layers.
    RandomLayered {
        #[arg(long)]
        layers: usize,
        #[arg(long)]
        width: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[command(flatten)]
        common: GenCommon,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| input(format!("cannot write {}: {e}", path.display())))
}

fn load_dag(path: &Path) -> Result<TaskGraph, CliError> {
    parse_dag(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_instance(dag: &Path, platform: &Path) -> Result<(TaskGraph, Platform), CliError> {
    let g = load_dag(dag)?;
    let pf = parse_platform(&read(platform)?)
        .map_err(|e| input(format!("{}: {e}", platform.display())))?;
    if g.procs() != pf.procs() {
        return Err(input(format!(
            "{} declares {} processors but {} has {}",
            dag.display(),
            g.procs(),
            platform.display(),
            pf.procs()
        )));
    }
    Ok((g, pf))
}

fn executor(threads: usize) -> Result<PoolExecutor, CliError> {
    PoolExecutor::new(threads).map_err(|e| input(format!("cannot start thread pool: {e}")))
}

fn emit_gantt(
    args: &GanttArgs,
    g: &TaskGraph,
    s: &Schedule,
    out: &mut String,
) -> Result<(), CliError> {
    let Some(format) = args.gantt else {
        return Ok(());
    };
    let chart = match format {
        GanttFormat::Text => text_gantt(g, s, 72),
        GanttFormat::Svg => svg_gantt(g, s),
    };
    match &args.gantt_out {
        Some(path) => write(path, &chart),
        None => {
            out.push('\n');
            out.push_str(&chart);
            Ok(())
        }
    }
}

/// Panics if the schedule breaks an invariant; decoder output always holds.
fn checked(g: &TaskGraph, pf: &Platform, s: Schedule) -> Schedule {
    let violations = verify(g, pf, &s.assignment(), &s);
    assert!(
        violations.is_empty(),
        "decoder produced an invalid schedule: {violations:?}"
    );
    s
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    let sns = cli.sns.map(bool::from);
    match &cli.command {
        Command::Gen { kind } => cmd_gen(kind, cli.seed.unwrap_or(0)),
        Command::Validate { dag, platform } => cmd_validate(dag, platform.as_deref()),
        Command::Schedule {
            dag,
            platform,
            antibody,
            gantt,
        } => cmd_schedule(dag, platform, antibody, sns.unwrap_or(true), gantt),
        Command::Optimize {
            dag,
            platform,
            params,
            json,
            gantt,
        } => cmd_optimize(dag, platform, params, cli, json.as_deref(), gantt),
        Command::Oracle {
            dag,
            platform,
            limit,
        } => cmd_oracle(dag, platform, sns.unwrap_or(true), *limit),
        Command::Bench { suite, json } => cmd_bench(suite, json.as_deref(), sns, cli.threads),
    }
}

fn cmd_gen(kind: &GenKind, seed: u64) -> Result<String, CliError> {
    let (g, common) = match kind {
        GenKind::Gaussian { n, common } => (
            gen_gaussian_elimination(
                *n,
                common.procs,
                (common.pt_min, common.pt_max),
                (common.w_min, common.w_max),
                seed,
            ),
            common,
        ),
        GenKind::RandomLayered {
            layers,
            width,
            density,
            common,
        } => (
            gen_random_layered(&LayeredParams {
                layers: *layers,
                width: *width,
                edge_density: *density,
                procs: common.procs,
                pt_range: (common.pt_min, common.pt_max),
                w_range: (common.w_min, common.w_max),
                seed,
            }),
            common,
        ),
    };
    let text = emit_dag(&g.map_err(input)?);
    match &common.output {
        Some(path) => {
            write(path, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn cmd_validate(dag: &Path, platform: Option<&Path>) -> Result<String, CliError> {
    let raw = parse_raw_dag(&read(dag)?).map_err(|e| input(format!("{}: {e}", dag.display())))?;
    let diags = clonesched_core::graph::validate(&raw);
    if !diags.is_empty() {
        let mut msg = format!("{}: {} problem(s)", dag.display(), diags.len());
        for d in &diags {
            write!(msg, "\n  {d}").unwrap();
        }
        return Err(CliError::Input(msg));
    }
    let g = clonesched_core::add_virtual_entry(raw).map_err(input)?;
    if let Some(p) = platform {
        load_instance(dag, p)?;
    }
    let exits: Vec<String> = g
        .exit_tasks()
        .iter()
        .map(|&t| crate::formats::task_name(&g, t).to_string())
        .collect();
    Ok(format!(
        "ok: {} tasks, {} edges, {} processors, exit tasks {}\n",
        g.real_task_count(),
        g.edges()
            .iter()
            .filter(|e| g.label(e.src).is_some())
            .count(),
        g.procs(),
        exits.join(",")
    ))
}

fn cmd_schedule(
    dag: &Path,
    platform: &Path,
    antibody: &str,
    sns: bool,
    gantt: &GanttArgs,
) -> Result<String, CliError> {
    let (g, pf) = load_instance(dag, platform)?;
    let a = parse_antibody(antibody, &g, &pf).map_err(input)?;
    let s = checked(&g, &pf, decode(&g, &pf, &a, sns));
    let mut out = emit_schedule(&g, &s);
    emit_gantt(gantt, &g, &s, &mut out)?;
    Ok(out)
}

/// Config file, then flags, then the global `--seed` and `--sns`.
pub fn resolve_config(
    params: &ConfigArgs,
    seed: Option<u64>,
    sns: Option<bool>,
) -> Result<OptimizerConfig, CliError> {
    let mut cfg = match &params.config {
        Some(path) => {
            parse_config(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))?
        }
        None => OptimizerConfig::default(),
    };
    if let Some(v) = params.iterations {
        cfg.iterations = v;
    }
    if let Some(v) = params.popsize {
        cfg.population = v;
    }
    if let Some(v) = params.clones {
        cfg.clones = v;
    }
    if let Some(v) = params.selection_rate {
        cfg.selection_rate = v;
    }
    if let Some(v) = params.aff {
        cfg.affinity_threshold = v;
    }
    if let Some(v) = seed {
        cfg.seed = v;
    }
    if let Some(v) = sns {
        cfg.sns = v;
    }
    cfg.validate()
        .map_err(|e| input(format!("invalid configuration: {e}")))?;
    Ok(cfg)
}

fn cmd_optimize(
    dag: &Path,
    platform: &Path,
    params: &ConfigArgs,
    cli: &Cli,
    json: Option<&Path>,
    gantt: &GanttArgs,
) -> Result<String, CliError> {
    let cfg = resolve_config(params, cli.seed, cli.sns.map(bool::from))?;
    let (g, pf) = load_instance(dag, platform)?;
    let exec = executor(cli.threads)?;
    let clock = Instant::now();
    let result = optimize_with(&g, &pf, &cfg, &exec).map_err(input)?;
    let wall = clock.elapsed().as_secs_f64();
    checked(&g, &pf, result.schedule.clone());

    let info = InstanceInfo::new(
        &dag.display().to_string(),
        &platform.display().to_string(),
        &g,
    );
    let report = RunReport::new(info, &cfg, &g, &result, wall);
    if let Some(path) = json {
        write(path, &report.to_json())?;
    }
    let mut out = report.to_text();
    emit_gantt(gantt, &g, &result.schedule, &mut out)?;
    Ok(out)
}

fn cmd_oracle(dag: &Path, platform: &Path, sns: bool, limit: u64) -> Result<String, CliError> {
    let (g, pf) = load_instance(dag, platform)?;
    let r = exhaustive_best(&g, &pf, sns, limit)
        .map_err(|e| CliError::Infeasible(format!("refusing to enumerate: {e}")))?;
    Ok(format!(
        "makespan {}\nantibody {}\nenumerated {}\n",
        r.makespan,
        emit_antibody(&r.best),
        r.enumerated
    ))
}

fn cmd_bench(
    suite: &Path,
    json: Option<&Path>,
    sns: Option<bool>,
    threads: usize,
) -> Result<String, CliError> {
    let base = suite.parent().unwrap_or(Path::new("."));
    let parsed =
        parse_suite(&read(suite)?, base).map_err(|e| input(format!("{}: {e}", suite.display())))?;
    let exec = executor(threads)?;
    let report = run_suite(&parsed, BenchOverrides { sns }, &exec).map_err(input)?;
    if let Some(path) = json {
        write(path, &report.to_json())?;
    }
    Ok(report.to_text())
}
