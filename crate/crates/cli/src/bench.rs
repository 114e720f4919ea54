//! Benchmark suites: several instances, each optimized over a range of
//! seeds and compared against the greedy baseline and, when the search space
//! is small enough, the exhaustive optimum.
//!
//! Descriptor format (paths relative to the descriptor file):
//!
//! ```text
//! repetitions 20        # seeds per instance, default 5
//! seed 100              # first seed, default 0
//! config default.cfg    # optimizer config for instances without their own
//! oracle_limit 1000000  # largest search space given to the oracle
//! instance five five.dag duo.platform [five.cfg]
//! ```

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use clonesched_core::exec::Executor;
use clonesched_core::oracle::{exhaustive_best, greedy_blevel_baseline, search_space};
use clonesched_core::{optimize_with, OptimizerConfig};

use crate::formats::{parse_config, parse_dag, parse_platform, ParseError};

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteEntry {
    pub name: String,
    pub dag: PathBuf,
    pub platform: PathBuf,
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Suite {
    pub repetitions: u64,
    pub seed: u64,
    pub config: Option<PathBuf>,
    pub oracle_limit: u64,
    pub instances: Vec<SuiteEntry>,
}

impl Default for Suite {
    fn default() -> Self {
        Suite {
            repetitions: 5,
            seed: 0,
            config: None,
            oracle_limit: 1_000_000,
            instances: Vec::new(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("{path}: {source}")]
    Descriptor { path: String, source: ParseError },
    #[error("instance `{name}`: cannot read {path}: {source}")]
    Io {
        name: String,
        path: String,
        source: std::io::Error,
    },
    #[error("instance `{name}`: {path}: {source}")]
    Parse {
        name: String,
        path: String,
        source: ParseError,
    },
    #[error("instance `{name}`: {msg}")]
    Instance { name: String, msg: String },
}

/// Parses a descriptor; relative paths are resolved against `base`.
pub fn parse_suite(text: &str, base: &Path) -> Result<Suite, ParseError> {
    let mut suite = Suite::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let tokens: Vec<&str> = raw
            .split('#')
            .next()
            .unwrap_or("")
            .split_whitespace()
            .collect();
        let Some(&key) = tokens.first() else { continue };
        let err = |msg: String| ParseError::Syntax { line, msg };
        let single = || -> Result<&str, ParseError> {
            match tokens.len() {
                2 => Ok(tokens[1]),
                _ => Err(err(format!("expected `{key} <value>`"))),
            }
        };
        let int = |v: &str| -> Result<u64, ParseError> {
            v.parse()
                .map_err(|_| err(format!("`{v}` is not a non-negative integer")))
        };
        match key {
            "repetitions" => suite.repetitions = int(single()?)?,
            "seed" => suite.seed = int(single()?)?,
            "oracle_limit" => suite.oracle_limit = int(single()?)?,
            "config" => suite.config = Some(base.join(single()?)),
            "instance" => {
                if !(4..=5).contains(&tokens.len()) {
                    return Err(err(
                        "expected `instance <name> <dag> <platform> [config]`".into()
                    ));
                }
                suite.instances.push(SuiteEntry {
                    name: tokens[1].to_string(),
                    dag: base.join(tokens[2]),
                    platform: base.join(tokens[3]),
                    config: tokens.get(4).map(|c| base.join(c)),
                });
            }
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }
    Ok(suite)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub name: String,
    pub tasks: usize,
    pub procs: usize,
    pub seeds: Vec<u64>,
    /// Best makespan of each seed's run.
    pub ais: Vec<f64>,
    pub ais_mean: f64,
    pub ais_min: f64,
    pub ais_max: f64,
    pub greedy: f64,
    pub oracle: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

impl BenchReport {
    pub fn to_text(&self) -> String {
        let mut out = String::from(
            "instance  tasks  procs  runs  ais_mean  ais_min  ais_max  greedy  oracle\n",
        );
        for r in &self.rows {
            writeln!(
                out,
                "{} {} {} {} {:.3} {} {} {} {}",
                r.name,
                r.tasks,
                r.procs,
                r.ais.len(),
                r.ais_mean,
                r.ais_min,
                r.ais_max,
                r.greedy,
                fmt_opt(r.oracle)
            )
            .unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields are plain data")
    }
}

/// Per-run overrides applied on top of each instance's configuration.
#[derive(Debug, Clone, Copy, Default)]
pub struct BenchOverrides {
    pub sns: Option<bool>,
}

fn read(name: &str, path: &Path) -> Result<String, BenchError> {
    std::fs::read_to_string(path).map_err(|source| BenchError::Io {
        name: name.to_string(),
        path: path.display().to_string(),
        source,
    })
}

fn parsed<T>(name: &str, path: &Path, r: Result<T, ParseError>) -> Result<T, BenchError> {
    r.map_err(|source| BenchError::Parse {
        name: name.to_string(),
        path: path.display().to_string(),
        source,
    })
}

/// Runs every instance in suite order.
pub fn run_suite<E: Executor>(
    suite: &Suite,
    overrides: BenchOverrides,
    exec: &E,
) -> Result<BenchReport, BenchError> {
    let default_cfg = match &suite.config {
        Some(path) => parsed("<suite>", path, parse_config(&read("<suite>", path)?))?,
        None => OptimizerConfig::default(),
    };
    let mut report = BenchReport::default();
    for entry in &suite.instances {
        let name = entry.name.as_str();
        let g = parsed(name, &entry.dag, parse_dag(&read(name, &entry.dag)?))?;
        let pf = parsed(
            name,
            &entry.platform,
            parse_platform(&read(name, &entry.platform)?),
        )?;
        if g.procs() != pf.procs() {
            return Err(BenchError::Instance {
                name: name.to_string(),
                msg: format!(
                    "graph declares {} processors, platform {}",
                    g.procs(),
                    pf.procs()
                ),
            });
        }
        let mut cfg = match &entry.config {
            Some(path) => parsed(name, path, parse_config(&read(name, path)?))?,
            None => default_cfg.clone(),
        };
        if let Some(sns) = overrides.sns {
            cfg.sns = sns;
        }

        let seeds: Vec<u64> = (0..suite.repetitions).map(|k| suite.seed + k).collect();
        let mut ais = Vec::with_capacity(seeds.len());
        for &seed in &seeds {
            let run_cfg = OptimizerConfig {
                seed,
                ..cfg.clone()
            };
            let r = optimize_with(&g, &pf, &run_cfg, exec).map_err(|e| BenchError::Instance {
                name: name.to_string(),
                msg: e.to_string(),
            })?;
            ais.push(r.makespan());
        }
        let greedy = greedy_blevel_baseline(&g, &pf).makespan();
        let oracle = search_space(pf.procs(), g.real_task_count(), suite.oracle_limit).map(|_| {
            exhaustive_best(&g, &pf, cfg.sns, suite.oracle_limit)
                .expect("search space checked")
                .makespan
        });
        let (min, max) = ais
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &m| {
                (lo.min(m), hi.max(m))
            });
        let mean = if ais.is_empty() {
            f64::NAN
        } else {
            ais.iter().sum::<f64>() / ais.len() as f64
        };
        report.rows.push(BenchRow {
            name: name.to_string(),
            tasks: g.real_task_count(),
            procs: pf.procs(),
            seeds,
            ais_mean: mean,
            ais_min: min,
            ais_max: max,
            ais,
            greedy,
            oracle,
        });
    }
    Ok(report)
}
