//! Run reports: a key-value header with history and schedule tables, plus a
//! lossless JSON form.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use clonesched_core::{OptimizeResult, OptimizerConfig, Schedule, TaskGraph};

use crate::formats::{emit_antibody, task_name};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceInfo {
    pub dag: String,
    pub platform: String,
    pub tasks: usize,
    pub edges: usize,
    pub procs: usize,
}

impl InstanceInfo {
    pub fn new(dag: &str, platform: &str, g: &TaskGraph) -> Self {
        InstanceInfo {
            dag: dag.to_string(),
            platform: platform.to_string(),
            tasks: g.real_task_count(),
            edges: g
                .edges()
                .iter()
                .filter(|e| g.label(e.src).is_some())
                .count(),
            procs: g.procs(),
        }
    }
}

/// Mirror of [`OptimizerConfig`] for serialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub iterations: usize,
    pub population: usize,
    pub clones: usize,
    pub selection_rate: f64,
    pub affinity_threshold: f64,
    pub sns: bool,
    pub seed: u64,
}

impl From<&OptimizerConfig> for ConfigEcho {
    fn from(c: &OptimizerConfig) -> Self {
        ConfigEcho {
            iterations: c.iterations,
            population: c.population,
            clones: c.clones,
            selection_rate: c.selection_rate,
            affinity_threshold: c.affinity_threshold,
            sns: c.sns,
            seed: c.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryEcho {
    pub best: Vec<f64>,
    pub mean: Vec<f64>,
    pub diversity: Vec<f64>,
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleLine {
    pub task: u64,
    pub proc: usize,
    pub ast: f64,
    pub aft: f64,
}

pub fn schedule_lines(g: &TaskGraph, s: &Schedule) -> Vec<ScheduleLine> {
    s.entries()
        .iter()
        .map(|e| ScheduleLine {
            task: task_name(g, e.task),
            proc: e.proc,
            ast: e.start,
            aft: e.finish,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub instance: InstanceInfo,
    pub config: ConfigEcho,
    pub best_makespan: f64,
    pub best_antibody: String,
    pub wall_time_s: f64,
    pub history: HistoryEcho,
    pub schedule: Vec<ScheduleLine>,
}

impl RunReport {
    pub fn new(
        instance: InstanceInfo,
        cfg: &OptimizerConfig,
        g: &TaskGraph,
        result: &OptimizeResult,
        wall_time_s: f64,
    ) -> Self {
        let h = &result.history;
        RunReport {
            instance,
            config: cfg.into(),
            best_makespan: result.makespan(),
            best_antibody: emit_antibody(&result.best),
            wall_time_s,
            history: HistoryEcho {
                best: h.best.clone(),
                mean: h.mean.clone(),
                diversity: h.diversity.clone(),
                evaluations: h.evaluations,
            },
            schedule: schedule_lines(g, &result.schedule),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields are plain data")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let i = &self.instance;
        let c = &self.config;
        let kv: [(&str, String); 16] = [
            ("dag", i.dag.clone()),
            ("platform", i.platform.clone()),
            ("tasks", i.tasks.to_string()),
            ("edges", i.edges.to_string()),
            ("procs", i.procs.to_string()),
            ("K", c.iterations.to_string()),
            ("popsize", c.population.to_string()),
            ("clones", c.clones.to_string()),
            ("selection_rate", c.selection_rate.to_string()),
            ("aff", c.affinity_threshold.to_string()),
            ("sns", (if c.sns { "on" } else { "off" }).to_string()),
            ("seed", c.seed.to_string()),
            ("evaluations", self.history.evaluations.to_string()),
            ("wall_time_s", format!("{:.3}", self.wall_time_s)),
            ("best_antibody", self.best_antibody.clone()),
            ("makespan", self.best_makespan.to_string()),
        ];
        for (k, v) in kv {
            writeln!(out, "{k:<15} {v}").unwrap();
        }
        out.push_str("\niteration  best  mean  diversity\n");
        let h = &self.history;
        for k in 0..h.best.len() {
            writeln!(
                out,
                "{} {} {:.3} {:.4}",
                k + 1,
                h.best[k],
                h.mean[k],
                h.diversity[k]
            )
            .unwrap();
        }
        out.push_str("\ntask  proc  ast  aft\n");
        for l in &self.schedule {
            writeln!(out, "sched {} {} {} {}", l.task, l.proc, l.ast, l.aft).unwrap();
        }
        writeln!(out, "makespan {}", self.best_makespan).unwrap();
        out
    }
}
