//! Line-oriented text formats for task graphs, platforms, optimizer
//! configurations and schedules. `#` starts a comment anywhere on a line.

use std::collections::HashMap;
use std::fmt::Write as _;

use clonesched_core::graph::{add_virtual_entry, Edge, GraphError, RawDag, RawTask};
use clonesched_core::platform::PlatformError;
use clonesched_core::{Antibody, OptimizerConfig, Platform, Schedule, TaskGraph};

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{0}")]
    Missing(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Platform(#[from] PlatformError),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// Non-empty lines with comments stripped, split into tokens, together with
/// their 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn number<T: std::str::FromStr>(line: usize, what: &str, token: &str) -> Result<T, ParseError> {
    token
        .parse()
        .map_err(|_| syntax(line, format!("{what} `{token}` is not a valid number")))
}

fn arity(line: usize, tokens: &[&str], expected: usize, usage: &str) -> Result<(), ParseError> {
    if tokens.len() == expected {
        Ok(())
    } else {
        Err(syntax(line, format!("expected `{usage}`")))
    }
}

/// Parses a DAG file into raw form without validating the graph.
///
/// ```text
/// procs 2
/// task 1 2 4      # id, then one processing time per processor
/// task 2 3 3
/// edge 1 2 10     # src id, dst id, data volume
/// ```
///
/// Task ids are arbitrary non-negative integers kept as labels; tasks are
/// indexed in file order.
pub fn parse_raw_dag(text: &str) -> Result<RawDag, ParseError> {
    let mut procs: Option<usize> = None;
    let mut tasks = Vec::new();
    let mut index: HashMap<u64, usize> = HashMap::new();
    let mut edges = Vec::new();

    for (line, tokens) in lines(text) {
        match tokens[0] {
            "procs" => {
                arity(line, &tokens, 2, "procs <count>")?;
                if procs.is_some() {
                    return Err(syntax(line, "processor count declared twice"));
                }
                procs = Some(number(line, "processor count", tokens[1])?);
            }
            "task" => {
                let p = procs.ok_or_else(|| syntax(line, "`procs` must precede task lines"))?;
                if tokens.len() < 2 {
                    return Err(syntax(line, "expected `task <id> <pt_0> ... <pt_P-1>`"));
                }
                let id: u64 = number(line, "task id", tokens[1])?;
                let pts = tokens[2..]
                    .iter()
                    .map(|t| number(line, "processing time", t))
                    .collect::<Result<Vec<f64>, _>>()?;
                if pts.len() != p {
                    return Err(syntax(
                        line,
                        format!("task {id} has {} processing times, expected {p}", pts.len()),
                    ));
                }
                if index.insert(id, tasks.len()).is_some() {
                    return Err(syntax(line, format!("task {id} defined twice")));
                }
                tasks.push(RawTask::new(id, pts));
            }
            "edge" => {
                arity(line, &tokens, 4, "edge <src> <dst> <weight>")?;
                let src: u64 = number(line, "task id", tokens[1])?;
                let dst: u64 = number(line, "task id", tokens[2])?;
                let w: f64 = number(line, "edge weight", tokens[3])?;
                edges.push((line, src, dst, w));
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }

    let procs = procs.ok_or(ParseError::Missing("missing `procs` line"))?;
    let edges = edges
        .into_iter()
        .map(|(line, src, dst, w)| {
            let find = |id: u64| {
                index
                    .get(&id)
                    .copied()
                    .ok_or_else(|| syntax(line, format!("edge references undefined task {id}")))
            };
            Ok(Edge::new(find(src)?, find(dst)?, w))
        })
        .collect::<Result<_, ParseError>>()?;
    Ok(RawDag {
        procs,
        tasks,
        edges,
    })
}

/// Parses and validates a DAG file, adding the virtual entry task.
pub fn parse_dag(text: &str) -> Result<TaskGraph, ParseError> {
    Ok(add_virtual_entry(parse_raw_dag(text)?)?)
}

/// Writes `g` in DAG file format. A synthesized virtual entry and its edges
/// are left out, so parsing the output gives back an identical graph.
pub fn emit_dag(g: &TaskGraph) -> String {
    let mut out = String::new();
    writeln!(out, "procs {}", g.procs()).unwrap();
    for (t, node) in g.tasks().iter().enumerate() {
        let Some(label) = g.label(t) else { continue };
        write!(out, "task {label}").unwrap();
        for pt in &node.proc_times {
            write!(out, " {pt}").unwrap();
        }
        out.push('\n');
    }
    for e in g.edges() {
        if let (Some(src), Some(dst)) = (g.label(e.src), g.label(e.dst)) {
            writeln!(out, "edge {src} {dst} {}", e.weight).unwrap();
        }
    }
    out
}

/// Parses a platform file:
///
/// ```text
/// procs 3
/// comm uniform 1      # default rate for every pair
/// comm 0 2 2.5        # one symmetric pair
/// ```
pub fn parse_platform(text: &str) -> Result<Platform, ParseError> {
    let mut procs: Option<usize> = None;
    let mut uniform: Option<f64> = None;
    let mut pairs = Vec::new();
    for (line, tokens) in lines(text) {
        match tokens[0] {
            "procs" => {
                arity(line, &tokens, 2, "procs <count>")?;
                if procs.is_some() {
                    return Err(syntax(line, "processor count declared twice"));
                }
                procs = Some(number(line, "processor count", tokens[1])?);
            }
            "comm" if tokens.get(1) == Some(&"uniform") => {
                arity(line, &tokens, 3, "comm uniform <rate>")?;
                if uniform.is_some() {
                    return Err(syntax(line, "uniform rate declared twice"));
                }
                uniform = Some(number(line, "rate", tokens[2])?);
            }
            "comm" => {
                arity(line, &tokens, 4, "comm <i> <j> <rate>")?;
                pairs.push((
                    number(line, "processor index", tokens[1])?,
                    number(line, "processor index", tokens[2])?,
                    number(line, "rate", tokens[3])?,
                ));
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }
    let procs = procs.ok_or(ParseError::Missing("missing `procs` line"))?;
    Ok(Platform::from_pairs(procs, uniform, &pairs)?)
}

pub fn emit_platform(pf: &Platform) -> String {
    let mut out = format!("procs {}\n", pf.procs());
    match pf.uniform_rate() {
        Some(r) => writeln!(out, "comm uniform {r}").unwrap(),
        None => {
            for i in 0..pf.procs() {
                for j in i + 1..pf.procs() {
                    writeln!(out, "comm {i} {j} {}", pf.rate(i, j)).unwrap();
                }
            }
        }
    }
    out
}

fn on_off(line: usize, token: &str) -> Result<bool, ParseError> {
    match token {
        "on" => Ok(true),
        "off" => Ok(false),
        _ => Err(syntax(
            line,
            format!("expected `on` or `off`, found `{token}`"),
        )),
    }
}

/// Parses an optimizer configuration; keys not given keep their defaults.
///
/// ```text
/// K 100
/// popsize 400
/// clones 50
/// selection_rate 0.25
/// aff 0.2
/// sns on
/// seed 0
/// ```
///
/// Values are not range-checked here; see [`OptimizerConfig::validate`].
pub fn parse_config(text: &str) -> Result<OptimizerConfig, ParseError> {
    let mut cfg = OptimizerConfig::default();
    for (line, tokens) in lines(text) {
        arity(line, &tokens, 2, "<key> <value>")?;
        let v = tokens[1];
        match tokens[0] {
            "K" => cfg.iterations = number(line, "K", v)?,
            "popsize" => cfg.population = number(line, "popsize", v)?,
            "clones" => cfg.clones = number(line, "clones", v)?,
            "selection_rate" => cfg.selection_rate = number(line, "selection_rate", v)?,
            "aff" => cfg.affinity_threshold = number(line, "aff", v)?,
            "sns" => cfg.sns = on_off(line, v)?,
            "seed" => cfg.seed = number(line, "seed", v)?,
            other => return Err(syntax(line, format!("unknown key `{other}`"))),
        }
    }
    Ok(cfg)
}

pub fn emit_config(cfg: &OptimizerConfig) -> String {
    format!(
        "K {}\npopsize {}\nclones {}\nselection_rate {}\naff {}\nsns {}\nseed {}\n",
        cfg.iterations,
        cfg.population,
        cfg.clones,
        cfg.selection_rate,
        cfg.affinity_threshold,
        if cfg.sns { "on" } else { "off" },
        cfg.seed
    )
}

#[derive(Debug, PartialEq, thiserror::Error)]
pub enum AntibodyLiteralError {
    #[error("antibody cell {cell}: `{token}` is not a processor index")]
    NotANumber { cell: usize, token: String },
    #[error("antibody has {found} cells, the graph has {expected} real tasks")]
    Length { expected: usize, found: usize },
    #[error("antibody cell {cell} holds processor {value}, only {procs} processors exist")]
    OutOfRange {
        cell: usize,
        value: usize,
        procs: usize,
    },
}

/// Parses a comma-separated antibody such as `0,0,1,0,1`. Cell `k` is the
/// processor of the `k`-th task line of the DAG file.
pub fn parse_antibody(
    text: &str,
    g: &TaskGraph,
    pf: &Platform,
) -> Result<Antibody, AntibodyLiteralError> {
    let trimmed = text.trim();
    let cells = if trimmed.is_empty() {
        Vec::new()
    } else {
        trimmed
            .split(',')
            .enumerate()
            .map(|(cell, tok)| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| AntibodyLiteralError::NotANumber {
                        cell,
                        token: tok.trim().to_string(),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    if cells.len() != g.real_task_count() {
        return Err(AntibodyLiteralError::Length {
            expected: g.real_task_count(),
            found: cells.len(),
        });
    }
    if let Some((cell, &value)) = cells.iter().enumerate().find(|(_, &v)| v >= pf.procs()) {
        return Err(AntibodyLiteralError::OutOfRange {
            cell,
            value,
            procs: pf.procs(),
        });
    }
    Ok(Antibody::new(cells))
}

pub fn emit_antibody(a: &Antibody) -> String {
    a.cells()
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Task id shown to users: the file label, or the internal index.
pub fn task_name(g: &TaskGraph, task: usize) -> u64 {
    g.label(task).unwrap_or(task as u64)
}

/// `sched <task> <proc> <ast> <aft>` per task in id order, then
/// `makespan <value>`.
pub fn emit_schedule(g: &TaskGraph, s: &Schedule) -> String {
    let mut out = String::new();
    for e in s.entries() {
        writeln!(
            out,
            "sched {} {} {} {}",
            task_name(g, e.task),
            e.proc,
            e.start,
            e.finish
        )
        .unwrap();
    }
    writeln!(out, "makespan {}", s.makespan()).unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIVE: &str = "\
# five tasks, two processors
procs 2
task 1 2 4
task 2 3 3
task 3 4 2
task 4 2 3
task 5 3 1
edge 1 2 10
edge 2 3 5
edge 2 4 2
edge 3 5 2
edge 4 5 7
";

    #[test]
    fn dag_round_trip() {
        let g = parse_dag(FIVE).unwrap();
        assert_eq!(g.real_task_count(), 5);
        assert_eq!(g.edges().len(), 6);
        let text = emit_dag(&g);
        assert_eq!(parse_dag(&text).unwrap(), g);
        assert_eq!(emit_dag(&parse_dag(&text).unwrap()), text);
    }

    #[test]
    fn ids_are_remapped() {
        let g = parse_dag("procs 1\ntask 70 1\ntask 9 2\nedge 70 9 3\n").unwrap();
        assert_eq!(g.index_of_label(70), Some(1));
        assert_eq!(g.index_of_label(9), Some(2));
        assert_eq!(g.successors(1), &[(2, 3.0)]);
    }

    #[test]
    fn dag_errors_carry_line_numbers() {
        let cases = [
            ("task 1 2\n", 1, "must precede"),
            ("procs 2\ntask 1 2\n", 2, "expected 2"),
            ("procs 1\ntask 1 2\ntask 1 3\n", 3, "twice"),
            ("procs 1\ntask 1 2\nedge 1 4 0\n", 3, "undefined task 4"),
            ("procs 1\n\n# c\nnode 1\n", 4, "unknown directive"),
            ("procs 1\ntask x 2\n", 2, "not a valid number"),
            ("procs 1\ntask 1 2\nedge 1 1\n", 3, "expected `edge"),
        ];
        for (text, line, needle) in cases {
            match parse_dag(text) {
                Err(ParseError::Syntax { line: l, msg }) => {
                    assert_eq!(l, line, "{text:?}");
                    assert!(msg.contains(needle), "{msg}");
                }
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!(matches!(parse_dag(""), Err(ParseError::Missing(_))));
        let err = parse_dag("procs 1\ntask 2 1\ntask 3 1\nedge 2 3 1\nedge 3 2 1\n").unwrap_err();
        assert!(err.to_string().contains("cycle"), "{err}");
    }

    #[test]
    fn platform_forms() {
        let pf = parse_platform("procs 3\ncomm uniform 2\n").unwrap();
        assert_eq!(pf, Platform::uniform(3, 2.0).unwrap());
        assert_eq!(parse_platform(&emit_platform(&pf)).unwrap(), pf);

        let pf =
            parse_platform("procs 3\ncomm 0 1 1\ncomm 0 2 2\ncomm 2 1 3 # mirrored\n").unwrap();
        assert_eq!(pf.rate(1, 2), 3.0);
        assert_eq!(pf.uniform_rate(), None);
        assert_eq!(parse_platform(&emit_platform(&pf)).unwrap(), pf);

        let pf = parse_platform("procs 3\ncomm uniform 1\ncomm 0 2 5\n").unwrap();
        assert_eq!((pf.rate(0, 1), pf.rate(2, 0)), (1.0, 5.0));

        assert!(matches!(
            parse_platform("procs 3\ncomm 0 1 1\n"),
            Err(ParseError::Platform(PlatformError::MissingRate { .. }))
        ));
        assert!(parse_platform("procs 2\ncomm uniform -1\n").is_err());
    }

    #[test]
    fn config_keys() {
        let cfg =
            parse_config("K 50\npopsize 50\nclones 10\nsns off # gaps stay\nseed 1\n").unwrap();
        assert_eq!(cfg.iterations, 50);
        assert_eq!(cfg.population, 50);
        assert_eq!(cfg.clones, 10);
        assert!(!cfg.sns);
        assert_eq!(cfg.selection_rate, 0.25);
        assert_eq!(parse_config(&emit_config(&cfg)).unwrap(), cfg);
        assert_eq!(parse_config("").unwrap(), OptimizerConfig::default());
        assert!(parse_config("sns maybe\n").is_err());
        assert!(parse_config("popsize\n").is_err());
        assert!(parse_config("mutation 3\n").is_err());
    }

    #[test]
    fn antibody_literals() {
        let g = parse_dag(FIVE).unwrap();
        let pf = Platform::uniform(2, 1.0).unwrap();
        let a = parse_antibody("0,0,1,0,1", &g, &pf).unwrap();
        assert_eq!(emit_antibody(&a), "0,0,1,0,1");
        assert_eq!(
            parse_antibody("0,0,2,0,1", &g, &pf),
            Err(AntibodyLiteralError::OutOfRange {
                cell: 2,
                value: 2,
                procs: 2
            })
        );
        assert!(matches!(
            parse_antibody("0,0", &g, &pf),
            Err(AntibodyLiteralError::Length { .. })
        ));
        assert!(matches!(
            parse_antibody("0,a,0,0,0", &g, &pf),
            Err(AntibodyLiteralError::NotANumber { cell: 1, .. })
        ));
    }

    #[test]
    fn schedule_listing() {
        let g = parse_dag(FIVE).unwrap();
        let pf = Platform::uniform(2, 1.0).unwrap();
        let s = clonesched_core::decode(&g, &pf, &Antibody::new(vec![0, 0, 1, 0, 1]), false);
        let text = emit_schedule(&g, &s);
        assert!(text.starts_with("sched 1 0 0 2\nsched 2 0 2 5\nsched 3 1 10 12\n"));
        assert!(text.ends_with("makespan 15\n"));
    }
}
