//! Task graphs.
//!
//! A [`TaskGraph`] always has a single entry task at index 0: the virtual
//! entry `T_0`, with zero processing time on every processor and zero-weight
//! edges to every task that had no predecessor in the input. Real tasks are
//! indexed `1..task_count()`.
//!
//! Graphs are built from an unvalidated [`RawDag`] through
//! [`add_virtual_entry`], which runs [`validate`] first.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::Time;

pub mod generate;

pub use generate::{gen_gaussian_elimination, gen_random_layered, GenError, LayeredParams};

/// A task with one processing time per processor.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskNode {
    pub id: usize,
    pub proc_times: Vec<Time>,
}

/// Data dependency `src -> dst` carrying `weight` data units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
}

impl Edge {
    pub fn new(src: usize, dst: usize, weight: f64) -> Self {
        Edge { src, dst, weight }
    }
}

/// Task of a [`RawDag`]. `label` is the id the task had in its source
/// (file id, generator id); `None` marks a synthesized virtual entry.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTask {
    pub label: Option<u64>,
    pub proc_times: Vec<Time>,
}

impl RawTask {
    pub fn new(label: u64, proc_times: Vec<Time>) -> Self {
        RawTask {
            label: Some(label),
            proc_times,
        }
    }
}

/// Unvalidated task graph. Edge endpoints index into `tasks`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawDag {
    pub procs: usize,
    pub tasks: Vec<RawTask>,
    pub edges: Vec<Edge>,
}

impl RawDag {
    /// Identifier used in diagnostics: the task's label, or its index when it
    /// has none (or the index is out of range).
    fn task_ref(&self, index: usize) -> u64 {
        self.tasks
            .get(index)
            .and_then(|t| t.label)
            .unwrap_or(index as u64)
    }
}

/// One invariant violation found by [`validate`]. Tasks are identified by
/// label (index for unlabeled tasks).
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    NoProcessors,
    RowLength {
        task: u64,
        expected: usize,
        found: usize,
    },
    InvalidProcTime {
        task: u64,
        proc: usize,
        value: f64,
    },
    ZeroCostTask {
        task: u64,
    },
    DanglingEdge {
        src: usize,
        dst: usize,
        tasks: usize,
    },
    SelfEdge {
        task: u64,
    },
    DuplicateEdge {
        src: u64,
        dst: u64,
    },
    InvalidWeight {
        src: u64,
        dst: u64,
        weight: f64,
    },
    /// Tasks along one cycle, in edge order.
    Cycle {
        tasks: Vec<u64>,
    },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::NoProcessors => write!(f, "processor count must be positive"),
            Diagnostic::RowLength {
                task,
                expected,
                found,
            } => write!(
                f,
                "task {task}: {found} processing times given, {expected} processors declared"
            ),
            Diagnostic::InvalidProcTime { task, proc, value } => write!(
                f,
                "task {task}: processing time {value} on processor {proc} is not a finite non-negative number"
            ),
            Diagnostic::ZeroCostTask { task } => {
                write!(f, "task {task}: processing time is zero on every processor")
            }
            Diagnostic::DanglingEdge { src, dst, tasks } => write!(
                f,
                "edge {src} -> {dst} references a task outside 0..{tasks}"
            ),
            Diagnostic::SelfEdge { task } => write!(f, "self-edge on task {task}"),
            Diagnostic::DuplicateEdge { src, dst } => write!(f, "duplicate edge {src} -> {dst}"),
            Diagnostic::InvalidWeight { src, dst, weight } => write!(
                f,
                "edge {src} -> {dst}: weight {weight} is not a finite non-negative number"
            ),
            Diagnostic::Cycle { tasks } => {
                write!(f, "cycle detected:")?;
                for t in tasks {
                    write!(f, " {t} ->")?;
                }
                match tasks.first() {
                    Some(first) => write!(f, " {first}"),
                    None => Ok(()),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("invalid task graph: {}", render(.0))]
    Invalid(Vec<Diagnostic>),
}

fn render(diags: &[Diagnostic]) -> alloc::string::String {
    use alloc::string::ToString;
    diags
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Checks every graph invariant and reports all violations at once.
///
/// A zero-cost task is accepted only when it is the unique entry task and all
/// of its out-edges carry zero weight, i.e. when it already is a virtual
/// entry.
pub fn validate(raw: &RawDag) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let n = raw.tasks.len();

    if raw.procs == 0 {
        diags.push(Diagnostic::NoProcessors);
    }

    for (i, task) in raw.tasks.iter().enumerate() {
        if task.proc_times.len() != raw.procs {
            diags.push(Diagnostic::RowLength {
                task: raw.task_ref(i),
                expected: raw.procs,
                found: task.proc_times.len(),
            });
        }
        for (p, &v) in task.proc_times.iter().enumerate() {
            if !(v.is_finite() && v >= 0.0) {
                diags.push(Diagnostic::InvalidProcTime {
                    task: raw.task_ref(i),
                    proc: p,
                    value: v,
                });
            }
        }
    }

    let mut seen = BTreeSet::new();
    let mut structural_ok = true;
    for e in &raw.edges {
        if e.src >= n || e.dst >= n {
            diags.push(Diagnostic::DanglingEdge {
                src: e.src,
                dst: e.dst,
                tasks: n,
            });
            structural_ok = false;
            continue;
        }
        if e.src == e.dst {
            diags.push(Diagnostic::SelfEdge {
                task: raw.task_ref(e.src),
            });
            structural_ok = false;
            continue;
        }
        if !seen.insert((e.src, e.dst)) {
            diags.push(Diagnostic::DuplicateEdge {
                src: raw.task_ref(e.src),
                dst: raw.task_ref(e.dst),
            });
        }
        if !(e.weight.is_finite() && e.weight >= 0.0) {
            diags.push(Diagnostic::InvalidWeight {
                src: raw.task_ref(e.src),
                dst: raw.task_ref(e.dst),
                weight: e.weight,
            });
        }
    }

    if structural_ok {
        if let Some(cycle) = find_cycle(n, &raw.edges) {
            diags.push(Diagnostic::Cycle {
                tasks: cycle.into_iter().map(|i| raw.task_ref(i)).collect(),
            });
        }
    }

    let existing_entry = existing_virtual_entry(raw);
    for (i, task) in raw.tasks.iter().enumerate() {
        let zero = !task.proc_times.is_empty() && task.proc_times.iter().all(|&v| v == 0.0);
        if zero && existing_entry != Some(i) {
            diags.push(Diagnostic::ZeroCostTask {
                task: raw.task_ref(i),
            });
        }
    }

    diags
}

/// Finds the unique entry task if it already qualifies as a virtual entry.
fn existing_virtual_entry(raw: &RawDag) -> Option<usize> {
    let n = raw.tasks.len();
    let mut has_pred = vec![false; n];
    for e in &raw.edges {
        if e.dst < n {
            has_pred[e.dst] = true;
        }
    }
    let mut entries = (0..n).filter(|&i| !has_pred[i]);
    let entry = entries.next()?;
    if entries.next().is_some() {
        return None;
    }
    let zero_cost = raw.tasks[entry].proc_times.iter().all(|&v| v == 0.0);
    let zero_out = raw
        .edges
        .iter()
        .filter(|e| e.src == entry)
        .all(|e| e.weight == 0.0);
    (zero_cost && zero_out).then_some(entry)
}

/// Kahn's algorithm; on failure walks predecessors inside the residual graph
/// until a task repeats.
fn find_cycle(n: usize, edges: &[Edge]) -> Option<Vec<usize>> {
    let mut indeg = vec![0usize; n];
    let mut succ = vec![Vec::new(); n];
    for e in edges {
        indeg[e.dst] += 1;
        succ[e.src].push(e.dst);
    }
    let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut done = vec![false; n];
    while let Some(u) = stack.pop() {
        done[u] = true;
        for &v in &succ[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                stack.push(v);
            }
        }
    }
    let start = (0..n).find(|&i| !done[i])?;

    // Every residual task has a residual predecessor.
    let mut pred_in_residual = vec![usize::MAX; n];
    for e in edges {
        if !done[e.src] && !done[e.dst] && pred_in_residual[e.dst] == usize::MAX {
            pred_in_residual[e.dst] = e.src;
        }
    }
    let mut visited_at = vec![usize::MAX; n];
    let mut walk = Vec::new();
    let mut cur = start;
    while visited_at[cur] == usize::MAX {
        visited_at[cur] = walk.len();
        walk.push(cur);
        cur = pred_in_residual[cur];
    }
    let mut cycle = walk.split_off(visited_at[cur]);
    // The walk followed edges backwards.
    cycle.reverse();
    let lowest = (0..cycle.len()).min_by_key(|&i| cycle[i]).unwrap_or(0);
    cycle.rotate_left(lowest);
    Some(cycle)
}

/// Validated, immutable task DAG with the virtual entry at index 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskGraph {
    procs: usize,
    tasks: Vec<TaskNode>,
    edges: Vec<Edge>,
    labels: Vec<Option<u64>>,
    succ: Vec<Vec<(usize, f64)>>,
    pred: Vec<Vec<(usize, f64)>>,
    topo: Vec<usize>,
}

/// Validates `raw` and gives it a unique zero-cost entry task at index 0.
///
/// If `raw` already has exactly one entry task with zero processing time and
/// zero-weight out-edges, that task becomes `T_0` and nothing is added.
/// Otherwise a new `T_0` is prepended with a zero-weight edge to every task
/// that has no predecessor (an empty `raw` yields a graph holding only `T_0`).
pub fn add_virtual_entry(raw: RawDag) -> Result<TaskGraph, GraphError> {
    let diags = validate(&raw);
    if !diags.is_empty() {
        return Err(GraphError::Invalid(diags));
    }

    let n = raw.tasks.len();
    let existing = existing_virtual_entry(&raw);
    let RawDag {
        procs,
        tasks,
        edges,
    } = raw;

    let (tasks, edges) = match existing {
        Some(entry) => {
            // Move the existing entry to index 0, keeping the others in order.
            let mut perm = vec![0usize; n];
            let mut next = 1;
            for (i, slot) in perm.iter_mut().enumerate() {
                if i == entry {
                    *slot = 0;
                } else {
                    *slot = next;
                    next += 1;
                }
            }
            let mut reordered: Vec<Option<RawTask>> = vec![None; n];
            for (i, t) in tasks.into_iter().enumerate() {
                reordered[perm[i]] = Some(t);
            }
            let edges = edges
                .into_iter()
                .map(|e| Edge::new(perm[e.src], perm[e.dst], e.weight))
                .collect();
            (reordered.into_iter().flatten().collect::<Vec<_>>(), edges)
        }
        None => {
            let mut has_pred = vec![false; n];
            for e in &edges {
                has_pred[e.dst] = true;
            }
            let mut all_tasks = Vec::with_capacity(n + 1);
            all_tasks.push(RawTask {
                label: None,
                proc_times: vec![0.0; procs],
            });
            all_tasks.extend(tasks);
            let mut all_edges: Vec<Edge> = (0..n)
                .filter(|&i| !has_pred[i])
                .map(|i| Edge::new(0, i + 1, 0.0))
                .collect();
            all_edges.extend(
                edges
                    .into_iter()
                    .map(|e| Edge::new(e.src + 1, e.dst + 1, e.weight)),
            );
            (all_tasks, all_edges)
        }
    };

    Ok(TaskGraph::assemble(procs, tasks, edges))
}

impl TaskGraph {
    fn assemble(procs: usize, raw_tasks: Vec<RawTask>, edges: Vec<Edge>) -> TaskGraph {
        let n = raw_tasks.len();
        let mut labels = Vec::with_capacity(n);
        let tasks = raw_tasks
            .into_iter()
            .enumerate()
            .map(|(id, t)| {
                labels.push(t.label);
                TaskNode {
                    id,
                    proc_times: t.proc_times,
                }
            })
            .collect();
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for e in &edges {
            succ[e.src].push((e.dst, e.weight));
            pred[e.dst].push((e.src, e.weight));
        }
        let topo = topological_order(n, &succ, &pred);
        TaskGraph {
            procs,
            tasks,
            edges,
            labels,
            succ,
            pred,
            topo,
        }
    }

    /// `T_c`: number of tasks including the virtual entry.
    pub fn task_count(&self) -> usize {
        self.tasks.len()
    }

    /// Number of real tasks, which is also the antibody length.
    pub fn real_task_count(&self) -> usize {
        self.tasks.len().saturating_sub(1)
    }

    pub fn procs(&self) -> usize {
        self.procs
    }

    pub fn tasks(&self) -> &[TaskNode] {
        &self.tasks
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Processing time of `task` on `proc`.
    #[inline]
    pub fn proc_time(&self, task: usize, proc: usize) -> Time {
        self.tasks[task].proc_times[proc]
    }

    #[inline]
    pub fn successors(&self, task: usize) -> &[(usize, f64)] {
        &self.succ[task]
    }

    #[inline]
    pub fn predecessors(&self, task: usize) -> &[(usize, f64)] {
        &self.pred[task]
    }

    /// Tasks in topological order; index 0 comes first.
    pub fn topo_order(&self) -> &[usize] {
        &self.topo
    }

    /// Original id of a task; `None` for a synthesized virtual entry.
    pub fn label(&self, task: usize) -> Option<u64> {
        self.labels[task]
    }

    pub fn labels(&self) -> &[Option<u64>] {
        &self.labels
    }

    /// Index of the task with the given original id.
    pub fn index_of_label(&self, label: u64) -> Option<usize> {
        self.labels.iter().position(|&l| l == Some(label))
    }

    pub fn exit_tasks(&self) -> Vec<usize> {
        (0..self.tasks.len())
            .filter(|&t| self.succ[t].is_empty())
            .collect()
    }

    /// Back to raw form, virtual entry included. Feeding the result to
    /// [`add_virtual_entry`] reproduces `self`.
    pub fn to_raw(&self) -> RawDag {
        RawDag {
            procs: self.procs,
            tasks: self
                .tasks
                .iter()
                .zip(&self.labels)
                .map(|(t, &label)| RawTask {
                    label,
                    proc_times: t.proc_times.clone(),
                })
                .collect(),
            edges: self.edges.clone(),
        }
    }
}

/// Kahn's algorithm, lowest ready index first.
fn topological_order(
    n: usize,
    succ: &[Vec<(usize, f64)>],
    pred: &[Vec<(usize, f64)>],
) -> Vec<usize> {
    let mut indeg: Vec<usize> = pred.iter().map(Vec::len).collect();
    let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(u) = ready.pop_first() {
        order.push(u);
        for &(v, _) in &succ[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                ready.insert(v);
            }
        }
    }
    debug_assert_eq!(order.len(), n, "validated graph must be acyclic");
    order
}
