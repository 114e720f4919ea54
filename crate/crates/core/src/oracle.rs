//! Reference solvers: exhaustive search over all assignments and a greedy
//! list-scheduling baseline.

use alloc::vec;
use alloc::vec::Vec;

use crate::decoder::{decode, decode_makespan, Antibody, Schedule, ScheduleEntry};
use crate::graph::TaskGraph;
use crate::platform::Platform;
use crate::{Time, TIME_EPS};

/// Default cap on the number of assignments [`exhaustive_best`] will decode.
pub const DEFAULT_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{procs}^{tasks} assignments exceed the limit of {limit}")]
    SearchSpaceTooLarge {
        procs: usize,
        tasks: usize,
        limit: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// Lexicographically smallest optimal assignment.
    pub best: Antibody,
    pub makespan: Time,
    /// Number of assignments decoded.
    pub enumerated: u64,
}

/// `procs^tasks`, or `None` when it exceeds `limit`.
pub fn search_space(procs: usize, tasks: usize, limit: u64) -> Option<u64> {
    let mut total: u64 = 1;
    for _ in 0..tasks {
        total = total.checked_mul(procs as u64).filter(|&t| t <= limit)?;
    }
    Some(total)
}

/// Decodes every assignment and returns the best. Enumeration runs in
/// lexicographic order and only a strictly smaller makespan replaces the
/// incumbent, so the smallest optimal antibody is reported.
pub fn exhaustive_best(
    g: &TaskGraph,
    pf: &Platform,
    sns: bool,
    limit: u64,
) -> Result<OracleResult, OracleError> {
    let n = g.real_task_count();
    let p = pf.procs();
    let total = search_space(p, n, limit).ok_or(OracleError::SearchSpaceTooLarge {
        procs: p,
        tasks: n,
        limit,
    })?;

    let mut a = Antibody::uniform(n, 0);
    let mut best = a.clone();
    let mut best_ms = decode_makespan(g, pf, &a, sns);
    for _ in 1..total {
        // odometer increment, last cell fastest
        let cells = a.cells_mut();
        let mut k = n;
        while k > 0 {
            k -= 1;
            cells[k] += 1;
            if cells[k] < p {
                break;
            }
            cells[k] = 0;
        }
        let ms = decode_makespan(g, pf, &a, sns);
        if ms < best_ms {
            best_ms = ms;
            best.cells_mut().copy_from_slice(a.cells());
        }
    }
    Ok(OracleResult {
        best,
        makespan: best_ms,
        enumerated: total,
    })
}

/// Schedule of the exhaustive optimum.
pub fn exhaustive_schedule(
    g: &TaskGraph,
    pf: &Platform,
    sns: bool,
    limit: u64,
) -> Result<(OracleResult, Schedule), OracleError> {
    let r = exhaustive_best(g, pf, sns, limit)?;
    let s = decode(g, pf, &r.best, sns);
    Ok((r, s))
}

/// Static b-levels from mean processing times and the mean communication
/// rate.
pub fn mean_b_levels(g: &TaskGraph, pf: &Platform) -> Vec<Time> {
    let rate = pf.mean_rate();
    let p = pf.procs() as f64;
    let mut b = vec![0.0; g.task_count()];
    for &t in g.topo_order().iter().rev() {
        let mean_pt = g.tasks()[t].proc_times.iter().sum::<f64>() / p;
        let tail = g
            .successors(t)
            .iter()
            .map(|&(s, w)| w * rate + b[s])
            .fold(0.0, f64::max);
        b[t] = mean_pt + tail;
    }
    b
}

/// Greedy list scheduler: repeatedly takes the ready task of highest mean
/// b-level (lowest id on ties) and appends it to the processor giving the
/// earliest finish (lowest index on ties). No insertion into idle slots.
pub fn greedy_blevel_baseline(g: &TaskGraph, pf: &Platform) -> Schedule {
    let n = g.task_count();
    let procs = pf.procs();
    let b = mean_b_levels(g, pf);
    let mut proc_of = vec![0usize; n];
    let mut finish = vec![0.0; n];
    let mut free_at = vec![0.0; procs];
    let mut pending: Vec<usize> = (0..n).map(|t| g.predecessors(t).len()).collect();
    let mut ready: Vec<usize> = g.successors(0).iter().map(|&(s, _)| s).collect();
    for &s in &ready {
        pending[s] -= 1;
    }
    ready.retain(|&s| pending[s] == 0);
    let mut entries = Vec::with_capacity(n.saturating_sub(1));

    while !ready.is_empty() {
        let mut pick = 0;
        for i in 1..ready.len() {
            let (t, c) = (ready[i], ready[pick]);
            if b[t] > b[c] + TIME_EPS || ((b[t] - b[c]).abs() <= TIME_EPS && t < c) {
                pick = i;
            }
        }
        let t = ready.swap_remove(pick);

        let mut choice: Option<(usize, Time, Time)> = None;
        for (p, &free) in free_at.iter().enumerate() {
            let est = g
                .predecessors(t)
                .iter()
                .map(|&(q, w)| finish[q] + w * pf.rate(proc_of[q], p))
                .fold(0.0, f64::max);
            let start = est.max(free);
            let end = start + g.proc_time(t, p);
            if choice.is_none_or(|(_, _, best)| end + TIME_EPS < best) {
                choice = Some((p, start, end));
            }
        }
        let (p, start, end) = choice.expect("at least one processor");
        proc_of[t] = p;
        finish[t] = end;
        free_at[p] = end;
        entries.push(ScheduleEntry {
            task: t,
            proc: p,
            start,
            finish: end,
        });

        for &(s, _) in g.successors(t) {
            pending[s] -= 1;
            if pending[s] == 0 {
                ready.push(s);
            }
        }
    }
    entries.sort_by_key(|e| e.task);
    Schedule::from_entries(procs, entries)
}
