//! Antibody decoding.
//!
//! An [`Antibody`] fixes only *where* each real task runs. [`decode`] decides
//! *when*: it computes solution-dependent b-levels and ranks
//! ([`levels`]), then runs an event-driven list schedule in which every
//! processor serves its ready tasks by descending rank. With `sns` enabled,
//! idle gaps left by that schedule are filled with lower-ranked waiting tasks
//! that fit entirely inside the gap ([`sns`]).
//!
//! The virtual entry task `T_0` is pinned to processor 0 and finishes at time
//! 0; it never appears in a [`Schedule`].

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::TaskGraph;
use crate::platform::Platform;
use crate::{Time, TIME_EPS};

pub mod check;
pub mod levels;
pub mod sns;

pub use check::{verify, Violation};
pub use levels::{compute_b_levels, compute_ranks, LevelTable};
pub use sns::{sns_pick, Gap, Waiting};

/// Processor assignment of the real tasks: cell `k` holds the processor of
/// task `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Antibody(Vec<usize>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AntibodyError {
    #[error("antibody has {found} cells, graph has {expected} real tasks")]
    LengthMismatch { expected: usize, found: usize },
    #[error("cell {cell} holds processor {value}, platform has {procs} processors")]
    CellOutOfRange {
        cell: usize,
        value: usize,
        procs: usize,
    },
}

impl Antibody {
    pub fn new(cells: Vec<usize>) -> Self {
        Antibody(cells)
    }

    /// All real tasks on one processor.
    pub fn uniform(len: usize, proc: usize) -> Self {
        Antibody(vec![proc; len])
    }

    pub fn cells(&self) -> &[usize] {
        &self.0
    }

    pub fn cells_mut(&mut self) -> &mut [usize] {
        &mut self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_cells(self) -> Vec<usize> {
        self.0
    }

    /// Processor of `task` (graph index, `T_0` included).
    #[inline]
    pub fn proc_of(&self, task: usize) -> usize {
        if task == 0 {
            0
        } else {
            self.0[task - 1]
        }
    }

    pub fn check(&self, g: &TaskGraph, pf: &Platform) -> Result<(), AntibodyError> {
        if self.0.len() != g.real_task_count() {
            return Err(AntibodyError::LengthMismatch {
                expected: g.real_task_count(),
                found: self.0.len(),
            });
        }
        match self.0.iter().position(|&v| v >= pf.procs()) {
            Some(cell) => Err(AntibodyError::CellOutOfRange {
                cell,
                value: self.0[cell],
                procs: pf.procs(),
            }),
            None => Ok(()),
        }
    }
}

/// Placement and timing of one real task.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleEntry {
    pub task: usize,
    pub proc: usize,
    pub start: Time,
    pub finish: Time,
}

/// Timed schedule of all real tasks.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    /// Indexed by `task - 1`.
    entries: Vec<ScheduleEntry>,
    /// Execution sequence per processor.
    order: Vec<Vec<usize>>,
    makespan: Time,
}

impl Schedule {
    /// Builds a schedule from one entry per real task; `entries[k].task` must
    /// be `k + 1`. Processor sequences are ordered by start time.
    pub fn from_entries(procs: usize, entries: Vec<ScheduleEntry>) -> Schedule {
        let mut order = vec![Vec::new(); procs];
        for e in &entries {
            order[e.proc].push(e.task);
        }
        for seq in &mut order {
            seq.sort_by(|&a, &b| {
                let (ea, eb) = (&entries[a - 1], &entries[b - 1]);
                ea.start
                    .total_cmp(&eb.start)
                    .then(ea.finish.total_cmp(&eb.finish))
                    .then(a.cmp(&b))
            });
        }
        Schedule::with_order(entries, order)
    }

    fn with_order(entries: Vec<ScheduleEntry>, order: Vec<Vec<usize>>) -> Schedule {
        let makespan = entries.iter().map(|e| e.finish).fold(0.0, f64::max);
        Schedule {
            entries,
            order,
            makespan,
        }
    }

    pub fn entries(&self) -> &[ScheduleEntry] {
        &self.entries
    }

    /// Entry of a real task (graph index `>= 1`).
    pub fn entry(&self, task: usize) -> &ScheduleEntry {
        &self.entries[task - 1]
    }

    pub fn order(&self) -> &[Vec<usize>] {
        &self.order
    }

    pub fn makespan(&self) -> Time {
        self.makespan
    }

    /// Finish time of the last task on each processor (0 when idle).
    pub fn completion_times(&self) -> Vec<Time> {
        self.order
            .iter()
            .map(|seq| seq.last().map_or(0.0, |&t| self.entry(t).finish))
            .collect()
    }

    /// Processor assignment the schedule realizes.
    pub fn assignment(&self) -> Antibody {
        Antibody::new(self.entries.iter().map(|e| e.proc).collect())
    }
}

/// Latest finish time over all entries; 0 for an empty schedule.
pub fn makespan(s: &Schedule) -> Time {
    s.makespan()
}

/// `a` outranks `b`: strictly higher rank, or an equal rank and a lower id.
#[inline]
pub(crate) fn outranks(rank_a: f64, id_a: usize, rank_b: f64, id_b: usize) -> bool {
    if rank_a > rank_b + TIME_EPS {
        true
    } else if rank_b > rank_a + TIME_EPS {
        false
    } else {
        id_a < id_b
    }
}

/// Times and per-processor sequences for every task, `T_0` included.
#[derive(Debug, Clone)]
pub(crate) struct Plan {
    pub order: Vec<Vec<usize>>,
    pub start: Vec<Time>,
    pub finish: Vec<Time>,
}

impl Plan {
    fn into_schedule(self, a: &Antibody) -> Schedule {
        let entries = (1..self.start.len())
            .map(|t| ScheduleEntry {
                task: t,
                proc: a.proc_of(t),
                start: self.start[t],
                finish: self.finish[t],
            })
            .collect();
        Schedule::with_order(entries, self.order)
    }
}

/// Decodes `a` into a timed schedule.
///
/// `a` must satisfy [`Antibody::check`] for `(g, pf)`; the function panics on
/// out-of-range cells.
pub fn decode(g: &TaskGraph, pf: &Platform, a: &Antibody, sns: bool) -> Schedule {
    debug_assert!(a.check(g, pf).is_ok());
    let levels = LevelTable::compute(g, pf, a);
    let mut plan = simulate(g, pf, a, &levels.rank);
    if sns {
        sns::fill_gaps(g, pf, a, &levels.rank, &mut plan);
    }
    plan.into_schedule(a)
}

/// Makespan of [`decode`] without materializing the schedule.
pub fn decode_makespan(g: &TaskGraph, pf: &Platform, a: &Antibody, sns: bool) -> Time {
    let levels = LevelTable::compute(g, pf, a);
    let mut plan = simulate(g, pf, a, &levels.rank);
    if sns {
        sns::fill_gaps(g, pf, a, &levels.rank, &mut plan);
    }
    plan.finish.iter().copied().fold(0.0, f64::max)
}

/// Event-driven rank list schedule.
///
/// A task joins the queue of its processor once all predecessors are
/// dispatched (its EST is then known). The processor with the earliest
/// decision time acts next, where the decision time is when it is free and
/// at least one queued task has all predecessors finished. It takes the
/// highest-ranked such task and starts it at `max(EST, free time)`.
pub(crate) fn simulate(g: &TaskGraph, pf: &Platform, a: &Antibody, rank: &[f64]) -> Plan {
    let n = g.task_count();
    let np = pf.procs();
    let mut remaining: Vec<usize> = (0..n).map(|t| g.predecessors(t).len()).collect();
    let mut est = vec![0.0; n];
    let mut preds_done = vec![0.0; n];
    let mut start = vec![0.0; n];
    let mut finish = vec![0.0; n];
    let mut queues: Vec<Vec<usize>> = vec![Vec::new(); np];
    let mut free_at = vec![0.0f64; np];
    let mut order = vec![Vec::new(); np];

    let mut release = |t: usize,
                       finish_t: Time,
                       est: &mut [Time],
                       preds_done: &mut [Time],
                       queues: &mut [Vec<usize>]| {
        let from = a.proc_of(t);
        for &(s, w) in g.successors(t) {
            let to = a.proc_of(s);
            est[s] = est[s].max(finish_t + w * pf.rate(from, to));
            preds_done[s] = preds_done[s].max(finish_t);
            remaining[s] -= 1;
            if remaining[s] == 0 {
                queues[to].push(s);
            }
        }
    };

    if n > 0 {
        release(0, 0.0, &mut est, &mut preds_done, &mut queues);
    }

    for _ in 1..n {
        let mut chosen: Option<(usize, Time)> = None;
        for (p, queue) in queues.iter().enumerate() {
            if queue.is_empty() {
                continue;
            }
            let earliest = queue
                .iter()
                .map(|&t| preds_done[t])
                .fold(f64::INFINITY, f64::min);
            let decide_at = free_at[p].max(earliest);
            if chosen.is_none_or(|(_, d)| decide_at < d - TIME_EPS) {
                chosen = Some((p, decide_at));
            }
        }
        let (p, decide_at) = chosen.expect("acyclic graph always has a queued task");

        let queue = &mut queues[p];
        let mut best: Option<usize> = None;
        for (pos, &t) in queue.iter().enumerate() {
            if preds_done[t] > decide_at + TIME_EPS {
                continue;
            }
            if best.is_none_or(|b| outranks(rank[t], t, rank[queue[b]], queue[b])) {
                best = Some(pos);
            }
        }
        let t = queue.swap_remove(best.expect("decision time admits a queued task"));

        start[t] = est[t].max(free_at[p]);
        finish[t] = start[t] + g.proc_time(t, p);
        free_at[p] = finish[t];
        order[p].push(t);
        release(t, finish[t], &mut est, &mut preds_done, &mut queues);
    }

    Plan {
        order,
        start,
        finish,
    }
}
