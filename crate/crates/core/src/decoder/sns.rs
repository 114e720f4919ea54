//! Single neighbourhood search: filling idle gaps.
//!
//! A gap opens on a processor when the next task of its sequence cannot start
//! at the moment the processor becomes free. A waiting task of the same
//! processor, one that comes later in the sequence and whose input data is
//! already available when the gap opens, may run in the gap if its
//! processing time fits before the next task's start. Among the fitting
//! tasks the highest-ranked one wins.
//!
//! Gaps are filled one at a time, earliest gap first, each fill followed by a
//! full retiming. A fill never moves the task after the gap, and leaves every
//! other sequence untouched, so no start or finish time can grow: the
//! makespan with gap filling never exceeds the makespan without it.

use alloc::vec;
use alloc::vec::Vec;

use super::{outranks, Antibody, Plan};
use crate::graph::TaskGraph;
use crate::platform::Platform;
use crate::{Time, TIME_EPS};

/// A ready task competing for a gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waiting {
    pub task: usize,
    pub rank: f64,
    pub proc_time: Time,
}

/// Idle interval `[start, end)` on one processor; `end` is the start of the
/// next task in rank order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gap {
    pub start: Time,
    pub end: Time,
}

impl Gap {
    pub fn len(&self) -> Time {
        self.end - self.start
    }
}

/// Highest-ranked waiting task (lowest id on ties) that fits in `gap`.
pub fn sns_pick(queue: &[Waiting], gap: Gap) -> Option<usize> {
    let mut best: Option<&Waiting> = None;
    for w in queue {
        if gap.start + w.proc_time > gap.end {
            continue;
        }
        if best.is_none_or(|b| outranks(w.rank, w.task, b.rank, b.task)) {
            best = Some(w);
        }
    }
    best.map(|w| w.task)
}

/// Recomputes all times from fixed processor sequences.
///
/// `data_ready[t]` receives the EST of `t` and `start`/`finish` its actual
/// interval, where a task starts once its data is ready and its processor
/// predecessor has finished.
pub(crate) fn retime(
    g: &TaskGraph,
    pf: &Platform,
    a: &Antibody,
    order: &[Vec<usize>],
    data_ready: &mut [Time],
    start: &mut [Time],
    finish: &mut [Time],
) {
    const NONE: usize = usize::MAX;
    let n = g.task_count();
    let mut chain_prev = vec![NONE; n];
    let mut chain_next = vec![NONE; n];
    for seq in order {
        for pair in seq.windows(2) {
            chain_prev[pair[1]] = pair[0];
            chain_next[pair[0]] = pair[1];
        }
    }
    let mut pending: Vec<usize> = (0..n)
        .map(|t| g.predecessors(t).len() + usize::from(chain_prev[t] != NONE))
        .collect();
    data_ready.fill(0.0);

    let mut ready = Vec::with_capacity(n);
    start[0] = 0.0;
    finish[0] = 0.0;
    ready.push(0);
    let mut seen = 0;
    while let Some(t) = ready.pop() {
        seen += 1;
        if t != 0 {
            let prev_done = match chain_prev[t] {
                NONE => 0.0,
                p => finish[p],
            };
            start[t] = data_ready[t].max(prev_done);
            finish[t] = start[t] + g.proc_time(t, a.proc_of(t));
        }
        let from = a.proc_of(t);
        for &(s, w) in g.successors(t) {
            data_ready[s] = data_ready[s].max(finish[t] + w * pf.rate(from, a.proc_of(s)));
            pending[s] -= 1;
            if pending[s] == 0 {
                ready.push(s);
            }
        }
        let next = chain_next[t];
        if next != NONE {
            pending[next] -= 1;
            if pending[next] == 0 {
                ready.push(next);
            }
        }
    }
    assert_eq!(seen, n, "processor sequences contradict precedence");
}

struct Fill {
    at: Time,
    proc: usize,
    slot: usize,
    from: usize,
}

/// Repeatedly fills the earliest fillable gap until none remains.
pub(crate) fn fill_gaps(g: &TaskGraph, pf: &Platform, a: &Antibody, rank: &[f64], plan: &mut Plan) {
    let n = g.task_count();
    let mut data_ready = vec![0.0; n];
    let mut queue: Vec<Waiting> = Vec::new();
    loop {
        retime(
            g,
            pf,
            a,
            &plan.order,
            &mut data_ready,
            &mut plan.start,
            &mut plan.finish,
        );

        let mut fill: Option<Fill> = None;
        for (p, seq) in plan.order.iter().enumerate() {
            let mut free = 0.0;
            for (slot, &next) in seq.iter().enumerate() {
                let gap = Gap {
                    start: free,
                    end: plan.start[next],
                };
                free = plan.finish[next];
                if gap.end <= gap.start {
                    continue;
                }
                if fill.as_ref().is_some_and(|f| gap.start >= f.at - TIME_EPS) {
                    break;
                }
                queue.clear();
                queue.extend(
                    seq[slot + 1..]
                        .iter()
                        .filter(|&&t| data_ready[t] <= gap.start)
                        .map(|&t| Waiting {
                            task: t,
                            rank: rank[t],
                            proc_time: g.proc_time(t, p),
                        }),
                );
                if let Some(task) = sns_pick(&queue, gap) {
                    let from = slot + 1 + seq[slot + 1..].iter().position(|&t| t == task).unwrap();
                    fill = Some(Fill {
                        at: gap.start,
                        proc: p,
                        slot,
                        from,
                    });
                    break;
                }
            }
        }

        match fill {
            Some(Fill {
                proc, slot, from, ..
            }) => {
                let task = plan.order[proc].remove(from);
                plan.order[proc].insert(slot, task);
            }
            None => return,
        }
    }
}
