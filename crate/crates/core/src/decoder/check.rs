//! Independent validity check of a finished schedule. Works only from the
//! schedule entries, never from decoder internals.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{Antibody, Schedule};
use crate::graph::TaskGraph;
use crate::platform::Platform;
use crate::{Time, TIME_EPS};

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EntryCount {
        expected: usize,
        found: usize,
    },
    WrongTask {
        slot: usize,
        task: usize,
    },
    WrongProcessor {
        task: usize,
        expected: usize,
        found: usize,
    },
    NegativeStart {
        task: usize,
        start: Time,
    },
    Duration {
        task: usize,
        expected: Time,
        found: Time,
    },
    Overlap {
        proc: usize,
        first: usize,
        second: usize,
    },
    Precedence {
        src: usize,
        dst: usize,
        earliest: Time,
        start: Time,
    },
    OrderMismatch {
        proc: usize,
    },
    Makespan {
        expected: Time,
        found: Time,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EntryCount { expected, found } => {
                write!(f, "{found} entries for {expected} real tasks")
            }
            Violation::WrongTask { slot, task } => write!(f, "slot {slot} holds task {task}"),
            Violation::WrongProcessor {
                task,
                expected,
                found,
            } => write!(f, "task {task} on processor {found}, assigned {expected}"),
            Violation::NegativeStart { task, start } => {
                write!(f, "task {task} starts at {start}")
            }
            Violation::Duration {
                task,
                expected,
                found,
            } => write!(
                f,
                "task {task} runs for {found}, processing time is {expected}"
            ),
            Violation::Overlap {
                proc,
                first,
                second,
            } => write!(f, "tasks {first} and {second} overlap on processor {proc}"),
            Violation::Precedence {
                src,
                dst,
                earliest,
                start,
            } => write!(
                f,
                "task {dst} starts at {start} before data from {src} arrives at {earliest}"
            ),
            Violation::OrderMismatch { proc } => {
                write!(f, "processor {proc} sequence disagrees with entries")
            }
            Violation::Makespan { expected, found } => {
                write!(f, "makespan {found}, latest finish is {expected}")
            }
        }
    }
}

/// All violations of the schedule invariants, at absolute tolerance
/// [`TIME_EPS`]:
///
/// * one entry per real task, on the processor the antibody assigns;
/// * `finish = start + processing time`, `start >= 0`;
/// * non-overlapping intervals per processor, listed in start order;
/// * `start(dst) >= finish(src) + weight × rate` for every edge;
/// * makespan equal to the latest finish.
pub fn verify(g: &TaskGraph, pf: &Platform, a: &Antibody, s: &Schedule) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = g.real_task_count();
    let entries = s.entries();
    if entries.len() != n {
        out.push(Violation::EntryCount {
            expected: n,
            found: entries.len(),
        });
        return out;
    }

    for (slot, e) in entries.iter().enumerate() {
        if e.task != slot + 1 {
            out.push(Violation::WrongTask { slot, task: e.task });
            return out;
        }
        let assigned = a.cells()[slot];
        if e.proc != assigned {
            out.push(Violation::WrongProcessor {
                task: e.task,
                expected: assigned,
                found: e.proc,
            });
            continue;
        }
        if e.start < -TIME_EPS {
            out.push(Violation::NegativeStart {
                task: e.task,
                start: e.start,
            });
        }
        let pt = g.proc_time(e.task, e.proc);
        if (e.finish - e.start - pt).abs() > TIME_EPS {
            out.push(Violation::Duration {
                task: e.task,
                expected: pt,
                found: e.finish - e.start,
            });
        }
    }

    let mut listed = vec![false; n + 1];
    for (p, seq) in s.order().iter().enumerate() {
        let mut consistent = seq.iter().all(|&t| {
            (1..=n).contains(&t)
                && entries[t - 1].proc == p
                && !core::mem::replace(&mut listed[t], true)
        });
        if consistent {
            for pair in seq.windows(2) {
                let (x, y) = (&entries[pair[0] - 1], &entries[pair[1] - 1]);
                if y.start + TIME_EPS < x.start {
                    consistent = false;
                } else if x.finish > y.start + TIME_EPS {
                    out.push(Violation::Overlap {
                        proc: p,
                        first: x.task,
                        second: y.task,
                    });
                }
            }
        }
        if !consistent {
            out.push(Violation::OrderMismatch { proc: p });
        }
    }
    if s.order().len() != pf.procs() || listed[1..].iter().any(|&l| !l) {
        out.push(Violation::OrderMismatch {
            proc: s.order().len(),
        });
    }

    for edge in g.edges() {
        if edge.src == 0 {
            continue;
        }
        let (src, dst) = (&entries[edge.src - 1], &entries[edge.dst - 1]);
        let earliest = src.finish + edge.weight * pf.rate(src.proc, dst.proc);
        if dst.start + TIME_EPS < earliest {
            out.push(Violation::Precedence {
                src: edge.src,
                dst: edge.dst,
                earliest,
                start: dst.start,
            });
        }
    }

    let latest = entries.iter().map(|e| e.finish).fold(0.0, f64::max);
    if (latest - s.makespan()).abs() > TIME_EPS {
        out.push(Violation::Makespan {
            expected: latest,
            found: s.makespan(),
        });
    }
    out
}
