//! Solution-dependent b-levels and ranks.
//!
//! The b-level of a task is the longest path from it to an exit task, where
//! each task on the path costs its processing time on the processor the
//! antibody assigns it to, and each edge costs `weight × rate` between the
//! two assigned processors. The rank of a task is the sum of the b-levels of
//! its immediate successors; exit tasks have rank 0.

use alloc::vec;
use alloc::vec::Vec;

use super::Antibody;
use crate::graph::TaskGraph;
use crate::platform::Platform;
use crate::Time;

/// b-levels and ranks of every task, indexed by graph index (`T_0` included).
#[derive(Debug, Clone, PartialEq)]
pub struct LevelTable {
    pub b_level: Vec<Time>,
    pub rank: Vec<Time>,
}

impl LevelTable {
    pub fn compute(g: &TaskGraph, pf: &Platform, a: &Antibody) -> LevelTable {
        let b_level = compute_b_levels(g, pf, a);
        let rank = compute_ranks(g, &b_level);
        LevelTable { b_level, rank }
    }
}

pub fn compute_b_levels(g: &TaskGraph, pf: &Platform, a: &Antibody) -> Vec<Time> {
    let mut b = vec![0.0; g.task_count()];
    for &t in g.topo_order().iter().rev() {
        let p = a.proc_of(t);
        let tail = g
            .successors(t)
            .iter()
            .map(|&(s, w)| w * pf.rate(p, a.proc_of(s)) + b[s])
            .fold(0.0, f64::max);
        b[t] = g.proc_time(t, p) + tail;
    }
    b
}

pub fn compute_ranks(g: &TaskGraph, b_level: &[Time]) -> Vec<Time> {
    (0..g.task_count())
        .map(|t| g.successors(t).iter().map(|&(s, _)| b_level[s]).sum())
        .collect()
}
