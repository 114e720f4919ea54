#![allow(dead_code)]

use clonesched_core::graph::{add_virtual_entry, Edge, RawDag, RawTask};
use clonesched_core::{Antibody, Platform, TaskGraph};
use proptest::prelude::*;

/// A random DAG instance: edges only go from lower to higher task index.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: TaskGraph,
    pub platform: Platform,
    pub antibody: Antibody,
}

fn dag(max_tasks: usize, max_procs: usize) -> impl Strategy<Value = RawDag> {
    (1..=max_tasks, 1..=max_procs).prop_flat_map(|(n, p)| {
        let pts = proptest::collection::vec(proptest::collection::vec(1u32..=20, p), n);
        let pairs = n * (n - 1) / 2;
        let edges = proptest::collection::vec((0u32..4, 0u32..=15), pairs);
        (Just(p), pts, edges).prop_map(move |(p, pts, edges)| {
            let tasks = pts
                .into_iter()
                .enumerate()
                .map(|(i, row)| {
                    RawTask::new(i as u64 + 1, row.into_iter().map(f64::from).collect())
                })
                .collect();
            let mut out = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    let (keep, w) = edges[k];
                    k += 1;
                    // roughly one pair in four is connected
                    if keep == 0 {
                        out.push(Edge::new(i, j, f64::from(w)));
                    }
                }
            }
            RawDag {
                procs: p,
                tasks,
                edges: out,
            }
        })
    })
}

fn platform(p: usize) -> impl Strategy<Value = Platform> {
    let pairs = p * (p - 1) / 2;
    (
        proptest::bool::ANY,
        proptest::collection::vec(0u32..=4, pairs),
    )
        .prop_map(move |(uniform, rates)| {
            if uniform || p == 1 {
                Platform::uniform(p, f64::from(rates.first().copied().unwrap_or(1))).unwrap()
            } else {
                let mut list = Vec::new();
                let mut k = 0;
                for i in 0..p {
                    for j in i + 1..p {
                        list.push((i, j, f64::from(rates[k]) * 0.5));
                        k += 1;
                    }
                }
                Platform::from_pairs(p, None, &list).unwrap()
            }
        })
}

pub fn instance(max_tasks: usize, max_procs: usize) -> impl Strategy<Value = Instance> {
    dag(max_tasks, max_procs).prop_flat_map(|raw| {
        let p = raw.procs;
        let n = raw.tasks.len();
        let graph = add_virtual_entry(raw).unwrap();
        (
            Just(graph),
            platform(p),
            proptest::collection::vec(0..p, n).prop_map(Antibody::new),
        )
            .prop_map(|(graph, platform, antibody)| Instance {
                graph,
                platform,
                antibody,
            })
    })
}
