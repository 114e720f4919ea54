//! Deterministic task-graph generators.
//!
//! Processing times and edge weights are integers drawn uniformly from
//! inclusive ranges, so generated instances have exact arithmetic and round
//! trip through text formats unchanged.

use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{add_virtual_entry, Edge, RawDag, RawTask, TaskGraph};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GenError {
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(&'static str),
}

/// Parameters of [`gen_random_layered`].
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredParams {
    pub layers: usize,
    pub width: usize,
    /// Probability that a task is connected to a given task of the next layer.
    pub edge_density: f64,
    pub procs: usize,
    pub pt_range: (u32, u32),
    pub w_range: (u32, u32),
    pub seed: u64,
}

fn check_ranges(procs: usize, pt: (u32, u32), w: (u32, u32)) -> Result<(), GenError> {
    if procs == 0 {
        return Err(GenError::InvalidParameter("procs must be at least 1"));
    }
    if pt.0 > pt.1 || w.0 > w.1 {
        return Err(GenError::InvalidParameter(
            "range lower bound exceeds upper bound",
        ));
    }
    if pt.1 == 0 {
        return Err(GenError::InvalidParameter(
            "processing-time range must admit a positive value",
        ));
    }
    Ok(())
}

fn proc_row(rng: &mut ChaCha8Rng, procs: usize, (lo, hi): (u32, u32)) -> Vec<f64> {
    loop {
        let row: Vec<f64> = (0..procs)
            .map(|_| f64::from(rng.gen_range(lo..=hi)))
            .collect();
        if row.iter().any(|&v| v > 0.0) {
            return row;
        }
    }
}

fn weight(rng: &mut ChaCha8Rng, (lo, hi): (u32, u32)) -> f64 {
    f64::from(rng.gen_range(lo..=hi))
}

/// `layers × width` tasks; each task of layer `l` is connected to each task
/// of layer `l + 1` with probability `edge_density`.
pub fn gen_random_layered(params: &LayeredParams) -> Result<TaskGraph, GenError> {
    let LayeredParams {
        layers,
        width,
        edge_density,
        procs,
        pt_range,
        w_range,
        seed,
    } = *params;
    if layers == 0 || width == 0 {
        return Err(GenError::InvalidParameter(
            "layers and width must be at least 1",
        ));
    }
    if !(edge_density > 0.0 && edge_density <= 1.0) {
        return Err(GenError::InvalidParameter(
            "edge density must lie in (0, 1]",
        ));
    }
    check_ranges(procs, pt_range, w_range)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = layers * width;
    let tasks = (0..count)
        .map(|i| RawTask::new(i as u64 + 1, proc_row(&mut rng, procs, pt_range)))
        .collect();
    let mut edges = Vec::new();
    for layer in 0..layers - 1 {
        for a in 0..width {
            for b in 0..width {
                if rng.gen_bool(edge_density) {
                    let src = layer * width + a;
                    let dst = (layer + 1) * width + b;
                    edges.push(Edge::new(src, dst, weight(&mut rng, w_range)));
                }
            }
        }
    }
    let raw = RawDag {
        procs,
        tasks,
        edges,
    };
    Ok(add_virtual_entry(raw).expect("layered construction is a valid DAG"))
}

/// Gaussian elimination on an `n × n` matrix: for every step `k` in
/// `1..n` there is a pivot task followed by update tasks for columns
/// `k+1..=n`. The pivot of step `k` precedes all of its updates; the update of
/// column `k+1` precedes the next pivot and every other update of column `j`
/// precedes the update of the same column in step `k+1`.
///
/// Yields `n(n+1)/2 - 1` real tasks.
pub fn gen_gaussian_elimination(
    n: usize,
    procs: usize,
    pt_range: (u32, u32),
    w_range: (u32, u32),
    seed: u64,
) -> Result<TaskGraph, GenError> {
    if n < 2 {
        return Err(GenError::InvalidParameter(
            "matrix dimension must be at least 2",
        ));
    }
    check_ranges(procs, pt_range, w_range)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tasks = Vec::new();
    // pivot[k] and update[k][j] hold task indices; steps and columns are 1-based.
    let mut pivot = alloc::vec![usize::MAX; n];
    let mut update = alloc::vec![alloc::vec![usize::MAX; n + 1]; n];
    for k in 1..n {
        pivot[k] = tasks.len();
        tasks.push(RawTask::new(
            tasks.len() as u64 + 1,
            proc_row(&mut rng, procs, pt_range),
        ));
        for slot in &mut update[k][k + 1..=n] {
            *slot = tasks.len();
            tasks.push(RawTask::new(
                tasks.len() as u64 + 1,
                proc_row(&mut rng, procs, pt_range),
            ));
        }
    }

    let mut edges = Vec::new();
    for k in 1..n {
        for &u in &update[k][k + 1..=n] {
            edges.push(Edge::new(pivot[k], u, weight(&mut rng, w_range)));
        }
        if k + 1 < n {
            edges.push(Edge::new(
                update[k][k + 1],
                pivot[k + 1],
                weight(&mut rng, w_range),
            ));
            let (this, next) = (&update[k][k + 2..=n], &update[k + 1][k + 2..=n]);
            for (&src, &dst) in this.iter().zip(next) {
                edges.push(Edge::new(src, dst, weight(&mut rng, w_range)));
            }
        }
    }
    let raw = RawDag {
        procs,
        tasks,
        edges,
    };
    Ok(add_virtual_entry(raw).expect("elimination construction is a valid DAG"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate;
    use alloc::vec;

    fn layered(layers: usize, width: usize, density: f64, seed: u64) -> LayeredParams {
        LayeredParams {
            layers,
            width,
            edge_density: density,
            procs: 3,
            pt_range: (1, 9),
            w_range: (0, 5),
            seed,
        }
    }

    #[test]
    fn minimal_layered_graph() {
        let g = gen_random_layered(&layered(1, 1, 0.5, 3)).unwrap();
        assert_eq!(g.real_task_count(), 1);
        // only the virtual entry edge
        assert_eq!(g.edges().len(), 1);
    }

    #[test]
    fn full_density_connects_adjacent_layers() {
        let g = gen_random_layered(&layered(3, 3, 1.0, 7)).unwrap();
        assert_eq!(g.real_task_count(), 9);
        let real: Vec<_> = g.edges().iter().filter(|e| e.src != 0).collect();
        // two adjacent layer pairs, 3 × 3 each
        assert_eq!(real.len(), 18);
        for e in real {
            let (ls, ld) = ((e.src - 1) / 3, (e.dst - 1) / 3);
            assert_eq!(ld, ls + 1);
        }
        // virtual entry feeds exactly the first layer
        assert_eq!(g.successors(0).len(), 3);
    }

    #[test]
    fn layered_is_deterministic() {
        let a = gen_random_layered(&layered(4, 3, 0.4, 11)).unwrap();
        let b = gen_random_layered(&layered(4, 3, 0.4, 11)).unwrap();
        assert_eq!(a, b);
        let c = gen_random_layered(&layered(4, 3, 0.4, 12)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn layered_rejects_bad_parameters() {
        assert!(gen_random_layered(&layered(0, 1, 0.5, 0)).is_err());
        assert!(gen_random_layered(&layered(1, 1, 0.0, 0)).is_err());
        assert!(gen_random_layered(&layered(1, 1, 1.5, 0)).is_err());
        let mut p = layered(2, 2, 0.5, 0);
        p.pt_range = (5, 2);
        assert!(gen_random_layered(&p).is_err());
        p.pt_range = (0, 0);
        assert!(gen_random_layered(&p).is_err());
    }

    #[test]
    fn samples_stay_in_range() {
        let g = gen_random_layered(&layered(5, 4, 0.6, 5)).unwrap();
        for t in &g.tasks()[1..] {
            assert!(t
                .proc_times
                .iter()
                .all(|&v| (1.0..=9.0).contains(&v) && v.fract() == 0.0));
        }
        for e in g.edges().iter().filter(|e| e.src != 0) {
            assert!((0.0..=5.0).contains(&e.weight));
        }
    }

    #[test]
    fn gaussian_two_by_two() {
        let g = gen_gaussian_elimination(2, 2, (1, 5), (1, 5), 0).unwrap();
        assert_eq!(g.real_task_count(), 2);
        assert_eq!(g.edges().iter().filter(|e| e.src != 0).count(), 1);
    }

    #[test]
    fn gaussian_task_counts() {
        for n in 2..9 {
            let g = gen_gaussian_elimination(n, 2, (1, 5), (1, 5), 1).unwrap();
            assert_eq!(g.real_task_count(), n * (n + 1) / 2 - 1);
            // a single pivot starts the elimination
            assert_eq!(g.successors(0).len(), 1);
            assert!(validate(&g.to_raw()).is_empty());
        }
        assert!(gen_gaussian_elimination(1, 2, (1, 5), (1, 5), 1).is_err());
    }

    #[test]
    fn gaussian_three_by_three_structure() {
        // P1, U12, U13, P2, U23 in generation order (indices 1..=5)
        let g = gen_gaussian_elimination(3, 1, (1, 1), (1, 1), 4).unwrap();
        let mut pairs: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .filter(|e| e.src != 0)
            .map(|e| (e.src, e.dst))
            .collect();
        pairs.sort();
        assert_eq!(pairs, vec![(1, 2), (1, 3), (2, 4), (3, 5), (4, 5)]);
    }

    #[test]
    fn gaussian_is_deterministic() {
        let a = gen_gaussian_elimination(6, 3, (2, 20), (1, 9), 9).unwrap();
        let b = gen_gaussian_elimination(6, 3, (2, 20), (1, 9), 9).unwrap();
        assert_eq!(a, b);
    }
}
