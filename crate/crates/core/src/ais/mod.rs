//! Hybrid heuristic artificial immune system.
//!
//! Each iteration runs three phases over a population of antibodies:
//!
//! 1. **Clonal selection.** Every member is cloned `clones` times, each clone
//!    gets one swap mutation and is decoded. Fitness is min-max normalized
//!    makespan within the group (member plus its clones) and the fittest
//!    (lowest) candidate replaces the member.
//! 2. **Immune-remove.** The `⌈B · population⌉` best members are elites. Any
//!    non-elite closer than the affinity threshold to an elite is removed.
//! 3. **Refill.** Fresh random antibodies restore the population size.
//!
//! The best antibody ever decoded is returned together with its schedule.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::decoder::{decode, decode_makespan, Antibody, Schedule};
use crate::exec::{Executor, Serial};
use crate::graph::TaskGraph;
use crate::platform::Platform;
use crate::rng::{substream, Phase};
use crate::Time;

mod config;
pub mod operators;

pub use config::{ConfigError, OptimizerConfig};
pub use operators::{
    affinity, fitness_normalize, hamming_distance, mutate_swap, mutate_swap_at, OperatorError,
};

/// An antibody with its decoded makespan.
#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub antibody: Antibody,
    pub makespan: Time,
}

impl Member {
    pub fn evaluate(g: &TaskGraph, pf: &Platform, antibody: Antibody, sns: bool) -> Member {
        let makespan = decode_makespan(g, pf, &antibody, sns);
        Member { antibody, makespan }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub members: Vec<Member>,
    /// Best member observed so far in the run.
    pub best: Member,
}

impl Population {
    /// Records a candidate; only a strictly smaller makespan replaces the
    /// current best, so the earliest-found optimum is kept.
    pub fn observe(&mut self, m: &Member) {
        if m.makespan < self.best.makespan {
            self.best = m.clone();
        }
    }

    pub fn mean_makespan(&self) -> Time {
        self.members.iter().map(|m| m.makespan).sum::<f64>() / self.members.len() as f64
    }

    /// Mean affinity over all unordered member pairs.
    pub fn diversity(&self) -> f64 {
        let n = self.members.len();
        if n < 2 {
            return 0.0;
        }
        let mut total = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                total += affinity(&self.members[i].antibody, &self.members[j].antibody)
                    .expect("population antibodies share one length");
            }
        }
        total / (n * (n - 1) / 2) as f64
    }
}

fn random_antibody<R: Rng + ?Sized>(len: usize, procs: usize, rng: &mut R) -> Antibody {
    Antibody::new((0..len).map(|_| rng.gen_range(0..procs)).collect())
}

/// `cfg.population` uniform random antibodies, decoded.
pub fn init_population(g: &TaskGraph, pf: &Platform, cfg: &OptimizerConfig) -> Population {
    let mut rng = substream(cfg.seed, Phase::Init, 0, 0);
    let members: Vec<Member> = (0..cfg.population)
        .map(|_| {
            let a = random_antibody(g.real_task_count(), pf.procs(), &mut rng);
            Member::evaluate(g, pf, a, cfg.sns)
        })
        .collect();
    let mut best = members[0].clone();
    for m in &members[1..] {
        if m.makespan < best.makespan {
            best = m.clone();
        }
    }
    Population { members, best }
}

/// Clones `member` `cfg.clones` times, mutates and decodes every clone, and
/// returns the group member of lowest normalized fitness. The original comes
/// first in the group, so it survives ties.
pub fn clonal_step<R: Rng + ?Sized>(
    member: &Member,
    g: &TaskGraph,
    pf: &Platform,
    cfg: &OptimizerConfig,
    rng: &mut R,
) -> Member {
    let mut group = Vec::with_capacity(cfg.clones + 1);
    group.push(member.clone());
    for _ in 0..cfg.clones {
        let clone = mutate_swap(&member.antibody, rng);
        group.push(Member::evaluate(g, pf, clone, cfg.sns));
    }
    let makespans: Vec<Time> = group.iter().map(|m| m.makespan).collect();
    let fitness = fitness_normalize(&makespans).expect("group holds the original");
    let mut best = 0;
    for (i, &f) in fitness.iter().enumerate().skip(1) {
        if f < fitness[best] {
            best = i;
        }
    }
    group.swap_remove(best)
}

/// Keeps the `cfg.elite_count()` best members (lower index on ties) and
/// every other member whose affinity to all elites is at least
/// `cfg.affinity_threshold`. Survivors keep their relative order.
pub fn immune_remove(members: Vec<Member>, cfg: &OptimizerConfig) -> Vec<Member> {
    let n = members.len();
    let mut ranked: Vec<usize> = (0..n).collect();
    ranked.sort_by(|&a, &b| {
        members[a]
            .makespan
            .total_cmp(&members[b].makespan)
            .then(a.cmp(&b))
    });
    let elites = &ranked[..cfg.elite_count().min(n)];
    let mut elite = vec![false; n];
    for &e in elites {
        elite[e] = true;
    }
    let mut removed = vec![false; n];
    for &e in elites {
        for j in 0..n {
            if elite[j] || removed[j] {
                continue;
            }
            let aff = affinity(&members[e].antibody, &members[j].antibody)
                .expect("population antibodies share one length");
            if aff < cfg.affinity_threshold {
                removed[j] = true;
            }
        }
    }
    members
        .into_iter()
        .zip(removed)
        .filter_map(|(m, r)| (!r).then_some(m))
        .collect()
}

/// Appends decoded random antibodies until the population is full again.
pub fn refill_random<R: Rng + ?Sized>(
    pop: &mut Population,
    g: &TaskGraph,
    pf: &Platform,
    cfg: &OptimizerConfig,
    rng: &mut R,
) {
    while pop.members.len() < cfg.population {
        let a = random_antibody(g.real_task_count(), pf.procs(), rng);
        let m = Member::evaluate(g, pf, a, cfg.sns);
        pop.observe(&m);
        pop.members.push(m);
    }
}

/// Per-iteration trace of a run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunHistory {
    /// Best makespan found up to and including each iteration.
    pub best: Vec<Time>,
    /// Mean population makespan at the end of each iteration.
    pub mean: Vec<Time>,
    /// Mean pairwise affinity at the end of each iteration.
    pub diversity: Vec<f64>,
    /// Number of antibody decodes performed.
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeResult {
    pub best: Antibody,
    pub schedule: Schedule,
    pub history: RunHistory,
}

impl OptimizeResult {
    pub fn makespan(&self) -> Time {
        self.schedule.makespan()
    }
}

/// Runs the optimizer on the calling thread.
pub fn optimize(
    g: &TaskGraph,
    pf: &Platform,
    cfg: &OptimizerConfig,
) -> Result<OptimizeResult, ConfigError> {
    optimize_with(g, pf, cfg, &Serial)
}

/// Runs the optimizer, evaluating clonal groups through `exec`. The result
/// is independent of the executor.
pub fn optimize_with<E: Executor>(
    g: &TaskGraph,
    pf: &Platform,
    cfg: &OptimizerConfig,
    exec: &E,
) -> Result<OptimizeResult, ConfigError> {
    cfg.validate()?;
    let mut pop = init_population(g, pf, cfg);
    let mut history = RunHistory {
        evaluations: cfg.population as u64,
        ..RunHistory::default()
    };

    for iteration in 0..cfg.iterations {
        let it = iteration as u64;
        let improved = exec.map(&pop.members, |i, m| {
            let mut rng = substream(cfg.seed, Phase::Clone, it, i as u64);
            clonal_step(m, g, pf, cfg, &mut rng)
        });
        history.evaluations += (pop.members.len() * cfg.clones) as u64;
        for m in &improved {
            pop.observe(m);
        }

        pop.members = immune_remove(improved, cfg);
        let before = pop.members.len();
        let mut rng = substream(cfg.seed, Phase::Refill, it, 0);
        refill_random(&mut pop, g, pf, cfg, &mut rng);
        history.evaluations += (pop.members.len() - before) as u64;

        history.best.push(pop.best.makespan);
        history.mean.push(pop.mean_makespan());
        history.diversity.push(pop.diversity());
    }

    let schedule = decode(g, pf, &pop.best.antibody, cfg.sns);
    debug_assert_eq!(schedule.makespan(), pop.best.makespan);
    Ok(OptimizeResult {
        best: pop.best.antibody,
        schedule,
        history,
    })
}
