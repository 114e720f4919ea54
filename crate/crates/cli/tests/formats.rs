use clonesched::formats::{
    emit_config, emit_dag, emit_platform, emit_schedule, parse_config, parse_dag, parse_platform,
};
use clonesched_core::graph::generate::{
    gen_gaussian_elimination, gen_random_layered, LayeredParams,
};
use clonesched_core::{decode, Antibody, OptimizerConfig, Platform};
use proptest::prelude::*;

/// Rebuilds the schedule invariants from the emitted text alone.
fn recheck(dag_text: &str, pf: &Platform, sched_text: &str) -> Result<(), String> {
    let g = parse_dag(dag_text).map_err(|e| e.to_string())?;
    let mut rows = std::collections::HashMap::new();
    let mut makespan = None;
    for line in sched_text.lines() {
        let t: Vec<&str> = line.split_whitespace().collect();
        match t[0] {
            "sched" => {
                let id: u64 = t[1].parse().unwrap();
                let vals: (usize, f64, f64) = (
                    t[2].parse().unwrap(),
                    t[3].parse().unwrap(),
                    t[4].parse().unwrap(),
                );
                rows.insert(g.index_of_label(id).unwrap(), vals);
            }
            "makespan" => makespan = Some(t[1].parse::<f64>().unwrap()),
            _ => return Err(format!("unexpected line {line}")),
        }
    }
    if rows.len() != g.real_task_count() {
        return Err("missing tasks".into());
    }
    let mut latest = 0.0f64;
    for (&t, &(p, ast, aft)) in &rows {
        if (aft - ast - g.proc_time(t, p)).abs() > 1e-9 {
            return Err(format!("task {t} duration"));
        }
        for &(q, w) in g.predecessors(t) {
            if q == 0 {
                continue;
            }
            let (pq, _, fq) = rows[&q];
            if ast + 1e-9 < fq + w * pf.rate(pq, p) {
                return Err(format!("edge {q}->{t}"));
            }
        }
        for (&u, &(pu, su, fu)) in &rows {
            if u != t && pu == p && ast < fu - 1e-9 && su < aft - 1e-9 {
                return Err(format!("overlap {t} {u}"));
            }
        }
        latest = latest.max(aft);
    }
    if makespan != Some(latest) {
        return Err("makespan".into());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generated_graphs_round_trip(
        layers in 1usize..6, width in 1usize..5, density in 0.1f64..1.0,
        procs in 1usize..5, seed in any::<u64>(),
    ) {
        let g = gen_random_layered(&LayeredParams {
            layers, width, edge_density: density, procs,
            pt_range: (1, 30), w_range: (0, 12), seed,
        }).unwrap();
        let text = emit_dag(&g);
        let back = parse_dag(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(emit_dag(&back), text);
    }

    #[test]
    fn emitted_schedules_recheck(
        n in 2usize..7, procs in 1usize..4, seed in any::<u64>(),
        cells in proptest::collection::vec(0usize..4, 27), sns in any::<bool>(), rate in 0u32..3,
    ) {
        let g = gen_gaussian_elimination(n, procs, (1, 9), (0, 6), seed).unwrap();
        let pf = Platform::uniform(procs, f64::from(rate) * 0.75).unwrap();
        let a = Antibody::new(cells[..g.real_task_count()].iter().map(|c| c % procs).collect());
        let s = decode(&g, &pf, &a, sns);
        let text = emit_schedule(&g, &s);
        prop_assert_eq!(recheck(&emit_dag(&g), &pf, &text), Ok(()));
    }

    #[test]
    fn platforms_round_trip(procs in 1usize..6, rates in proptest::collection::vec(0u32..50, 15)) {
        let mut pairs = Vec::new();
        let mut k = 0;
        for i in 0..procs {
            for j in i + 1..procs {
                pairs.push((i, j, f64::from(rates[k]) / 8.0));
                k += 1;
            }
        }
        let pf = Platform::from_pairs(procs, None, &pairs).unwrap();
        prop_assert_eq!(parse_platform(&emit_platform(&pf)).unwrap(), pf);
    }

    #[test]
    fn configs_round_trip(
        k in 1usize..500, pop in 2usize..1000, clones in 1usize..80,
        b in 0.01f64..1.0, aff in 0.0f64..1.0, sns in any::<bool>(), seed in any::<u64>(),
    ) {
        let cfg = OptimizerConfig {
            iterations: k, population: pop, clones, selection_rate: b,
            affinity_threshold: aff, sns, seed,
        };
        prop_assert_eq!(parse_config(&emit_config(&cfg)).unwrap(), cfg);
    }
}
