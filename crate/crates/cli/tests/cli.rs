use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use clonesched::report::RunReport;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clonesched"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn five() -> (String, String) {
    (
        fixture("five.dag").display().to_string(),
        fixture("duo.platform").display().to_string(),
    )
}

#[test]
fn schedule_fixture_makespans() {
    let (dag, pf) = five();
    let o = run(&[
        "schedule",
        &dag,
        &pf,
        "--antibody",
        "0,0,1,0,1",
        "--sns",
        "off",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).ends_with("makespan 15\n"));
    assert!(stdout(&o).contains("sched 3 1 10 12\n"));

    let o = run(&["schedule", &dag, &pf, "--antibody", "0,0,0,0,0"]);
    assert!(stdout(&o).ends_with("makespan 14\n"));
}

#[test]
fn schedule_rejects_bad_cells() {
    let (dag, pf) = five();
    let o = run(&["schedule", &dag, &pf, "--antibody", "0,0,2,0,1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("cell 2"), "{}", stderr(&o));

    let o = run(&["schedule", &dag, &pf, "--antibody", "0,1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn gap_filling_fixture() {
    let dag = fixture("gap.dag");
    let pf = fixture("duo.platform");
    let plain = run(&[
        "schedule",
        p(&dag),
        p(&pf),
        "--antibody",
        "0,1,1,1,1",
        "--sns",
        "off",
    ]);
    let filled = run(&[
        "schedule",
        p(&dag),
        p(&pf),
        "--antibody",
        "0,1,1,1,1",
        "--sns",
        "on",
    ]);
    assert!(stdout(&plain).ends_with("makespan 17\n"));
    assert!(stdout(&filled).contains("sched 4 1 5 8\n"));
    assert!(stdout(&filled).ends_with("makespan 14\n"));
}

#[test]
fn gen_gaussian_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.dag");
    let b = dir.path().join("b.dag");
    for out in [&a, &b] {
        let o = run(&["gen", "gaussian", "--n", "5", "--seed", "7", "-o", p(out)]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("task ")).count(), 14);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let o = run(&["validate", p(&a)]);
    assert!(stdout(&o).starts_with("ok: 14 tasks"), "{}", stdout(&o));

    let other = run(&["gen", "gaussian", "--n", "5", "--seed", "8"]);
    assert_ne!(stdout(&other), text);
}

#[test]
fn gen_minimal_layered() {
    let o = run(&[
        "gen",
        "random-layered",
        "--layers",
        "1",
        "--width",
        "1",
        "--procs",
        "3",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("task ")).count(), 1);
    assert!(text.starts_with("procs 3\n"));

    let o = run(&["gen", "random-layered", "--layers", "0", "--width", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn validate_reports_problems() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("cycle.dag");
    fs::write(
        &bad,
        "procs 1\ntask 1 1\ntask 2 1\ntask 3 0\nedge 1 2 1\nedge 2 1 1\nedge 1 3 1\n",
    )
    .unwrap();
    let o = run(&["validate", p(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("cycle detected: 1 -> 2 -> 1"), "{err}");
    assert!(err.contains("task 3: processing time is zero"), "{err}");

    let syntax = dir.path().join("syntax.dag");
    fs::write(&syntax, "procs 2\ntask 1 1\n").unwrap();
    let o = run(&["validate", p(&syntax)]);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let missing = run(&["validate", "/nonexistent/x.dag"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(stderr(&missing).contains("/nonexistent/x.dag"));

    let (dag, _) = five();
    let three = dir.path().join("three.platform");
    fs::write(&three, "procs 3\ncomm uniform 1\n").unwrap();
    let o = run(&["validate", &dag, "--platform", p(&three)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn oracle_counts_and_refuses() {
    let (dag, pf) = five();
    let o = run(&["oracle", &dag, &pf]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("enumerated 32\n"));

    let o = run(&["oracle", &dag, &pf, "--limit", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("refusing"), "{}", stderr(&o));

    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.dag");
    let onep = dir.path().join("one.platform");
    fs::write(&one, "procs 1\ntask 1 3\ntask 2 4\nedge 1 2 9\n").unwrap();
    fs::write(&onep, "procs 1\n").unwrap();
    let o = run(&["oracle", p(&one), p(&onep)]);
    assert!(
        stdout(&o).contains("makespan 7\n"),
        "{}{}",
        stdout(&o),
        stderr(&o)
    );
    assert!(stdout(&o).contains("enumerated 1\n"));
}

fn oracle_makespan(dag: &str, pf: &str) -> String {
    let o = run(&["oracle", dag, pf]);
    stdout(&o).lines().next().unwrap().to_string()
}

fn without_wall_time(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with("wall_time_s"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn optimize_reaches_oracle_and_is_reproducible() {
    let (dag, pf) = five();
    let cfg = fixture("small.cfg");
    let a = run(&["optimize", &dag, &pf, "--config", p(&cfg), "--seed", "1"]);
    assert!(a.status.success(), "{}", stderr(&a));
    let text = stdout(&a);
    let best = text.lines().last().unwrap();
    assert_eq!(best, oracle_makespan(&dag, &pf));

    let b = run(&["optimize", &dag, &pf, "--config", p(&cfg), "--seed", "1"]);
    assert_eq!(without_wall_time(&text), without_wall_time(&stdout(&b)));
}

#[test]
fn optimize_threads_do_not_change_results() {
    let (dag, pf) = five();
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for threads in ["1", "8"] {
        let json = dir.path().join(format!("r{threads}.json"));
        let o = run(&[
            "optimize",
            &dag,
            &pf,
            "-K",
            "20",
            "--popsize",
            "30",
            "--clones",
            "5",
            "--seed",
            "9",
            "--threads",
            threads,
            "--json",
            p(&json),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        let mut r = RunReport::from_json(&fs::read_to_string(&json).unwrap()).unwrap();
        r.wall_time_s = 0.0;
        reports.push(r);
    }
    assert_eq!(reports[0], reports[1]);
    assert_eq!(reports[0].history.best.len(), 20);
}

#[test]
fn optimize_rejects_bad_config() {
    let (dag, pf) = five();
    let o = run(&["optimize", &dag, &pf, "-K", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("iteration"), "{}", stderr(&o));

    let o = run(&["optimize", &dag, &pf, "--aff", "2"]);
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["optimize", &dag]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn svg_gantt_is_well_formed() {
    let (dag, pf) = five();
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("g.svg");
    let o = run(&[
        "schedule",
        &dag,
        &pf,
        "--antibody",
        "0,0,1,0,1",
        "--sns",
        "off",
        "--gantt",
        "svg",
        "--gantt-out",
        p(&svg),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&svg).unwrap();
    let doc = roxmltree::Document::parse(&text).expect("well-formed XML");
    let bars: Vec<_> = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("task"))
        .collect();
    assert_eq!(bars.len(), 5);

    let expected = [
        (1, 0.0, 2.0),
        (2, 2.0, 5.0),
        (3, 10.0, 12.0),
        (4, 5.0, 7.0),
        (5, 14.0, 15.0),
    ];
    let scale = clonesched::gantt::svg_scale(15.0);
    for (bar, (task, ast, aft)) in bars.iter().zip(expected) {
        assert_eq!(bar.attribute("data-task"), Some(task.to_string().as_str()));
        assert_eq!(
            bar.attribute("data-ast"),
            Some(format!("{ast:.3}").as_str())
        );
        assert_eq!(
            bar.attribute("data-aft"),
            Some(format!("{aft:.3}").as_str())
        );
        let x: f64 = bar.attribute("x").unwrap().parse().unwrap();
        let w: f64 = bar.attribute("width").unwrap().parse().unwrap();
        assert!(((x - 60.0) / scale - ast).abs() < 5e-4);
        assert!((w / scale - (aft - ast)).abs() < 5e-4);
    }
}

#[test]
fn text_gantt_to_stdout() {
    let (dag, pf) = five();
    let o = run(&[
        "schedule",
        &dag,
        &pf,
        "--antibody",
        "0,0,1,0,1",
        "--gantt",
        "text",
    ]);
    let text = stdout(&o);
    assert!(text.contains("\nP0  |[1"), "{text}");
    assert!(text.contains("P1: 3[10, 12) 5[14, 15)"));
}

#[test]
fn bench_suite_rows() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("bench.json");
    let o = run(&["bench", p(&fixture("tiny.bench")), "--json", p(&json)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("five 5 2 4 "));
    let report: clonesched::bench::BenchReport =
        serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    for row in &report.rows {
        assert!(row.ais_min <= row.greedy, "{row:?}");
        assert_eq!(row.oracle, Some(row.ais_min));
        assert_eq!(row.seeds, vec![1, 2, 3, 4]);
    }
}

#[test]
fn bench_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.bench");
    fs::write(&empty, "# nothing here\n").unwrap();
    let o = run(&["bench", p(&empty)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1);

    let missing = dir.path().join("missing.bench");
    fs::write(&missing, "instance lost nowhere.dag duo.platform\n").unwrap();
    let o = run(&["bench", p(&missing)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("nowhere.dag"), "{}", stderr(&o));
    assert!(stderr(&o).contains("lost"));
}
