//! Gantt charts: one row per processor, one bar per task spanning
//! `[AST, AFT)`. Idle time stays visible.

use std::fmt::Write as _;

use clonesched_core::{Schedule, TaskGraph};

use crate::formats::task_name;

/// Character chart `width` columns wide, followed by the exact intervals.
///
/// ```text
/// P0  |[1=][2===][4=]................|
/// P1  |....................[3=]....5=|
/// ```
pub fn text_gantt(g: &TaskGraph, s: &Schedule, width: usize) -> String {
    let width = width.max(10);
    let span = s.makespan();
    let scale = if span > 0.0 { width as f64 / span } else { 0.0 };
    let col = |t: f64| ((t * scale).round() as usize).min(width);
    let mut out = String::new();
    for (p, seq) in s.order().iter().enumerate() {
        let mut row = vec!['.'; width];
        for &t in seq {
            let e = s.entry(t);
            let (a, b) = (col(e.start), col(e.finish).max(col(e.start) + 1).min(width));
            if a >= width {
                continue;
            }
            let label = task_name(g, t).to_string();
            let cells = &mut row[a..b];
            cells.fill('=');
            if cells.len() >= label.len() + 2 {
                cells[0] = '[';
                *cells.last_mut().unwrap() = ']';
                for (k, ch) in label.chars().enumerate() {
                    cells[1 + k] = ch;
                }
            } else if cells.len() >= label.len() {
                for (k, ch) in label.chars().enumerate() {
                    cells[k] = ch;
                }
            } else {
                cells.fill('#');
            }
        }
        writeln!(out, "P{p:<3}|{}|", row.into_iter().collect::<String>()).unwrap();
    }
    writeln!(out, "{:>4}0{:>w$}", "", span, w = width + 1).unwrap();
    for (p, seq) in s.order().iter().enumerate() {
        write!(out, "P{p}:").unwrap();
        for &t in seq {
            let e = s.entry(t);
            write!(out, " {}[{}, {})", task_name(g, t), e.start, e.finish).unwrap();
        }
        out.push('\n');
    }
    out
}

const LEFT: f64 = 60.0;
const PLOT_WIDTH: f64 = 800.0;
const ROW: f64 = 32.0;
const BAR: f64 = 22.0;
const TOP: f64 = 30.0;

const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
];

/// Pixels per time unit used by [`svg_gantt`] for a given makespan.
pub fn svg_scale(makespan: f64) -> f64 {
    if makespan > 0.0 {
        PLOT_WIDTH / makespan
    } else {
        1.0
    }
}

/// Standalone SVG document. Each bar is a `rect` carrying `data-task`,
/// `data-proc`, `data-ast` and `data-aft` attributes (times to three
/// decimals); its `x` is `60 + AST · scale` and its width `(AFT − AST) ·
/// scale` with `scale` from [`svg_scale`].
pub fn svg_gantt(g: &TaskGraph, s: &Schedule) -> String {
    let procs = s.order().len();
    let scale = svg_scale(s.makespan());
    let height = TOP + ROW * procs as f64 + 30.0;
    let total_width = LEFT + PLOT_WIDTH + 20.0;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_width}" height="{height}" viewBox="0 0 {total_width} {height}">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<title>Schedule, makespan {:.3}</title>"#,
        s.makespan()
    )
    .unwrap();
    writeln!(out, r#"<g font-family="monospace" font-size="12">"#).unwrap();
    for p in 0..procs {
        let y = TOP + ROW * p as f64;
        writeln!(
            out,
            r##"<rect class="lane" x="{LEFT}" y="{y}" width="{PLOT_WIDTH}" height="{BAR}" fill="#f2f2f2"/>"##
        )
        .unwrap();
        writeln!(out, r#"<text x="10" y="{:.1}">P{p}</text>"#, y + BAR * 0.7).unwrap();
    }
    for e in s.entries() {
        let y = TOP + ROW * e.proc as f64;
        let x = LEFT + e.start * scale;
        let w = (e.finish - e.start) * scale;
        let name = task_name(g, e.task);
        writeln!(
            out,
            r#"<rect class="task" data-task="{name}" data-proc="{}" data-ast="{:.3}" data-aft="{:.3}" x="{x:.3}" y="{y}" width="{w:.3}" height="{BAR}" fill="{}" stroke="black" stroke-width="0.5"><title>T{name}: [{:.3}, {:.3})</title></rect>"#,
            e.proc,
            e.start,
            e.finish,
            PALETTE[e.task % PALETTE.len()],
            e.start,
            e.finish,
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{:.3}" y="{:.1}" text-anchor="middle">{name}</text>"#,
            x + w / 2.0,
            y + BAR * 0.7
        )
        .unwrap();
    }
    let axis_y = TOP + ROW * procs as f64 + 12.0;
    writeln!(
        out,
        r#"<text x="{LEFT}" y="{axis_y}">0</text><text x="{}" y="{axis_y}" text-anchor="end">{:.3}</text>"#,
        LEFT + PLOT_WIDTH,
        s.makespan()
    )
    .unwrap();
    out.push_str("</g>\n</svg>\n");
    out
}
