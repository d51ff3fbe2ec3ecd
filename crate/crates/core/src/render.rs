//! Text and SVG pictures of permutations, gadget instances and schedules.
//!
//! ASCII output boxes each strip in brackets: `[2] [5 6] [3] [7 8 9] [4] [1]`.
//! SVG output draws one cell per position with descent arcs underneath.
//! Everything here is a pure function of its input.

use std::fmt::Write;

use crate::moves::{Move, Schedule};
use crate::permutation::{parse_permutation, ParseError, Permutation};
use crate::reduction::{GadgetInstance, GadgetToken};

/// Strips in brackets, separated by single spaces.
pub fn ascii_strips(p: &Permutation) -> String {
    let a = p.as_slice();
    p.strips()
        .strips()
        .iter()
        .map(|s| {
            let inner: Vec<String> = a[s.range()].iter().map(u32::to_string).collect();
            format!("[{}]", inner.join(" "))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Reads back the numbers of an [`ascii_strips`] rendering.
pub fn parse_ascii_strips(text: &str) -> Result<Permutation, ParseError> {
    parse_permutation(&text.replace(['[', ']'], " "))
}

/// Token labels above their values, columns right-aligned.
///
/// ```text
/// token  L1 4 m1 1 U1 L3 3 m3 2 U3
/// value   1 4  3 2  5  6 9  8 7 10
/// ```
pub fn ascii_instance(inst: &GadgetInstance) -> String {
    let labels: Vec<String> = inst.tokens.iter().map(GadgetToken::label).collect();
    let values: Vec<String> = inst.pi_dagger.as_slice().iter().map(u32::to_string).collect();
    let mut top = String::from("token");
    let mut bottom = String::from("value");
    for (l, v) in labels.iter().zip(&values) {
        let w = l.len().max(v.len());
        let _ = write!(top, " {l:>w$}");
        let _ = write!(bottom, " {v:>w$}");
    }
    format!("{top}\n{bottom}\n")
}

fn describe_move(state: &Permutation, m: Move) -> String {
    let strips = state.strips();
    let a = state.as_slice();
    let boxed = |idx: usize| {
        let s = strips.strips()[idx];
        let inner: Vec<String> = a[s.range()].iter().map(u32::to_string).collect();
        format!("[{}]", inner.join(" "))
    };
    match m {
        Move::Swap(s) => format!("{} <-> {}", boxed(s.left), boxed(s.right)),
        Move::Block(b) => format!("move {} to gap {}", boxed(b.strip), b.gap),
    }
}

/// Each state of the schedule with its strip and descent counts, and the
/// move between consecutive states.
pub fn ascii_trace(schedule: &Schedule) -> String {
    let trace = schedule.trace().expect("schedule replays by construction");
    let width = schedule.len().to_string().len() + 2;
    let mut out = String::new();
    for (idx, state) in trace.iter().enumerate() {
        if idx > 0 {
            let head = format!("{idx}.");
            let _ = writeln!(out, "{head:<width$}{}", describe_move(&trace[idx - 1], schedule.moves()[idx - 1]));
        }
        let _ = writeln!(
            out,
            "{:width$}{}   strips={} rev={}",
            "",
            ascii_strips(state),
            state.strips().count(),
            state.rev().rev
        );
    }
    out
}

const CELL: usize = 36;
const MARGIN: usize = 12;
const ROW: usize = 96;

#[derive(Clone, Copy)]
enum Shade {
    Plain,
    Cage,
    Hinge,
}

impl Shade {
    fn fill(self) -> &'static str {
        match self {
            Shade::Plain => "#ffffff",
            Shade::Cage => "#e8eef8",
            Shade::Hinge => "#fbe9d0",
        }
    }
}

struct Cells<'a> {
    values: &'a [u32],
    labels: Option<Vec<String>>,
    shades: Vec<Shade>,
    /// Position ranges outlined together (strips or cages).
    groups: Vec<std::ops::Range<usize>>,
}

fn svg_row(out: &mut String, cells: &Cells, y: usize) {
    let label_h = if cells.labels.is_some() { 16 } else { 0 };
    let top = y + label_h;
    for (k, &v) in cells.values.iter().enumerate() {
        let x = MARGIN + k * CELL;
        let _ = writeln!(
            out,
            r##"  <rect x="{x}" y="{top}" width="{CELL}" height="{CELL}" fill="{}" stroke="#999999"/>"##,
            cells.shades[k].fill()
        );
        let _ = writeln!(
            out,
            r#"  <text x="{}" y="{}" text-anchor="middle" font-family="monospace" font-size="14">{v}</text>"#,
            x + CELL / 2,
            top + CELL / 2 + 5
        );
        if let Some(labels) = &cells.labels {
            let _ = writeln!(
                out,
                r##"  <text x="{}" y="{}" text-anchor="middle" font-family="monospace" font-size="10" fill="#555555">{}</text>"##,
                x + CELL / 2,
                y + 11,
                labels[k]
            );
        }
    }
    for g in &cells.groups {
        let _ = writeln!(
            out,
            r##"  <rect x="{}" y="{top}" width="{}" height="{CELL}" fill="none" stroke="#222222" stroke-width="2"/>"##,
            MARGIN + g.start * CELL,
            g.len() * CELL
        );
    }
    let base = top + CELL;
    for k in 0..cells.values.len().saturating_sub(1) {
        if cells.values[k] > cells.values[k + 1] {
            let (x0, x1) = (MARGIN + k * CELL + CELL / 2, MARGIN + (k + 1) * CELL + CELL / 2);
            let _ = writeln!(
                out,
                r##"  <path d="M {x0} {base} Q {} {} {x1} {base}" fill="none" stroke="#c0392b" stroke-width="1.5"/>"##,
                (x0 + x1) / 2,
                base + 22
            );
        }
    }
}

fn svg_document(rows: &[Cells]) -> String {
    let len = rows.iter().map(|r| r.values.len()).max().unwrap_or(0);
    let width = 2 * MARGIN + len * CELL;
    let height = 2 * MARGIN + rows.len() * ROW;
    let mut out = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    out.push('\n');
    for (idx, cells) in rows.iter().enumerate() {
        svg_row(&mut out, cells, MARGIN + idx * ROW);
    }
    out.push_str("</svg>\n");
    out
}

fn strip_cells(p: &Permutation) -> Cells<'_> {
    Cells {
        values: p.as_slice(),
        labels: None,
        shades: vec![Shade::Plain; p.len()],
        groups: p.strips().strips().iter().map(|s| s.range()).collect(),
    }
}

/// One row of cells, strips outlined, descents arced.
pub fn svg_permutation(p: &Permutation) -> String {
    svg_document(&[strip_cells(p)])
}

/// Cells labelled with tokens; cages shaded and outlined, hinges tinted.
pub fn svg_instance(inst: &GadgetInstance) -> String {
    let mut shades: Vec<Shade> = inst
        .tokens
        .iter()
        .map(|t| if t.is_hinge() { Shade::Hinge } else { Shade::Plain })
        .collect();
    let cages = inst.cages();
    for c in &cages {
        for pos in c.span() {
            shades[pos] = Shade::Cage;
        }
    }
    let cells = Cells {
        values: inst.pi_dagger.as_slice(),
        labels: Some(inst.tokens.iter().map(|t| escape(&t.label())).collect()),
        shades,
        groups: cages.iter().map(|c| c.span()).collect(),
    };
    svg_document(&[cells])
}

/// One row per state of the schedule.
pub fn svg_trace(schedule: &Schedule) -> String {
    let trace = schedule.trace().expect("schedule replays by construction");
    let rows: Vec<Cells> = trace.iter().map(strip_cells).collect();
    svg_document(&rows)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
