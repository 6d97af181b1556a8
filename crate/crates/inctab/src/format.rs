//! Text and JSON formats for tableaux and bullet fillings, and renderers
//! for growth diagrams.
//!
//! The text format is one header line followed by one line per shape row:
//!
//! ```text
//! q=6 shape=2x3
//! 1 2 4
//! 3 4 6
//! ```
//!
//! Inner (absent) boxes print as `.`, bullets as `*`. The JSON alternative
//! is `{"q":6,"outer":[3,3],"inner":[],"rows":[[1,2,4],[3,4,6]]}` with
//! `null` standing for a bullet. Every value printed by either writer
//! re-parses to an equal value.

use crate::dynamics::GrowthDiagram;
use crate::shapes::{Cell, Partition, Shape, ShapeError};
use crate::tableaux::{BulletEntry, BulletFilling, IncreasingTableau, TableauError};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("line {line}, column {col}: {msg}")]
    Token { line: usize, col: usize, msg: String },
    #[error("invalid shape: {0}")]
    Shape(#[from] ShapeError),
    #[error("invalid filling: {0}")]
    Invalid(#[from] TableauError),
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("invalid cell list {input:?}: {msg}")]
    CellList { input: String, msg: String },
}

/// What a tableau file may hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedFilling {
    Tableau(IncreasingTableau),
    Bullets(BulletFilling),
}

impl ParsedFilling {
    /// The increasing tableau, rejecting bullet fillings.
    pub fn into_tableau(self) -> Result<IncreasingTableau, ParseError> {
        match self {
            ParsedFilling::Tableau(t) => Ok(t),
            ParsedFilling::Bullets(_) => Err(ParseError::Line {
                line: 1,
                msg: "expected an increasing tableau, found bullets".into(),
            }),
        }
    }
}

/// Parses either format, sniffing JSON by a leading `{`.
pub fn parse_input(input: &str) -> Result<ParsedFilling, ParseError> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}

fn tokens_with_cols(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

/// Parses the text format. Rows must match the header shape exactly; any
/// mismatch is reported with its line and column.
pub fn parse_text(input: &str) -> Result<ParsedFilling, ParseError> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());

    let (header_line, header) = lines.next().ok_or(ParseError::Line {
        line: 1,
        msg: "empty input".into(),
    })?;
    let mut q: Option<u32> = None;
    let mut shape: Option<Shape> = None;
    for (col, tok) in tokens_with_cols(header) {
        match tok.split_once('=') {
            Some(("q", v)) => {
                q = Some(v.parse().map_err(|_| ParseError::Token {
                    line: header_line,
                    col,
                    msg: format!("bad ceiling {v:?}"),
                })?)
            }
            Some(("shape", v)) => shape = Some(v.parse()?),
            _ => {
                return Err(ParseError::Token {
                    line: header_line,
                    col,
                    msg: format!("unexpected header token {tok:?}"),
                })
            }
        }
    }
    let q = q.ok_or(ParseError::Line {
        line: header_line,
        msg: "header is missing q=<int>".into(),
    })?;
    let shape = shape.ok_or(ParseError::Line {
        line: header_line,
        msg: "header is missing shape=<shape>".into(),
    })?;

    let mut rows: Vec<Vec<BulletEntry>> = Vec::with_capacity(shape.num_rows());
    let mut has_bullets = false;
    for r in 1..=shape.num_rows() {
        let (line_no, line) = lines.next().ok_or(ParseError::Line {
            line: header_line + r,
            msg: format!("missing row {r} of {}", shape.num_rows()),
        })?;
        let (lo, hi) = shape.row_bounds(r);
        let toks = tokens_with_cols(line);
        if toks.len() != hi {
            return Err(ParseError::Line {
                line: line_no,
                msg: format!("row {r} has {} tokens, expected {hi}", toks.len()),
            });
        }
        let mut row = Vec::with_capacity(hi - lo);
        for (pos, (col, tok)) in toks.into_iter().enumerate() {
            let absent = pos < lo;
            match tok {
                "." if absent => {}
                "." => {
                    return Err(ParseError::Token {
                        line: line_no,
                        col,
                        msg: format!("box ({r},{}) is part of the shape", pos + 1),
                    })
                }
                "*" if !absent => {
                    has_bullets = true;
                    row.push(BulletEntry::Bullet);
                }
                _ if absent => {
                    return Err(ParseError::Token {
                        line: line_no,
                        col,
                        msg: format!("expected \".\" for absent box ({r},{})", pos + 1),
                    })
                }
                _ => {
                    let v: u32 = tok.parse().map_err(|_| ParseError::Token {
                        line: line_no,
                        col,
                        msg: format!("bad entry {tok:?}"),
                    })?;
                    row.push(BulletEntry::Num(v));
                }
            }
        }
        rows.push(row);
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(ParseError::Line {
            line: line_no,
            msg: "trailing content after the last row".into(),
        });
    }
    build(shape, rows, q, has_bullets)
}

fn build(
    shape: Shape,
    rows: Vec<Vec<BulletEntry>>,
    q: u32,
    has_bullets: bool,
) -> Result<ParsedFilling, ParseError> {
    let filling = BulletFilling::new(shape, rows, q)?;
    if has_bullets {
        Ok(ParsedFilling::Bullets(filling))
    } else {
        Ok(ParsedFilling::Tableau(filling.into_tableau()?))
    }
}

/// The JSON schema for tableaux and bullet fillings (`null` = bullet).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TableauJson {
    pub q: u32,
    pub outer: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inner: Vec<usize>,
    pub rows: Vec<Vec<Option<u32>>>,
}

impl TableauJson {
    pub fn from_tableau(t: &IncreasingTableau) -> Self {
        TableauJson {
            q: t.ceiling(),
            outer: t.shape().outer().parts().to_vec(),
            inner: t.shape().inner().parts().to_vec(),
            rows: (1..=t.shape().num_rows())
                .map(|r| {
                    let (lo, hi) = t.shape().row_bounds(r);
                    (lo + 1..=hi)
                        .map(|c| Some(t.entry(Cell::new(r, c)).unwrap()))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_bullets(x: &BulletFilling) -> Self {
        TableauJson {
            q: x.ceiling(),
            outer: x.shape().outer().parts().to_vec(),
            inner: x.shape().inner().parts().to_vec(),
            rows: (1..=x.shape().num_rows())
                .map(|r| {
                    let (lo, hi) = x.shape().row_bounds(r);
                    (lo + 1..=hi)
                        .map(|c| x.entry(Cell::new(r, c)).unwrap().num())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn into_parsed(self) -> Result<ParsedFilling, ParseError> {
        let shape = Shape::new(Partition::new(self.outer)?, Partition::new(self.inner)?)?;
        let mut has_bullets = false;
        let rows = self
            .rows
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|e| match e {
                        Some(v) => BulletEntry::Num(v),
                        None => {
                            has_bullets = true;
                            BulletEntry::Bullet
                        }
                    })
                    .collect()
            })
            .collect();
        build(shape, rows, self.q, has_bullets)
    }
}

pub fn parse_json(input: &str) -> Result<ParsedFilling, ParseError> {
    let json: TableauJson =
        serde_json::from_str(input).map_err(|e| ParseError::Json(e.to_string()))?;
    json.into_parsed()
}

/// Prints the text format; the inverse of `parse_text`.
pub fn print_tableau(t: &IncreasingTableau) -> String {
    print_filling(&BulletFilling::from_tableau(t))
}

pub fn print_filling(x: &BulletFilling) -> String {
    let mut out = format!("q={} shape={}\n", x.ceiling(), x.shape());
    for r in 1..=x.shape().num_rows() {
        let (lo, hi) = x.shape().row_bounds(r);
        let mut toks: Vec<String> = vec![".".into(); lo];
        for c in lo + 1..=hi {
            toks.push(x.entry(Cell::new(r, c)).unwrap().to_string());
        }
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

pub fn print_tableau_json(t: &IncreasingTableau) -> String {
    serde_json::to_string(&TableauJson::from_tableau(t)).expect("serialization cannot fail")
}

pub fn print_filling_json(x: &BulletFilling) -> String {
    serde_json::to_string(&TableauJson::from_bullets(x)).expect("serialization cannot fail")
}

/// Parses a cell list such as `"(1,2),(2,1)"`.
pub fn parse_cells(input: &str) -> Result<Vec<Cell>, ParseError> {
    let err = |msg: &str| ParseError::CellList {
        input: input.to_string(),
        msg: msg.to_string(),
    };
    let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Ok(Vec::new());
    }
    if !compact.starts_with('(') || !compact.ends_with(')') {
        return Err(err("expected \"(r,c),(r,c),...\""));
    }
    compact[1..compact.len() - 1]
        .split("),(")
        .map(|pair| {
            let (r, c) = pair.split_once(',').ok_or_else(|| err("expected r,c pair"))?;
            let r: usize = r.parse().map_err(|_| err("bad row index"))?;
            let c: usize = c.parse().map_err(|_| err("bad column index"))?;
            if r == 0 || c == 0 {
                return Err(err("cells are 1-based"));
            }
            Ok(Cell::new(r, c))
        })
        .collect()
}

fn partition_label(p: &Partition) -> String {
    if p.is_empty() {
        "-".to_string()
    } else {
        p.parts()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// Renders the staircase layout: one line per diagram row, indented one
/// cell per row so that equal array positions align vertically. With
/// `shade`, every partition containing that box is bracketed.
pub fn render_growth_text(gd: &GrowthDiagram, shade: Option<Cell>) -> String {
    let q = gd.ceiling() as i64;
    let mut labels: Vec<Vec<String>> = Vec::new();
    let mut width = 1;
    for j in gd.j_min()..=gd.j_max() {
        let row: Vec<String> = (0..=q)
            .map(|i| {
                let p = gd.cell(i + j, j).unwrap();
                let mut s = partition_label(p);
                if shade.is_some_and(|b| p.contains_cell(b)) {
                    s = format!("[{s}]");
                }
                s
            })
            .collect();
        width = width.max(row.iter().map(String::len).max().unwrap_or(0));
        labels.push(row);
    }
    let slot = width + 2;
    let mut out = String::new();
    for (offset, row) in labels.iter().enumerate() {
        out.push_str(&" ".repeat(offset * slot));
        for (i, s) in row.iter().enumerate() {
            let sep = if i + 1 == row.len() { "" } else { "," };
            let _ = write!(out, "{:<slot$}", format!("{s}{sep}"));
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    }
    out
}

/// The diagonal lattice path used as a rendering diagnostic: for each
/// up-right diagonal (constant `i + 2j`) that meets a shaded cell inside
/// the window, the point `(k, rank)` where `k` numbers the diagonals from
/// the first shaded one and `rank` is the row rank `i` of the smallest
/// (lowest) shaded partition on the diagonal.
pub fn lattice_path(gd: &GrowthDiagram, b: Cell) -> Vec<(i64, u32)> {
    let q = gd.ceiling() as i64;
    let mut points = Vec::new();
    let c_min = 2 * gd.j_min();
    let c_max = q + 2 * gd.j_max();
    for c in c_min..=c_max {
        // walk the diagonal bottom-up: largest j first
        let mut best: Option<u32> = None;
        for j in (gd.j_min()..=gd.j_max()).rev() {
            let i = c - 2 * j;
            if !(0..=q).contains(&i) {
                continue;
            }
            let p = gd.cell(i + j, j).unwrap();
            if p.contains_cell(b) {
                best = Some(i as u32);
                break;
            }
        }
        if let Some(rank) = best {
            points.push((c, rank));
        }
    }
    // renumber so the first shaded diagonal is k = 1
    if let Some(&(first, _)) = points.first() {
        for p in &mut points {
            p.0 = p.0 - first + 1;
        }
    }
    points
}

/// Renders the diagram as SVG, one `<g>` per cell with one unit square per
/// partition box; shaded cells are filled.
pub fn render_growth_svg(gd: &GrowthDiagram, shade: Option<Cell>) -> String {
    let q = gd.ceiling() as i64;
    let unit = 6i64;
    let max_rows = (1 + gd.row(0).outer().len()) as i64;
    let max_cols = (1 + gd.row(0).outer().part(0)) as i64;
    let (slot_w, slot_h) = (unit * max_cols + 4, unit * max_rows + 4);
    let ncols = q + (gd.j_max() - gd.j_min()) + 1;
    let nrows = gd.j_max() - gd.j_min() + 1;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\">\n",
        ncols * slot_w,
        nrows * slot_h
    );
    for j in gd.j_min()..=gd.j_max() {
        for i in 0..=q {
            let x = i + j;
            let p = gd.cell(x, j).unwrap();
            let ox = (x - gd.j_min()) * slot_w;
            let oy = (j - gd.j_min()) * slot_h;
            let shaded = shade.is_some_and(|b| p.contains_cell(b));
            let fill = if shaded { "#87ceeb" } else { "none" };
            let _ = writeln!(
                out,
                "  <g id=\"cell-{x}-{j}\" transform=\"translate({ox},{oy})\">"
            );
            if p.is_empty() {
                let _ = writeln!(
                    out,
                    "    <circle cx=\"3\" cy=\"3\" r=\"1\" fill=\"black\"/>"
                );
            }
            for (r, &len) in p.parts().iter().enumerate() {
                for c in 0..len {
                    let _ = writeln!(
                        out,
                        "    <rect x=\"{}\" y=\"{}\" width=\"{unit}\" height=\"{unit}\" \
                         fill=\"{fill}\" stroke=\"black\" stroke-width=\"0.5\"/>",
                        c as i64 * unit,
                        r as i64 * unit
                    );
                }
            }
            out.push_str("  </g>\n");
        }
    }
    out.push_str("</svg>\n");
    out
}
