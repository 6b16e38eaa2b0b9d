//! Text formats.
//!
//! `.pg` (plane graph, 1-based ids, `#` comments):
//!
//! ```text
//! 4
//! 1: 2 4 3
//! 2: 3 4 1
//! 3: 1 4 2
//! 4: 1 2 3
//! outer: 1 2 3
//! ```
//!
//! Line `v: ...` lists the neighbors of `v` in clockwise order. Without an
//! `outer:` line the longest face is outside.
//!
//! `.or` (orientation): one arc `tail head` per line, 1-based.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::digraph::{Certificate, Orientation, OrientationError};
use crate::plane_graph::{GraphError, OuterSpec, PlaneGraph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{0}")]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Orientation(#[from] OrientationError),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let s = raw.split('#').next().unwrap_or("").trim();
        (!s.is_empty()).then_some((i + 1, s))
    })
}

fn parse_id(tok: &str, n: usize, line: usize) -> Result<VertexId, FormatError> {
    let v: usize = tok
        .parse()
        .map_err(|_| syntax(line, format!("expected a vertex id, found `{tok}`")))?;
    if v == 0 || v > n {
        return Err(syntax(line, format!("vertex {v} out of range 1..={n}")));
    }
    Ok(v - 1)
}

pub fn parse_pg(text: &str) -> Result<PlaneGraph, FormatError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| syntax(1, "missing vertex count"))?;
    let n: usize = header
        .parse()
        .map_err(|_| syntax(hl, format!("expected vertex count, found `{header}`")))?;
    if n == 0 {
        return Err(syntax(hl, "vertex count must be positive"));
    }
    let mut rot: Vec<Option<Vec<VertexId>>> = vec![None; n];
    let mut rot_line = vec![0usize; n];
    let mut outer = None;
    for (ln, s) in lines {
        let (head, rest) = s
            .split_once(':')
            .ok_or_else(|| syntax(ln, "expected `v: neighbors` or `outer: cycle`"))?;
        let ids = rest
            .split_whitespace()
            .map(|t| parse_id(t, n, ln))
            .collect::<Result<Vec<_>, _>>()?;
        if head.trim() == "outer" {
            if outer.is_some() {
                return Err(syntax(ln, "second `outer:` line"));
            }
            outer = Some(ids);
            continue;
        }
        let v = parse_id(head.trim(), n, ln)?;
        if rot[v].is_some() {
            return Err(syntax(ln, format!("rotation of vertex {} given twice", v + 1)));
        }
        let mut seen = HashSet::new();
        for &w in &ids {
            if w == v {
                return Err(syntax(ln, format!("vertex {} lists itself", v + 1)));
            }
            if !seen.insert(w) {
                return Err(syntax(ln, format!("duplicate neighbor {} of vertex {}", w + 1, v + 1)));
            }
        }
        rot[v] = Some(ids);
        rot_line[v] = ln;
    }
    let mut rotations = Vec::with_capacity(n);
    for (v, r) in rot.into_iter().enumerate() {
        rotations.push(r.ok_or_else(|| syntax(hl, format!("no rotation given for vertex {}", v + 1)))?);
    }
    for v in 0..n {
        for &w in &rotations[v] {
            if !rotations[w].contains(&v) {
                return Err(syntax(
                    rot_line[v],
                    format!("asymmetric adjacency: {} lists {} but not conversely", v + 1, w + 1),
                ));
            }
        }
    }
    let spec = outer.map_or(OuterSpec::Longest, OuterSpec::Cycle);
    Ok(PlaneGraph::new(rotations, spec)?)
}

pub fn write_pg(g: &PlaneGraph) -> String {
    let mut out = format!("{}\n", g.n());
    for v in 0..g.n() {
        let _ = write!(out, "{}:", v + 1);
        for &w in g.rotation(v) {
            let _ = write!(out, " {}", w + 1);
        }
        out.push('\n');
    }
    out.push_str("outer:");
    for &v in &g.faces()[g.outer_face()] {
        let _ = write!(out, " {}", v + 1);
    }
    out.push('\n');
    out
}

/// Parses arcs on vertices `1..=n`.
pub fn parse_or(text: &str, n: usize) -> Result<Orientation, FormatError> {
    let mut arcs = Vec::new();
    for (ln, s) in content_lines(text) {
        let toks: Vec<&str> = s.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(syntax(ln, "expected `tail head`"));
        }
        let u = parse_id(toks[0], n, ln)?;
        let v = parse_id(toks[1], n, ln)?;
        if u == v {
            return Err(syntax(ln, "arc is a loop"));
        }
        arcs.push((u, v));
    }
    Ok(Orientation::new(n, arcs)?)
}

pub fn write_or(d: &Orientation) -> String {
    let mut out = String::new();
    for &(u, v) in d.arcs() {
        let _ = writeln!(out, "{} {}", u + 1, v + 1);
    }
    out
}

pub fn certificate_report(c: &Certificate) -> String {
    let mut out = format!(
        "diameter={}\nbound={}\nstrong={}\nexception={}\n",
        c.diameter, c.bound, c.strongly_connected, c.exception
    );
    for t in &c.trace {
        out.push_str(t);
        out.push('\n');
    }
    out
}

/// DOT digraph; outer-cycle arcs are drawn bold when `g` is given.
pub fn to_dot(d: &Orientation, g: Option<&PlaneGraph>) -> String {
    let outer: HashSet<(VertexId, VertexId)> = g
        .map(|g| {
            let c = &g.faces()[g.outer_face()];
            (0..c.len())
                .flat_map(|i| {
                    let (a, b) = (c[i], c[(i + 1) % c.len()]);
                    [(a, b), (b, a)]
                })
                .collect()
        })
        .unwrap_or_default();
    let mut out = String::from("digraph orientation {\n  node [shape=circle];\n");
    for v in 0..d.n() {
        let _ = writeln!(out, "  {};", v + 1);
    }
    for &(u, v) in d.arcs() {
        let style = if outer.contains(&(u, v)) { " [style=bold]" } else { "" };
        let _ = writeln!(out, "  {} -> {}{};", u + 1, v + 1, style);
    }
    out.push_str("}\n");
    out
}
