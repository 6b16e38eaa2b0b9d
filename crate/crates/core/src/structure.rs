//! Structural toolkit: outer-edge stripping, degree-2 analysis with the
//! three-piece decomposition, and the degree-2 reductions with their
//! arc-extension rules.
//!
//! Extension rules, given an orientation `D_H` of the reduced graph:
//!
//! * an ear `v` on the chord `ab` closes a directed triangle with `ab`, so
//!   `d(v, x) <= 1 + d(a, x)` and `d(x, v) <= d(x, b) + 1`;
//! * an ear `v` whose neighbor `v'` has degree 3 (third neighbor `z`, chord
//!   `wz`) gets `v'` on a directed triangle with `wz`, plus `v -> w` and
//!   `v' -> v` whatever the chord's direction. Both gadget vertices reach
//!   `{w, z}` in one hop and are reached from it within two, so any two
//!   gadgets are at most `d_H + 3` apart. Letting the chord pick the arcs of
//!   `v` as well would mix one-out/two-in with two-out/one-in gadgets and
//!   cost `+4`.
//!
//! With these, removing two ears that share a neighbor costs at most
//! `max(diam(D_H) + 1, 4)`, four ears cost `+2` and three ear pairs cost `+3`.

use std::collections::HashSet;

use thiserror::Error;

use crate::digraph::Orientation;
use crate::plane_graph::{Edge, GraphError, PlaneGraph, Subgraph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("interior vertex {apex} forms a facial triangle with outer edge {edge}")]
    HypothesisViolated { edge: Edge, apex: VertexId },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn precondition(msg: impl Into<String>) -> StructureError {
    StructureError::PreconditionFailed(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionKind {
    StripEdge,
    TwoDeg2,
    FourDeg2,
    ThreeDeg2WithDeg3,
}

/// Local arc-extension rule, in the parent graph's ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gadget {
    /// Degree-2 vertex `v` whose neighbors `a`, `b` are adjacent.
    Ear { v: VertexId, a: VertexId, b: VertexId },
    /// Ear `v` with neighbors `vp` (degree 3) and `w`; `vp`'s third neighbor is `z`.
    EarPair {
        v: VertexId,
        vp: VertexId,
        w: VertexId,
        z: VertexId,
    },
    /// Outer edge `uw` removed over the interior apex.
    Chord { u: VertexId, w: VertexId, apex: VertexId },
}

impl Gadget {
    /// Arcs for the gadget's removed edges, given the rest of the orientation.
    pub fn arcs(&self, d: &Orientation) -> Vec<(VertexId, VertexId)> {
        match *self {
            Gadget::Ear { v, a, b } => {
                if d.has_arc(a, b) {
                    vec![(b, v), (v, a)]
                } else {
                    vec![(a, v), (v, b)]
                }
            }
            Gadget::EarPair { v, vp, w, z } => {
                if d.has_arc(w, z) {
                    vec![(z, vp), (vp, w), (vp, v), (v, w)]
                } else {
                    vec![(w, vp), (vp, z), (vp, v), (v, w)]
                }
            }
            Gadget::Chord { u, w, apex } => {
                if d.has_arc(u, apex) && d.has_arc(apex, w) {
                    vec![(w, u)]
                } else {
                    vec![(u, w)]
                }
            }
        }
    }
}

/// One reduction `G -> H` together with the rule that lifts an orientation
/// of `H` back to `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub kind: ReductionKind,
    pub removed_vertices: Vec<VertexId>,
    pub removed_edges: Vec<Edge>,
    pub gadgets: Vec<Gadget>,
    /// Vertex ids of `H` mapped into `G`.
    pub to_parent: Vec<VertexId>,
    pub parent_n: usize,
}

impl ReductionStep {
    /// Orientation of `G` from an orientation of `H`.
    pub fn replay(&self, d_h: &Orientation) -> Orientation {
        let mut d = d_h.relabel(&self.to_parent, self.parent_n);
        for gadget in &self.gadgets {
            let extra = gadget.arcs(&d);
            d = d.extended(&extra).expect("gadget arcs are on removed edges");
        }
        d
    }

    /// Increase of the diameter bound this step guarantees: `(additive, floor)`
    /// meaning `diam(G) <= max(diam(H) + additive, floor)`.
    pub fn contract(&self) -> (u32, u32) {
        match self.kind {
            ReductionKind::StripEdge => (0, 0),
            ReductionKind::TwoDeg2 => (1, 4),
            ReductionKind::FourDeg2 => (2, 0),
            ReductionKind::ThreeDeg2WithDeg3 => (3, 0),
        }
    }

    /// Trace line with 1-based ids.
    pub fn trace_line(&self) -> String {
        let ids = |vs: &[VertexId]| vs.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" ");
        match self.kind {
            ReductionKind::StripEdge => {
                let e = self.removed_edges[0];
                format!("strip {} {}", e.lo() + 1, e.hi() + 1)
            }
            ReductionKind::TwoDeg2 => format!("two-deg2 {}", ids(&self.removed_vertices)),
            ReductionKind::FourDeg2 => format!("four-deg2 {}", ids(&self.removed_vertices)),
            ReductionKind::ThreeDeg2WithDeg3 => {
                let pairs: Vec<VertexId> = self
                    .gadgets
                    .iter()
                    .flat_map(|g| match *g {
                        Gadget::EarPair { v, vp, .. } => vec![v, vp],
                        _ => vec![],
                    })
                    .collect();
                format!("three-deg2 {}", ids(&pairs))
            }
        }
    }
}

/// Degree-2 vertices in clockwise order along the outer cycle.
pub fn degree_two_vertices(g: &PlaneGraph) -> Vec<VertexId> {
    g.faces()[g.outer_face()]
        .iter()
        .copied()
        .filter(|&v| g.degree(v) == 2)
        .collect()
}

/// Outer vertices with at least one interior neighbor, clockwise.
pub fn attachment_vertices(g: &PlaneGraph) -> Vec<VertexId> {
    let outer = g.outer_mask();
    g.faces()[g.outer_face()]
        .iter()
        .copied()
        .filter(|&v| g.neighbors(v).any(|w| !outer[w]))
        .collect()
}

/// First outer edge (scanning clockwise from the smallest outer id) whose
/// bounded face has an interior apex: `(u, w, apex)`.
pub fn find_separating_outer_edge(g: &PlaneGraph) -> Option<(VertexId, VertexId, VertexId)> {
    let c = g.faces()[g.outer_face()].clone();
    let outer = g.outer_mask();
    let start = (0..c.len()).min_by_key(|&i| c[i]).unwrap_or(0);
    (0..c.len()).find_map(|k| {
        let u = c[(start + k) % c.len()];
        let w = c[(start + k + 1) % c.len()];
        let apex = g.inner_apex(u, w)?;
        (!outer[apex]).then_some((u, w, apex))
    })
}

/// Repeatedly deletes outer edges that sit on a facial triangle with an
/// interior vertex. The result spans `g`; steps are in application order.
pub fn strip_separating_outer_edges(g: &PlaneGraph) -> Result<(PlaneGraph, Vec<ReductionStep>), StructureError> {
    let mut cur = g.clone();
    let mut steps = Vec::new();
    while let Some((u, w, apex)) = find_separating_outer_edge(&cur) {
        cur = cur.delete_edge(u, w)?;
        steps.push(ReductionStep {
            kind: ReductionKind::StripEdge,
            removed_vertices: Vec::new(),
            removed_edges: vec![Edge::new(u, w)],
            gadgets: vec![Gadget::Chord { u, w, apex }],
            to_parent: (0..g.n()).collect(),
            parent_n: g.n(),
        });
    }
    Ok((cur, steps))
}

/// Lifts an orientation of the stripped graph back through strip steps.
pub fn replay_strips(steps: &[ReductionStep], d: &Orientation) -> Orientation {
    steps.iter().rev().fold(d.clone(), |acc, s| s.replay(&acc))
}

/// One of the three outerplanar pieces cut off by the triangle `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub sub: Subgraph,
    /// `u_i` and `u_{i+1}` in parent ids.
    pub start: VertexId,
    pub end: VertexId,
    /// The single degree-2 vertex of the parent inside `u_i C u_{i+1}`.
    pub ear: Option<VertexId>,
}

impl Piece {
    pub fn size(&self) -> usize {
        self.sub.graph.n()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// Closed disk of the triangle.
    pub t_bar: Subgraph,
    /// `pieces[i]` runs clockwise from `u[i]` to `u[i+1]`.
    pub pieces: [Piece; 3],
}

impl Decomposition {
    pub fn n_t(&self) -> usize {
        self.t_bar.graph.n()
    }
}

/// Degree-2 and attachment data of a stripped near triangulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    /// Degree-2 vertices, clockwise along the outer cycle.
    pub degree2: Vec<VertexId>,
    /// Outer vertices with an interior neighbor, clockwise.
    pub attachments: Vec<VertexId>,
    pub interior: Vec<VertexId>,
    /// `u1, u2, u3` clockwise, when the degree-2 set has exactly three
    /// members and they span a triangle.
    pub triangle: Option<[VertexId; 3]>,
    pub decomposition: Option<Decomposition>,
}

pub fn analyze(g: &PlaneGraph) -> Result<StructureReport, StructureError> {
    if let Some((u, w, apex)) = find_separating_outer_edge(g) {
        return Err(StructureError::HypothesisViolated {
            edge: Edge::new(u, w),
            apex,
        });
    }
    let degree2 = degree_two_vertices(g);
    let attachments = attachment_vertices(g);
    let interior = g.interior_vertices();
    let mut report = StructureReport {
        degree2,
        attachments,
        interior,
        triangle: None,
        decomposition: None,
    };
    if report.interior.is_empty() || report.degree2.len() != 3 || report.attachments.len() != 3 {
        return Ok(report);
    }
    let s = &report.attachments;
    let tri = [s[0], s[1], s[2]];
    if !(g.has_edge(tri[0], tri[1]) && g.has_edge(tri[1], tri[2]) && g.has_edge(tri[2], tri[0])) {
        return Ok(report);
    }
    report.triangle = Some(tri);
    let t_bar = g.closed_disk(&tri)?;
    let mut pieces = Vec::with_capacity(3);
    for i in 0..3 {
        let (a, b) = (tri[i], tri[(i + 1) % 3]);
        let path = g.outer_subpath(a, b)?;
        let sub = if path.len() == 2 {
            // a and b consecutive on C: degenerate piece is just the edge
            return Ok(report);
        } else {
            g.closed_disk(&path)?
        };
        let ear = path[1..path.len() - 1].iter().copied().find(|&v| g.degree(v) == 2);
        pieces.push(Piece {
            sub,
            start: a,
            end: b,
            ear,
        });
    }
    let pieces: [Piece; 3] = pieces.try_into().expect("three pieces");
    report.decomposition = Some(Decomposition { t_bar, pieces });
    Ok(report)
}

fn check_reduced(h: &Subgraph) -> Result<(), StructureError> {
    let r = h.graph.is_near_triangulation();
    if !r.ok() {
        return Err(precondition("reduced graph is not a 2-connected near triangulation"));
    }
    Ok(())
}

fn ear_gadget(g: &PlaneGraph, v: VertexId) -> Result<Gadget, StructureError> {
    if g.degree(v) != 2 {
        return Err(precondition(format!("vertex {} does not have degree 2", v + 1)));
    }
    let r = g.rotation(v);
    let (a, b) = (r[0], r[1]);
    if !g.has_edge(a, b) {
        return Err(precondition(format!("neighbors of {} are not adjacent", v + 1)));
    }
    Ok(Gadget::Ear { v, a, b })
}

fn removed_edges(g: &PlaneGraph, removed: &HashSet<VertexId>) -> Vec<Edge> {
    g.edges()
        .into_iter()
        .filter(|e| removed.contains(&e.lo()) || removed.contains(&e.hi()))
        .collect()
}

fn reduce_ears(
    g: &PlaneGraph,
    ears: &[VertexId],
    kind: ReductionKind,
) -> Result<(Subgraph, ReductionStep), StructureError> {
    let set: HashSet<VertexId> = ears.iter().copied().collect();
    if set.len() != ears.len() {
        return Err(precondition("degree-2 vertices must be distinct"));
    }
    let gadgets = ears.iter().map(|&v| ear_gadget(g, v)).collect::<Result<Vec<_>, _>>()?;
    for gd in &gadgets {
        if let Gadget::Ear { a, b, .. } = *gd {
            if set.contains(&a) || set.contains(&b) {
                return Err(precondition("removed degree-2 vertices are adjacent"));
            }
        }
    }
    let h = g.delete_vertices(ears)?;
    check_reduced(&h)?;
    let step = ReductionStep {
        kind,
        removed_vertices: ears.to_vec(),
        removed_edges: removed_edges(g, &set),
        gadgets,
        to_parent: h.to_parent.clone(),
        parent_n: g.n(),
    };
    Ok((h, step))
}

/// Removes two degree-2 vertices with a common neighbor.
pub fn reduce_two_deg2(
    g: &PlaneGraph,
    v1: VertexId,
    v2: VertexId,
) -> Result<(Subgraph, ReductionStep), StructureError> {
    if v1 >= g.n() || v2 >= g.n() {
        return Err(precondition("vertex out of range"));
    }
    if !g.neighbors(v1).any(|x| g.has_edge(x, v2)) {
        return Err(precondition("degree-2 vertices share no neighbor"));
    }
    reduce_ears(g, &[v1, v2], ReductionKind::TwoDeg2)
}

/// Removes four degree-2 vertices.
pub fn reduce_four_deg2(g: &PlaneGraph, vs: [VertexId; 4]) -> Result<(Subgraph, ReductionStep), StructureError> {
    if vs.iter().any(|&v| v >= g.n()) {
        return Err(precondition("vertex out of range"));
    }
    reduce_ears(g, &vs, ReductionKind::FourDeg2)
}

/// Gadget for the ear `v` and its degree-3 neighbor `vp`.
pub fn ear_pair_gadget(g: &PlaneGraph, v: VertexId, vp: VertexId) -> Result<Gadget, StructureError> {
    if g.degree(v) != 2 || !g.has_edge(v, vp) || g.degree(vp) != 3 {
        return Err(precondition(format!(
            "{} is not an ear with degree-3 neighbor {}",
            v + 1,
            vp + 1
        )));
    }
    let w = g.neighbors(v).find(|&x| x != vp).expect("degree 2");
    if !g.has_edge(vp, w) {
        return Err(precondition("ear neighbors are not adjacent"));
    }
    let z = g.neighbors(vp).find(|&x| x != v && x != w).expect("degree 3");
    if !g.has_edge(w, z) {
        return Err(precondition(
            "degree-3 neighbor does not close a triangle with the ear's chord",
        ));
    }
    Ok(Gadget::EarPair { v, vp, w, z })
}

/// Removes three ears together with a degree-3 neighbor of each.
pub fn reduce_three_deg2_with_deg3(
    g: &PlaneGraph,
    pairs: [(VertexId, VertexId); 3],
) -> Result<(Subgraph, ReductionStep), StructureError> {
    if pairs.iter().any(|&(a, b)| a >= g.n() || b >= g.n()) {
        return Err(precondition("vertex out of range"));
    }
    let removed: Vec<VertexId> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let set: HashSet<VertexId> = removed.iter().copied().collect();
    if set.len() != 6 {
        return Err(precondition("the six removed vertices must be distinct"));
    }
    let gadgets = pairs
        .iter()
        .map(|&(v, vp)| ear_pair_gadget(g, v, vp))
        .collect::<Result<Vec<_>, _>>()?;
    for gd in &gadgets {
        if let Gadget::EarPair { w, z, .. } = *gd {
            if set.contains(&w) || set.contains(&z) {
                return Err(precondition("gadget chord touches another removed vertex"));
            }
        }
    }
    let h = g.delete_vertices(&removed)?;
    check_reduced(&h)?;
    let step = ReductionStep {
        kind: ReductionKind::ThreeDeg2WithDeg3,
        removed_vertices: removed,
        removed_edges: removed_edges(g, &set),
        gadgets,
        to_parent: h.to_parent.clone(),
        parent_n: g.n(),
    };
    Ok((h, step))
}

/// Windows of four consecutive degree-2 vertices, tightest span first, ties
/// by sorted ids.
pub fn four_deg2_candidates(g: &PlaneGraph, degree2: &[VertexId]) -> Vec<[VertexId; 4]> {
    let k = degree2.len();
    if k < 4 {
        return Vec::new();
    }
    let c = &g.faces()[g.outer_face()];
    let pos = |v: VertexId| c.iter().position(|&x| x == v).expect("on C");
    let len = c.len();
    let mut out: Vec<(usize, [VertexId; 4])> = (0..k)
        .map(|i| {
            let w = [
                degree2[i],
                degree2[(i + 1) % k],
                degree2[(i + 2) % k],
                degree2[(i + 3) % k],
            ];
            let span = (pos(w[3]) + len - pos(w[0])) % len;
            let mut key = w;
            key.sort_unstable();
            (span, key)
        })
        .collect();
    out.sort();
    out.dedup();
    out.into_iter().map(|(_, w)| w).collect()
}

/// Pairs of degree-2 vertices with a common neighbor.
pub fn sharing_pairs(g: &PlaneGraph, degree2: &[VertexId]) -> Vec<(VertexId, VertexId)> {
    let mut out = Vec::new();
    for (i, &a) in degree2.iter().enumerate() {
        for &b in &degree2[i + 1..] {
            if g.neighbors(a).any(|x| g.has_edge(x, b)) {
                out.push((a, b));
            }
        }
    }
    out
}

/// Ears that have a usable degree-3 neighbor, with that neighbor.
pub fn ear_pairs(g: &PlaneGraph) -> Vec<(VertexId, VertexId)> {
    degree_two_vertices(g)
        .into_iter()
        .filter_map(|v| {
            g.neighbors(v)
                .find(|&vp| ear_pair_gadget(g, v, vp).is_ok())
                .map(|vp| (v, vp))
        })
        .collect()
}
