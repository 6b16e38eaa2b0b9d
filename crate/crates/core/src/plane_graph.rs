//! Plane graphs given by rotation systems.
//!
//! Rotations are stored clockwise. A facial walk is traced by leaving each
//! vertex along the clockwise successor of the edge it was entered by, so
//! bounded faces come out counterclockwise and the unbounded face comes out
//! clockwise. [`PlaneGraph::outer_cycle`] therefore lists the outer cycle in
//! clockwise order without any extra work.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

pub type VertexId = usize;
pub type FaceId = usize;

/// Undirected edge, endpoints stored in increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(VertexId, VertexId);

impl Edge {
    pub fn new(u: VertexId, v: VertexId) -> Self {
        debug_assert_ne!(u, v, "edge endpoints must differ");
        if u < v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn lo(self) -> VertexId {
        self.0
    }

    pub fn hi(self) -> VertexId {
        self.1
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.0, self.1)
    }

    pub fn other(self, v: VertexId) -> VertexId {
        if v == self.0 {
            self.1
        } else {
            self.0
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0 + 1, self.1 + 1)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("not a simple graph: {0}")]
    NotSimple(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("rotation system is not planar: n - m + f = {0}, expected 2")]
    NonPlanarEmbedding(i64),
    #[error("requested outer face is not a face of the embedding")]
    OuterNotAFace,
    #[error("graph is not 2-connected")]
    NotTwoConnected,
    #[error("vertex sequence is not a cycle of the graph")]
    NotACycle,
    #[error("edge {0} is absent")]
    EdgeAbsent(Edge),
    #[error("vertex {0} is absent")]
    VertexAbsent(usize),
}

/// How to pick the unbounded face when building a [`PlaneGraph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OuterSpec {
    /// Longest facial walk; ties go to the lexicographically smallest walk.
    Longest,
    /// The face containing the dart `u -> v`.
    Dart(VertexId, VertexId),
    /// The face whose boundary is this cyclic vertex sequence (either direction).
    Cycle(Vec<VertexId>),
}

/// Outcome of [`PlaneGraph::is_near_triangulation`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub two_connected: bool,
    /// Bounded faces whose walk is not a triangle.
    pub bad_faces: Vec<FaceId>,
    pub too_small: bool,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.two_connected && self.bad_faces.is_empty() && !self.too_small
    }
}

/// A connected plane graph with a distinguished outer face.
#[derive(Clone, PartialEq, Eq)]
pub struct PlaneGraph {
    rotations: Vec<Vec<VertexId>>,
    /// `dart_face[u][i]` is the face left of the dart `u -> rotations[u][i]`
    /// in tracing order.
    dart_face: Vec<Vec<FaceId>>,
    faces: Vec<Vec<VertexId>>,
    outer: FaceId,
    edge_count: usize,
}

impl fmt::Debug for PlaneGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlaneGraph")
            .field("n", &self.n())
            .field("rotations", &self.rotations)
            .field("outer", &self.faces[self.outer])
            .finish()
    }
}

impl PlaneGraph {
    /// Builds a plane graph from clockwise rotations (0-based vertex ids).
    pub fn new(rotations: Vec<Vec<VertexId>>, outer: OuterSpec) -> Result<Self, GraphError> {
        let n = rotations.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut edge_set = HashSet::new();
        for (u, rot) in rotations.iter().enumerate() {
            let mut seen = HashSet::new();
            for &v in rot {
                if v >= n {
                    return Err(GraphError::NotSimple(format!(
                        "vertex {} lists unknown neighbor {}",
                        u + 1,
                        v + 1
                    )));
                }
                if v == u {
                    return Err(GraphError::NotSimple(format!("loop at vertex {}", u + 1)));
                }
                if !seen.insert(v) {
                    return Err(GraphError::NotSimple(format!(
                        "vertex {} lists neighbor {} twice",
                        u + 1,
                        v + 1
                    )));
                }
                if !rotations[v].contains(&u) {
                    return Err(GraphError::NotSimple(format!(
                        "asymmetric adjacency: {} lists {} but not conversely",
                        u + 1,
                        v + 1
                    )));
                }
                edge_set.insert(Edge::new(u, v));
            }
        }
        let edge_count = edge_set.len();

        // connectivity
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &rotations[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(GraphError::Disconnected);
        }

        let (faces, dart_face) = trace_faces(&rotations);
        let euler = n as i64 - edge_count as i64 + faces.len() as i64;
        if euler != 2 {
            return Err(GraphError::NonPlanarEmbedding(euler));
        }

        let mut g = PlaneGraph {
            rotations,
            dart_face,
            faces,
            outer: 0,
            edge_count,
        };
        g.outer = g.resolve_outer(&outer)?;
        Ok(g)
    }

    fn resolve_outer(&self, spec: &OuterSpec) -> Result<FaceId, GraphError> {
        match spec {
            OuterSpec::Longest => {
                let mut best: Option<(usize, Vec<VertexId>, FaceId)> = None;
                for (f, walk) in self.faces.iter().enumerate() {
                    let key = min_rotation(walk);
                    let better = match &best {
                        None => true,
                        Some((len, k, _)) => walk.len() > *len || (walk.len() == *len && key < *k),
                    };
                    if better {
                        best = Some((walk.len(), key, f));
                    }
                }
                Ok(best.expect("at least one face").2)
            }
            OuterSpec::Dart(u, v) => self.dart_face(*u, *v).ok_or(GraphError::OuterNotAFace),
            OuterSpec::Cycle(cycle) => {
                let fwd = min_rotation(cycle);
                let rev: Vec<_> = cycle.iter().rev().copied().collect();
                let rev = min_rotation(&rev);
                self.faces
                    .iter()
                    .position(|w| {
                        w.len() == cycle.len() && {
                            let k = min_rotation(w);
                            k == fwd || k == rev
                        }
                    })
                    .ok_or(GraphError::OuterNotAFace)
            }
        }
    }

    pub fn n(&self) -> usize {
        self.rotations.len()
    }

    pub fn m(&self) -> usize {
        self.edge_count
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn rotation(&self, v: VertexId) -> &[VertexId] {
        &self.rotations[v]
    }

    pub fn rotations(&self) -> &[Vec<VertexId>] {
        &self.rotations
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotations[v].len()
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.rotations[v].iter().copied()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.n() && self.rotations[u].contains(&v)
    }

    /// All edges, sorted.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = (0..self.n())
            .flat_map(|u| {
                self.rotations[u]
                    .iter()
                    .filter(move |&&v| u < v)
                    .map(move |&v| Edge(u, v))
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn faces(&self) -> &[Vec<VertexId>] {
        &self.faces
    }

    pub fn outer_face(&self) -> FaceId {
        self.outer
    }

    /// The face traced by the dart `u -> v`, if that dart exists.
    pub fn dart_face(&self, u: VertexId, v: VertexId) -> Option<FaceId> {
        let i = self.rotations.get(u)?.iter().position(|&w| w == v)?;
        Some(self.dart_face[u][i])
    }

    /// Plane graphs with at least three vertices are 2-connected exactly when
    /// every facial walk is a cycle.
    pub fn is_two_connected(&self) -> bool {
        self.n() >= 3
            && self.faces.iter().all(|w| {
                let mut seen = HashSet::with_capacity(w.len());
                w.iter().all(|v| seen.insert(*v))
            })
    }

    pub fn is_near_triangulation(&self) -> ValidationReport {
        let bad_faces = self
            .faces
            .iter()
            .enumerate()
            .filter(|&(f, w)| f != self.outer && w.len() != 3)
            .map(|(f, _)| f)
            .collect();
        ValidationReport {
            two_connected: self.is_two_connected(),
            bad_faces,
            too_small: self.n() < 3,
        }
    }

    /// The outer cycle in clockwise order.
    pub fn outer_cycle(&self) -> Result<Vec<VertexId>, GraphError> {
        if !self.is_two_connected() {
            return Err(GraphError::NotTwoConnected);
        }
        Ok(self.faces[self.outer].clone())
    }

    /// Membership mask for the outer face's vertices.
    pub fn outer_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n()];
        for &v in &self.faces[self.outer] {
            mask[v] = true;
        }
        mask
    }

    pub fn interior_vertices(&self) -> Vec<VertexId> {
        let mask = self.outer_mask();
        (0..self.n()).filter(|&v| !mask[v]).collect()
    }

    /// True when every vertex lies on the outer face.
    pub fn is_outerplanar_embedded(&self) -> bool {
        self.outer_mask().iter().all(|&b| b)
    }

    /// The clockwise subpath `u C v` of the outer cycle, endpoints included.
    pub fn outer_subpath(&self, u: VertexId, v: VertexId) -> Result<Vec<VertexId>, GraphError> {
        let c = self.outer_cycle()?;
        let i = c.iter().position(|&x| x == u).ok_or(GraphError::VertexAbsent(u))?;
        let k = c.len();
        let mut out = vec![u];
        let mut j = (i + 1) % k;
        while c[(j + k - 1) % k] != v {
            out.push(c[j]);
            if j == i {
                return Err(GraphError::VertexAbsent(v));
            }
            j = (j + 1) % k;
        }
        Ok(out)
    }

    /// Third vertex of the bounded face on the edge `u w`, where `u -> w` is a
    /// dart of the outer walk. Requires that face to be a triangle.
    pub fn inner_apex(&self, u: VertexId, w: VertexId) -> Option<VertexId> {
        let f = self.dart_face(w, u)?;
        let walk = &self.faces[f];
        if walk.len() != 3 {
            return None;
        }
        walk.iter().copied().find(|&x| x != u && x != w)
    }

    /// Subgraph on or inside `cycle` with inherited rotations; its outer cycle
    /// is `cycle`.
    pub fn closed_disk(&self, cycle: &[VertexId]) -> Result<Subgraph, GraphError> {
        let k = cycle.len();
        if k < 3 {
            return Err(GraphError::NotACycle);
        }
        let mut on_cycle = HashSet::new();
        for &v in cycle {
            if v >= self.n() || !on_cycle.insert(v) {
                return Err(GraphError::NotACycle);
            }
        }
        let mut cycle_edges = HashSet::new();
        for i in 0..k {
            let (a, b) = (cycle[i], cycle[(i + 1) % k]);
            if !self.has_edge(a, b) {
                return Err(GraphError::NotACycle);
            }
            cycle_edges.insert(Edge::new(a, b));
        }

        // Faces reachable from the outer face without crossing the cycle lie outside.
        let mut outside = vec![false; self.faces.len()];
        outside[self.outer] = true;
        let mut queue = VecDeque::from([self.outer]);
        while let Some(f) = queue.pop_front() {
            let walk = &self.faces[f];
            for i in 0..walk.len() {
                let (a, b) = (walk[i], walk[(i + 1) % walk.len()]);
                if cycle_edges.contains(&Edge::new(a, b)) {
                    continue;
                }
                let g = self.dart_face(b, a).expect("reverse dart");
                if !outside[g] {
                    outside[g] = true;
                    queue.push_back(g);
                }
            }
        }
        let mut keep_edges = HashSet::new();
        for (f, walk) in self.faces.iter().enumerate() {
            if outside[f] {
                continue;
            }
            for i in 0..walk.len() {
                keep_edges.insert(Edge::new(walk[i], walk[(i + 1) % walk.len()]));
            }
        }
        if keep_edges.is_empty() {
            // cycle bounds the outer face from the other side only
            return Err(GraphError::NotACycle);
        }
        let mut verts: Vec<VertexId> = keep_edges.iter().flat_map(|e| [e.0, e.1]).collect();
        verts.sort_unstable();
        verts.dedup();
        self.sub_by_edges(&verts, |e| keep_edges.contains(&e), OuterSpec::Cycle(cycle.to_vec()))
    }

    /// Vertices strictly inside `cycle`.
    pub fn interior_of(&self, cycle: &[VertexId]) -> Result<Vec<VertexId>, GraphError> {
        let disk = self.closed_disk(cycle)?;
        let on: HashSet<_> = cycle.iter().copied().collect();
        Ok(disk.to_parent.into_iter().filter(|v| !on.contains(v)).collect())
    }

    /// Removes an edge, keeping vertex ids. An outer edge merges the outer
    /// face with the bounded face behind it.
    pub fn delete_edge(&self, u: VertexId, v: VertexId) -> Result<PlaneGraph, GraphError> {
        if !self.has_edge(u, v) {
            return Err(GraphError::EdgeAbsent(Edge::new(u, v)));
        }
        let mut rot = self.rotations.clone();
        rot[u].retain(|&x| x != v);
        rot[v].retain(|&x| x != u);
        let old_outer = &self.faces[self.outer];
        let k = old_outer.len();
        let dart = (0..k)
            .map(|i| (old_outer[i], old_outer[(i + 1) % k]))
            .find(|&(a, b)| Edge::new(a, b) != Edge::new(u, v));
        let spec = match dart {
            Some((a, b)) => OuterSpec::Dart(a, b),
            None => OuterSpec::Longest,
        };
        PlaneGraph::new(rot, spec)
    }

    /// Removes a vertex set and compacts ids (survivors keep their order).
    pub fn delete_vertices(&self, removed: &[VertexId]) -> Result<Subgraph, GraphError> {
        let mut gone = vec![false; self.n()];
        for &v in removed {
            if v >= self.n() {
                return Err(GraphError::VertexAbsent(v));
            }
            gone[v] = true;
        }
        let keep: Vec<VertexId> = (0..self.n()).filter(|&v| !gone[v]).collect();
        let old_outer = &self.faces[self.outer];
        let k = old_outer.len();
        let spec = (0..k)
            .map(|i| (old_outer[i], old_outer[(i + 1) % k]))
            .find(|&(a, b)| !gone[a] && !gone[b])
            .map(|(a, b)| OuterSpec::Dart(a, b))
            .unwrap_or(OuterSpec::Longest);
        self.sub_by_edges(&keep, |e| !gone[e.0] && !gone[e.1], spec)
    }

    /// Subgraph on `verts` (sorted, distinct) keeping the edges accepted by
    /// `keep`; `outer` is given in this graph's ids.
    fn sub_by_edges(
        &self,
        verts: &[VertexId],
        keep: impl Fn(Edge) -> bool,
        outer: OuterSpec,
    ) -> Result<Subgraph, GraphError> {
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in verts.iter().enumerate() {
            local[v] = i;
        }
        let rotations = verts
            .iter()
            .map(|&v| {
                self.rotations[v]
                    .iter()
                    .filter(|&&w| local[w] != usize::MAX && keep(Edge::new(v, w)))
                    .map(|&w| local[w])
                    .collect()
            })
            .collect();
        let outer = match outer {
            OuterSpec::Longest => OuterSpec::Longest,
            OuterSpec::Dart(a, b) => OuterSpec::Dart(local[a], local[b]),
            OuterSpec::Cycle(c) => OuterSpec::Cycle(c.iter().map(|&v| local[v]).collect()),
        };
        let graph = PlaneGraph::new(rotations, outer)?;
        Ok(Subgraph {
            graph,
            to_parent: verts.to_vec(),
        })
    }

    /// Same embedding under a vertex relabeling `perm[old] = new`.
    pub fn relabel(&self, perm: &[VertexId]) -> PlaneGraph {
        let n = self.n();
        let mut rotations = vec![Vec::new(); n];
        for v in 0..n {
            rotations[perm[v]] = self.rotations[v].iter().map(|&w| perm[w]).collect();
        }
        let walk = &self.faces[self.outer];
        PlaneGraph::new(rotations, OuterSpec::Dart(perm[walk[0]], perm[walk[1 % walk.len()]]))
            .expect("relabeling preserves validity")
    }

    /// Mirror image: every rotation reversed, same outer boundary.
    pub fn mirror(&self) -> PlaneGraph {
        let rotations = self
            .rotations
            .iter()
            .map(|r| r.iter().rev().copied().collect())
            .collect();
        PlaneGraph::new(rotations, OuterSpec::Cycle(self.faces[self.outer].clone())).expect("mirror preserves validity")
    }

    /// Undirected BFS distances from `s`.
    pub fn bfs(&self, s: VertexId) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.rotations[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Diameter of the underlying undirected graph.
    pub fn undirected_diameter(&self) -> usize {
        (0..self.n())
            .map(|s| self.bfs(s).into_iter().max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Edge set as plain pairs, handy for solvers that ignore the embedding.
    pub fn edge_pairs(&self) -> Vec<(VertexId, VertexId)> {
        self.edges().into_iter().map(Edge::endpoints).collect()
    }
}

/// A subgraph together with the ids its vertices carry in the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: PlaneGraph,
    pub to_parent: Vec<VertexId>,
}

impl Subgraph {
    pub fn local_of(&self, parent: VertexId) -> Option<VertexId> {
        self.to_parent.iter().position(|&p| p == parent)
    }
}

fn trace_faces(rotations: &[Vec<VertexId>]) -> (Vec<Vec<VertexId>>, Vec<Vec<FaceId>>) {
    let mut dart_face: Vec<Vec<FaceId>> = rotations.iter().map(|r| vec![usize::MAX; r.len()]).collect();
    let mut faces = Vec::new();
    for u0 in 0..rotations.len() {
        for i0 in 0..rotations[u0].len() {
            if dart_face[u0][i0] != usize::MAX {
                continue;
            }
            let f = faces.len();
            let mut walk = Vec::new();
            let (mut u, mut i) = (u0, i0);
            while dart_face[u][i] == usize::MAX {
                dart_face[u][i] = f;
                walk.push(u);
                let v = rotations[u][i];
                let back = rotations[v].iter().position(|&x| x == u).expect("symmetric");
                let j = (back + 1) % rotations[v].len();
                u = v;
                i = j;
            }
            faces.push(walk);
        }
    }
    (faces, dart_face)
}

/// Cyclic shift of `walk` that is lexicographically smallest.
fn min_rotation(walk: &[VertexId]) -> Vec<VertexId> {
    (0..walk.len())
        .map(|s| walk[s..].iter().chain(&walk[..s]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}
