//! Orientations and their distance metrics.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::plane_graph::{Edge, PlaneGraph, VertexId};

/// A hop distance or diameter; `Infinite` when some vertex is unreachable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(u32),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<u32> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrientationError {
    #[error("arc {0}->{1} is a loop or out of range")]
    BadArc(usize, usize),
    #[error("edge {0} is oriented twice")]
    Duplicate(Edge),
    #[error("edge {0} has no direction")]
    MissingEdge(Edge),
    #[error("arc on {0} is not an edge of the graph")]
    ExtraArc(Edge),
    #[error("orientation is not strongly connected")]
    NotStrong,
    #[error("orientations disagree on a shared edge and reversal is not allowed")]
    IncompatibleOnSharedEdges,
    #[error("shared edges disagree under both polarities")]
    OverlapTooLarge,
}

/// Direction assignment for the edges of a simple graph on `0..n`.
///
/// Arcs are kept sorted by their underlying edge, so two orientations of the
/// same graph compare equal exactly when every edge points the same way.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Orientation {
    n: usize,
    arcs: Vec<(VertexId, VertexId)>,
}

impl Orientation {
    pub fn new(n: usize, mut arcs: Vec<(VertexId, VertexId)>) -> Result<Self, OrientationError> {
        for &(u, v) in &arcs {
            if u == v || u >= n || v >= n {
                return Err(OrientationError::BadArc(u, v));
            }
        }
        arcs.sort_by_key(|&(u, v)| Edge::new(u, v));
        for w in arcs.windows(2) {
            if Edge::new(w[0].0, w[0].1) == Edge::new(w[1].0, w[1].1) {
                return Err(OrientationError::Duplicate(Edge::new(w[0].0, w[0].1)));
            }
        }
        Ok(Orientation { n, arcs })
    }

    /// Orientation of `g`; every edge must be covered exactly once.
    pub fn for_graph(g: &PlaneGraph, arcs: Vec<(VertexId, VertexId)>) -> Result<Self, OrientationError> {
        let d = Orientation::new(g.n(), arcs)?;
        d.check_covers(g)?;
        Ok(d)
    }

    /// Fails with the first edge that is missing or foreign.
    pub fn check_covers(&self, g: &PlaneGraph) -> Result<(), OrientationError> {
        if self.n != g.n() {
            return Err(OrientationError::BadArc(self.n, g.n()));
        }
        let edges = g.edges();
        let mine: Vec<Edge> = self.arcs.iter().map(|&(u, v)| Edge::new(u, v)).collect();
        let (mut i, mut j) = (0, 0);
        while i < edges.len() || j < mine.len() {
            match (edges.get(i), mine.get(j)) {
                (Some(a), Some(b)) if a == b => {
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a < b => return Err(OrientationError::MissingEdge(*a)),
                (Some(a), None) => return Err(OrientationError::MissingEdge(*a)),
                (_, Some(b)) => return Err(OrientationError::ExtraArc(*b)),
                (None, None) => unreachable!(),
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(VertexId, VertexId)] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Direction of edge `{u, v}` as `(tail, head)`, if present.
    pub fn direction(&self, u: VertexId, v: VertexId) -> Option<(VertexId, VertexId)> {
        let e = Edge::new(u, v);
        self.arcs
            .binary_search_by_key(&e, |&(a, b)| Edge::new(a, b))
            .ok()
            .map(|i| self.arcs[i])
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.direction(u, v) == Some((u, v))
    }

    pub fn reverse(&self) -> Orientation {
        Orientation {
            n: self.n,
            arcs: self.arcs.iter().map(|&(u, v)| (v, u)).collect(),
        }
    }

    /// Moves every vertex `v` to `map[v]` in a graph on `new_n` vertices.
    pub fn relabel(&self, map: &[VertexId], new_n: usize) -> Orientation {
        let arcs = self.arcs.iter().map(|&(u, v)| (map[u], map[v])).collect();
        Orientation::new(new_n, arcs).expect("injective relabeling")
    }

    /// Adds arcs for edges not yet oriented.
    pub fn extended(&self, extra: &[(VertexId, VertexId)]) -> Result<Orientation, OrientationError> {
        let mut arcs = self.arcs.clone();
        arcs.extend_from_slice(extra);
        Orientation::new(self.n, arcs)
    }

    /// Drops the given vertices and the arcs touching them; survivors keep
    /// their relative order.
    pub fn restrict(&self, keep: &[VertexId]) -> Orientation {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            local[v] = i;
        }
        let arcs = self
            .arcs
            .iter()
            .filter(|&&(u, v)| local[u] != usize::MAX && local[v] != usize::MAX)
            .map(|&(u, v)| (local[u], local[v]))
            .collect();
        Orientation::new(keep.len(), arcs).expect("restriction of a valid orientation")
    }

    pub fn out_adjacency(&self) -> Vec<Vec<VertexId>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.arcs {
            adj[u].push(v);
        }
        adj
    }

    pub fn in_adjacency(&self) -> Vec<Vec<VertexId>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.arcs {
            adj[v].push(u);
        }
        adj
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.arcs.iter().filter(|a| a.0 == v).count()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.arcs.iter().filter(|a| a.1 == v).count()
    }
}

fn bfs(adj: &[Vec<VertexId>], s: VertexId) -> Vec<Option<u32>> {
    let mut dist = vec![None; adj.len()];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &v in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Directed distances from `s`.
pub fn distances_from(d: &Orientation, s: VertexId) -> Vec<Option<u32>> {
    bfs(&d.out_adjacency(), s)
}

/// Directed distances to `t`.
pub fn distances_to(d: &Orientation, t: VertexId) -> Vec<Option<u32>> {
    bfs(&d.in_adjacency(), t)
}

/// All-pairs distance matrix, `dist[u][v]` = d(u, v).
pub fn all_pairs(d: &Orientation) -> Vec<Vec<Option<u32>>> {
    let adj = d.out_adjacency();
    (0..d.n).map(|s| bfs(&adj, s)).collect()
}

/// Maximum directed distance over ordered pairs.
pub fn diameter(d: &Orientation) -> Distance {
    let adj = d.out_adjacency();
    let mut best = 0;
    for s in 0..d.n {
        for x in bfs(&adj, s) {
            match x {
                Some(x) => best = best.max(x),
                None => return Distance::Infinite,
            }
        }
    }
    Distance::Finite(best)
}

/// One forward and one backward sweep from vertex 0.
pub fn is_strongly_connected(d: &Orientation) -> bool {
    if d.n == 0 {
        return true;
    }
    distances_from(d, 0).iter().all(Option::is_some) && distances_to(d, 0).iter().all(Option::is_some)
}

/// `max_u max(d(u, v), d(v, u))`.
pub fn anchored_ecc(d: &Orientation, v: VertexId) -> Result<u32, OrientationError> {
    let fwd = distances_from(d, v);
    let bwd = distances_to(d, v);
    let mut best = 0;
    for (a, b) in fwd.into_iter().zip(bwd) {
        match (a, b) {
            (Some(a), Some(b)) => best = best.max(a).max(b),
            _ => return Err(OrientationError::NotStrong),
        }
    }
    Ok(best)
}

/// First vertex with no outgoing or no incoming arc, if any.
pub fn find_sink_or_source(d: &Orientation) -> Option<(VertexId, &'static str)> {
    let out = d.out_adjacency();
    let inn = d.in_adjacency();
    (0..d.n).find_map(|v| {
        if out[v].is_empty() {
            Some((v, "sink"))
        } else if inn[v].is_empty() {
            Some((v, "source"))
        } else {
            None
        }
    })
}

/// Union of two orientations over a common vertex space. When they disagree
/// on shared edges and `allow_reverse` is set, `d2` is reversed wholesale.
/// Returns the union and whether `d2` was reversed.
pub fn combine(
    d1: &Orientation,
    d2: &Orientation,
    allow_reverse: bool,
) -> Result<(Orientation, bool), OrientationError> {
    let n = d1.n.max(d2.n);
    let first: HashMap<Edge, (VertexId, VertexId)> = d1.arcs.iter().map(|&(u, v)| (Edge::new(u, v), (u, v))).collect();
    let (mut agree, mut disagree) = (0usize, 0usize);
    for &(u, v) in &d2.arcs {
        match first.get(&Edge::new(u, v)) {
            Some(&a) if a == (u, v) => agree += 1,
            Some(_) => disagree += 1,
            None => {}
        }
    }
    let reversed = match (agree, disagree) {
        (_, 0) => false,
        (0, _) if allow_reverse => true,
        (_, _) if !allow_reverse => return Err(OrientationError::IncompatibleOnSharedEdges),
        _ => return Err(OrientationError::OverlapTooLarge),
    };
    let second = if reversed { d2.reverse() } else { d2.clone() };
    let mut arcs = d1.arcs.clone();
    arcs.extend(
        second
            .arcs
            .iter()
            .filter(|&&(u, v)| !first.contains_key(&Edge::new(u, v))),
    );
    Ok((Orientation::new(n, arcs)?, reversed))
}

/// Independent re-check of an orientation against a graph and a bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub orientation: Orientation,
    pub diameter: Distance,
    pub strongly_connected: bool,
    /// `ceil(n / 2)`.
    pub bound: u32,
    pub exception: bool,
    pub trace: Vec<String>,
}

pub fn ceil_half(n: usize) -> u32 {
    n.div_ceil(2) as u32
}

impl Certificate {
    /// Recomputes every field from scratch.
    pub fn build(
        g: &PlaneGraph,
        orientation: Orientation,
        exception: bool,
        trace: Vec<String>,
    ) -> Result<Self, OrientationError> {
        orientation.check_covers(g)?;
        let diameter = diameter(&orientation);
        Ok(Certificate {
            strongly_connected: diameter.is_finite(),
            diameter,
            bound: ceil_half(g.n()),
            exception,
            orientation,
            trace,
        })
    }

    /// True if the recorded numbers match a fresh computation on `g` and
    /// the bound holds (or the graph is flagged exceptional).
    pub fn verify(&self, g: &PlaneGraph) -> bool {
        if self.orientation.check_covers(g).is_err() {
            return false;
        }
        let diam = diameter(&self.orientation);
        diam == self.diameter
            && self.strongly_connected == diam.is_finite()
            && self.bound == ceil_half(g.n())
            && self.within_bound()
    }

    pub fn within_bound(&self) -> bool {
        match self.diameter {
            Distance::Finite(d) => self.exception || d <= self.bound,
            Distance::Infinite => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn directed_triangle() -> Orientation {
        Orientation::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn random_orientation(g: &PlaneGraph, seed: u64) -> Orientation {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let arcs = g
            .edge_pairs()
            .into_iter()
            .map(|(u, v)| if rng.gen() { (u, v) } else { (v, u) })
            .collect();
        Orientation::for_graph(g, arcs).unwrap()
    }

    #[test]
    fn triangle_metrics() {
        let d = directed_triangle();
        assert_eq!(diameter(&d), Distance::Finite(2));
        assert!(is_strongly_connected(&d));
        for v in 0..3 {
            assert_eq!(anchored_ecc(&d, v), Ok(2));
        }
        let r = d.reverse();
        assert!(r.has_arc(1, 0) && r.has_arc(2, 1) && r.has_arc(0, 2));
    }

    #[test]
    fn sink_means_infinite() {
        let d = Orientation::new(3, vec![(1, 0), (2, 1), (2, 0)]).unwrap();
        assert_eq!(diameter(&d), Distance::Infinite);
        assert_eq!(find_sink_or_source(&d), Some((0, "sink")));
        assert_eq!(anchored_ecc(&d, 0), Err(OrientationError::NotStrong));
    }

    #[test]
    fn opposing_paths_on_a_square_are_not_strong() {
        let d = Orientation::new(4, vec![(0, 1), (1, 2), (0, 3), (3, 2)]).unwrap();
        assert!(!is_strongly_connected(&d));
    }

    #[test]
    fn combine_two_triangles() {
        // triangles 0 1 2 and 0 2 3 share edge {0, 2}
        let a = directed_triangle();
        let b = Orientation::new(4, vec![(2, 0), (0, 3), (3, 2)]).unwrap();
        let (u, rev) = combine(&a, &b, false).unwrap();
        assert!(!rev);
        assert_eq!(u.arc_count(), 5);
        assert!(is_strongly_connected(&u));

        let flipped = b.reverse();
        assert_eq!(
            combine(&a, &flipped, false),
            Err(OrientationError::IncompatibleOnSharedEdges)
        );
        let (u2, rev2) = combine(&a, &flipped, true).unwrap();
        assert!(rev2);
        assert_eq!(u2, u);
    }

    #[test]
    fn combine_mixed_overlap_fails_both_ways() {
        let a = Orientation::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let b = Orientation::new(4, vec![(0, 1), (2, 1)]).unwrap();
        assert_eq!(combine(&a, &b, true), Err(OrientationError::OverlapTooLarge));
    }

    #[test]
    fn coverage_errors_name_the_edge() {
        let g = generators::triangle();
        let e = Orientation::for_graph(&g, vec![(0, 1), (1, 2)]).unwrap_err();
        assert_eq!(e, OrientationError::MissingEdge(Edge::new(0, 2)));
        let dup = Orientation::new(3, vec![(0, 1), (1, 0)]).unwrap_err();
        assert_eq!(dup, OrientationError::Duplicate(Edge::new(0, 1)));
    }

    #[test]
    fn reverse_involution_and_diameter() {
        let mut strong = 0;
        for seed in 0..200u64 {
            let g = generators::random_near_triangulation(8 + (seed % 5) as usize, seed, 0.5);
            let d = random_orientation(&g, seed);
            assert_eq!(d.reverse().reverse(), d);
            assert_eq!(diameter(&d.reverse()), diameter(&d));
            if is_strongly_connected(&d) {
                strong += 1;
            }
        }
        assert!(strong >= 10, "only {strong} strong orientations sampled");
    }

    proptest! {
        #[test]
        fn metric_sandwich(n in 4usize..14, seed in 0u64..10_000, bias in 0.0f64..1.0) {
            let g = generators::random_near_triangulation(n, seed, bias);
            let d = random_orientation(&g, seed.wrapping_mul(31));
            let diam = diameter(&d);
            prop_assert!(diam >= Distance::Finite(g.undirected_diameter() as u32));
            prop_assert_eq!(is_strongly_connected(&d), diam.is_finite());
            if let Distance::Finite(k) = diam {
                for v in 0..n {
                    let a = anchored_ecc(&d, v).unwrap();
                    prop_assert!(a <= k && k <= 2 * a);
                }
            }
        }
    }
}
