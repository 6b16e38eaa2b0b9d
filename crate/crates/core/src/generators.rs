//! Instance generation: named small graphs, seeded random near
//! triangulations, the tight outerplanar family and exhaustive enumeration.
//!
//! # Enumeration completeness
//!
//! Every 2-connected near triangulation on `n >= 4` vertices reduces to a
//! smaller-or-equal one by one of two inverse moves:
//!
//! * deleting a degree-2 vertex (inverse: attaching an ear to an outer edge),
//! * deleting an outer edge `uw` whose bounded face `uvw` has `v` interior
//!   (inverse: adding the outer chord `uw` over the outer path `u v w`).
//!
//! If neither applies, no interior vertex sits on a facial triangle with an
//! outer edge; with interior vertices present such a graph still has at least
//! three degree-2 vertices, and without interior vertices it is maximal
//! outerplanar and has at least two. The second move keeps `n` and removes an
//! edge, so the reduction terminates at the triangle. [`enumerate`] therefore
//! grows each size from the previous one by ears (plus face splits, which are
//! redundant but cheap) and closes the result under outer chords, keeping one
//! representative per plane embedding class. The tests cross-check the counts
//! against an unrelated brute force over rotation systems.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::canon::{canonical_form, plane_code};
use crate::plane_graph::{OuterSpec, PlaneGraph, VertexId};

pub fn triangle() -> PlaneGraph {
    PlaneGraph::new(vec![vec![1, 2], vec![2, 0], vec![0, 1]], OuterSpec::Dart(0, 1)).expect("triangle")
}

/// K4 drawn with vertex 3 inside the outer triangle 0, 1, 2.
pub fn k4() -> PlaneGraph {
    PlaneGraph::new(
        vec![vec![1, 3, 2], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]],
        OuterSpec::Dart(0, 1),
    )
    .expect("k4")
}

/// K4 minus an edge, drawn as a square 0 1 2 3 with chord 0-2.
pub fn k4_minus() -> PlaneGraph {
    RawEmbedding::polygon_fan(4).build()
}

/// Wheel on `k + 1` vertices: rim `0..k` clockwise, hub `k`.
pub fn wheel(k: usize) -> PlaneGraph {
    assert!(k >= 3);
    let mut rot: Vec<Vec<VertexId>> = (0..k).map(|i| vec![(i + 1) % k, k, (i + k - 1) % k]).collect();
    rot.push((0..k).collect());
    PlaneGraph::new(rot, OuterSpec::Dart(0, 1)).expect("wheel")
}

/// Fan: hub 0 joined to every vertex of the path 1..n-1.
pub fn fan(n: usize) -> PlaneGraph {
    RawEmbedding::polygon_fan(n).build()
}

/// Zig-zag strip on `n >= 3` vertices: edges `i ~ i+1` and `i ~ i+2`.
pub fn snake(n: usize) -> PlaneGraph {
    assert!(n >= 3);
    let mut e = RawEmbedding::triangle();
    // vertex i+1 attaches as an ear on the outer edge {i-1, i}
    for i in 2..n - 1 {
        let (a, b) = (i - 1, i);
        let c = &e.outer;
        let pos = c.iter().position(|&x| x == a).unwrap();
        let k = c.len();
        if c[(pos + 1) % k] == b {
            e.add_ear(pos);
        } else {
            e.add_ear((pos + k - 1) % k);
        }
    }
    e.build()
}

/// Raw rotation system with explicit outer cycle, used while growing graphs.
#[derive(Debug, Clone)]
pub struct RawEmbedding {
    pub rot: Vec<Vec<VertexId>>,
    /// Outer cycle, clockwise.
    pub outer: Vec<VertexId>,
    /// Bounded faces as traced (counterclockwise) triples.
    pub inner: Vec<[VertexId; 3]>,
}

impl RawEmbedding {
    pub fn triangle() -> Self {
        RawEmbedding {
            rot: vec![vec![1, 2], vec![2, 0], vec![0, 1]],
            outer: vec![0, 1, 2],
            inner: vec![[0, 2, 1]],
        }
    }

    pub fn polygon_fan(n: usize) -> Self {
        assert!(n >= 3);
        let mut e = Self::triangle();
        // keep ears on the edge between the newest vertex and vertex 0
        for _ in 3..n {
            let k = e.outer.len();
            e.add_ear(k - 1);
        }
        e
    }

    pub fn from_plane(g: &PlaneGraph) -> Self {
        let outer = g.faces()[g.outer_face()].clone();
        let inner = g
            .faces()
            .iter()
            .enumerate()
            .filter(|(f, _)| *f != g.outer_face())
            .map(|(_, w)| [w[0], w[1], w[2]])
            .collect();
        RawEmbedding {
            rot: g.rotations().to_vec(),
            outer,
            inner,
        }
    }

    pub fn build(&self) -> PlaneGraph {
        PlaneGraph::new(self.rot.clone(), OuterSpec::Dart(self.outer[0], self.outer[1]))
            .expect("growth moves preserve planarity")
    }

    fn insert_after(&mut self, at: VertexId, anchor: VertexId, x: VertexId) {
        let r = &mut self.rot[at];
        let i = r.iter().position(|&w| w == anchor).expect("anchor present");
        r.insert(i + 1, x);
    }

    fn insert_before(&mut self, at: VertexId, anchor: VertexId, x: VertexId) {
        let r = &mut self.rot[at];
        let i = r.iter().position(|&w| w == anchor).expect("anchor present");
        r.insert(i, x);
    }

    /// New vertex adjacent to `outer[i]` and `outer[i+1]`.
    pub fn add_ear(&mut self, i: usize) -> VertexId {
        let k = self.outer.len();
        let (u, w) = (self.outer[i], self.outer[(i + 1) % k]);
        let x = self.rot.len();
        self.rot.push(vec![u, w]);
        self.insert_before(u, w, x);
        self.insert_after(w, u, x);
        self.outer.insert(i + 1, x);
        self.inner.push([u, w, x]);
        x
    }

    /// New vertex inside bounded face `f`, joined to its three corners.
    pub fn split_face(&mut self, f: usize) -> VertexId {
        let [a, b, c] = self.inner[f];
        let x = self.rot.len();
        self.insert_after(b, a, x);
        self.insert_after(c, b, x);
        self.insert_after(a, c, x);
        self.rot.push(vec![a, c, b]);
        self.inner[f] = [a, b, x];
        self.inner.push([b, c, x]);
        self.inner.push([c, a, x]);
        x
    }

    /// Whether the outer chord over `outer[i+1]` can be added.
    pub fn can_add_chord(&self, i: usize) -> bool {
        let k = self.outer.len();
        if k < 4 {
            return false;
        }
        let (u, w) = (self.outer[i], self.outer[(i + 2) % k]);
        !self.rot[u].contains(&w)
    }

    /// Adds the chord `outer[i] outer[i+2]` outside, burying `outer[i+1]`.
    pub fn add_chord(&mut self, i: usize) {
        let k = self.outer.len();
        let (p, u, x, w) = (
            self.outer[(i + k - 1) % k],
            self.outer[i],
            self.outer[(i + 1) % k],
            self.outer[(i + 2) % k],
        );
        self.insert_after(u, p, w);
        self.insert_after(w, x, u);
        self.inner.push([u, x, w]);
        self.outer.remove((i + 1) % k);
    }
}

/// Random 2-connected near triangulation on `n` vertices. Each step splits a
/// random bounded face with probability `interior_bias`, otherwise attaches an
/// ear to a random outer edge.
pub fn random_near_triangulation(n: usize, seed: u64, interior_bias: f64) -> PlaneGraph {
    assert!(n >= 3, "need at least three vertices");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut e = RawEmbedding::triangle();
    while e.rot.len() < n {
        if rng.gen::<f64>() < interior_bias {
            let f = rng.gen_range(0..e.inner.len());
            e.split_face(f);
        } else {
            let i = rng.gen_range(0..e.outer.len());
            e.add_ear(i);
        }
    }
    e.build()
}

/// Random maximal outerplanar graph (random ear sequence).
pub fn random_maximal_outerplanar(n: usize, seed: u64) -> PlaneGraph {
    random_near_triangulation(n, seed, 0.0)
}

/// Triangle 0, 1, 2 with an ear on each side.
pub fn sun() -> PlaneGraph {
    let mut e = RawEmbedding::triangle();
    for i in [0, 2, 4] {
        e.add_ear(i);
    }
    e.build()
}

/// Maximal outerplanar graph whose oriented diameter is `ceil(n/2)`.
/// This is the zig-zag strip, except at n = 6 where the strip is itself an
/// exception (diameter 4) and the sun is used instead. Exact search confirms
/// attainment for 5 <= n <= 14 in the test suite.
pub fn tight_family(n: usize) -> PlaneGraph {
    assert!(n >= 5, "tight family starts at n = 5");
    if n == 6 {
        sun()
    } else {
        snake(n)
    }
}

/// Plane embedding classes (outer face distinguished, mirrors identified) of
/// 2-connected near triangulations on exactly `n` vertices.
pub fn enumerate_embeddings(n: usize) -> Vec<PlaneGraph> {
    assert!(n >= 3);
    let mut level = vec![RawEmbedding::triangle()];
    for _ in 4..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        let push = |e: RawEmbedding, seen: &mut HashSet<Vec<u32>>, next: &mut Vec<RawEmbedding>| {
            let g = e.build();
            if seen.insert(plane_code(&g)) {
                next.push(RawEmbedding::from_plane(&g));
            }
        };
        for base in &level {
            for i in 0..base.outer.len() {
                let mut e = base.clone();
                e.add_ear(i);
                push(e, &mut seen, &mut next);
            }
            for f in 0..base.inner.len() {
                let mut e = base.clone();
                e.split_face(f);
                push(e, &mut seen, &mut next);
            }
        }
        // close under outer chords (same vertex count)
        let mut head = 0;
        while head < next.len() {
            let base = next[head].clone();
            head += 1;
            for i in 0..base.outer.len() {
                if base.can_add_chord(i) {
                    let mut e = base.clone();
                    e.add_chord(i);
                    push(e, &mut seen, &mut next);
                }
            }
        }
        level = next;
    }
    level.iter().map(RawEmbedding::build).collect()
}

/// Every 2-connected near triangulation on `n` vertices, once per
/// isomorphism class of the underlying graph, in canonical-key order.
pub fn enumerate(n: usize) -> Vec<PlaneGraph> {
    let mut by_key: HashMap<String, PlaneGraph> = HashMap::new();
    for g in enumerate_embeddings(n) {
        by_key.entry(canonical_form(&g).key()).or_insert(g);
    }
    let mut out: Vec<(String, PlaneGraph)> = by_key.into_iter().collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, g)| g).collect()
}
