//! Canonical forms for small graphs.
//!
//! [`graph_canonical_form`] identifies abstract graphs up to isomorphism by
//! colour refinement plus individualisation, taking the smallest adjacency
//! code over all leaves of the search tree. There is no automorphism pruning,
//! which is fine for the sizes used here (n <= 12 or so).
//!
//! [`plane_code`] identifies plane graphs with a distinguished outer face up
//! to orientation-preserving or -reversing homeomorphism.

use std::fmt;

use crate::plane_graph::{PlaneGraph, VertexId};

/// Canonical adjacency code plus the labeling that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub n: usize,
    /// Upper-triangle adjacency bits in canonical order, packed into words.
    pub bits: Vec<u64>,
    /// `labeling[v]` is the canonical position of vertex `v`.
    pub labeling: Vec<usize>,
}

impl CanonicalForm {
    /// Stable textual key, e.g. `4:3f`.
    pub fn key(&self) -> String {
        self.to_string()
    }

    /// Inverse of `labeling`: vertex at each canonical position.
    pub fn order(&self) -> Vec<VertexId> {
        let mut out = vec![0; self.n];
        for (v, &p) in self.labeling.iter().enumerate() {
            out[p] = v;
        }
        out
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.n)?;
        for w in &self.bits {
            write!(f, "{w:016x}")?;
        }
        Ok(())
    }
}

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in edges {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    adj
}

fn refine(adj: &[Vec<bool>], colors: &mut [usize]) {
    let n = colors.len();
    loop {
        let classes_before = count_classes(colors);
        let mut sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = (0..n).filter(|&w| adj[v][w]).map(|w| colors[w]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let mut uniq = sigs.clone();
        uniq.sort();
        uniq.dedup();
        for (v, sig) in sigs.drain(..).enumerate() {
            colors[v] = uniq.binary_search(&sig).expect("present");
        }
        if count_classes(colors) == classes_before {
            return;
        }
    }
}

fn count_classes(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn code_of(adj: &[Vec<bool>], order: &[usize]) -> Vec<u64> {
    let n = order.len();
    let nbits = n * n.saturating_sub(1) / 2;
    let mut bits = vec![0u64; nbits.div_ceil(64).max(1)];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if adj[order[i]][order[j]] {
                bits[k / 64] |= 1 << (63 - (k % 64));
            }
            k += 1;
        }
    }
    bits
}

fn search(adj: &[Vec<bool>], mut colors: Vec<usize>, best: &mut Option<(Vec<u64>, Vec<usize>)>) {
    refine(adj, &mut colors);
    let n = colors.len();
    // first non-singleton cell in colour order
    let mut counts = vec![0usize; n];
    for &c in &colors {
        counts[c] += 1;
    }
    match (0..n).find(|&c| counts[c] > 1) {
        None => {
            let mut order = vec![0; n];
            for (v, &c) in colors.iter().enumerate() {
                order[c] = v;
            }
            let code = code_of(adj, &order);
            if best.as_ref().is_none_or(|(b, _)| code < *b) {
                *best = Some((code, colors));
            }
        }
        Some(cell) => {
            for v in (0..n).filter(|&v| colors[v] == cell) {
                let child: Vec<usize> = (0..n)
                    .map(|w| if w == v { 2 * colors[w] } else { 2 * colors[w] + 1 })
                    .collect();
                search(adj, child, best);
            }
        }
    }
}

/// Canonical form of the simple graph on `0..n` with the given edges.
pub fn graph_canonical_form(n: usize, edges: &[(usize, usize)]) -> CanonicalForm {
    let adj = adjacency(n, edges);
    let mut best = None;
    search(&adj, vec![0; n], &mut best);
    let (bits, labeling) = best.unwrap_or((vec![0], Vec::new()));
    CanonicalForm { n, bits, labeling }
}

pub fn canonical_form(g: &PlaneGraph) -> CanonicalForm {
    graph_canonical_form(g.n(), &g.edge_pairs())
}

/// Rooted traversal code of a rotation system, starting at dart `u -> v`.
fn rooted_code(rot: &[Vec<VertexId>], u: VertexId, v: VertexId) -> Vec<u32> {
    let n = rot.len();
    let mut label = vec![u32::MAX; n];
    let mut refs = vec![0usize; n];
    let mut queue = vec![u];
    label[u] = 0;
    refs[u] = v;
    let mut next = 1u32;
    let mut code = Vec::with_capacity(3 * n);
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let r = &rot[x];
        let start = r.iter().position(|&w| w == refs[x]).expect("ref is a neighbor");
        code.push(r.len() as u32);
        for k in 0..r.len() {
            let w = r[(start + k) % r.len()];
            if label[w] == u32::MAX {
                label[w] = next;
                next += 1;
                refs[w] = x;
                queue.push(w);
            }
            code.push(label[w]);
        }
    }
    code
}

/// Plane-embedding code with the outer face distinguished; mirror images
/// receive the same code.
pub fn plane_code(g: &PlaneGraph) -> Vec<u32> {
    let mut best: Option<Vec<u32>> = None;
    let mirror = g.mirror();
    for h in [g, &mirror] {
        let walk = &h.faces()[h.outer_face()];
        for i in 0..walk.len() {
            let c = rooted_code(h.rotations(), walk[i], walk[(i + 1) % walk.len()]);
            if best.as_ref().is_none_or(|b| c < *b) {
                best = Some(c);
            }
        }
    }
    best.unwrap_or_default()
}

/// Rebuilds `g` with vertices renumbered by their canonical positions.
pub fn canonical_relabel(g: &PlaneGraph) -> (PlaneGraph, CanonicalForm) {
    let cf = canonical_form(g);
    (g.relabel(&cf.labeling), cf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    #[test]
    fn k4_and_k4_minus_differ() {
        let a = canonical_form(&generators::k4());
        let b = canonical_form(&generators::k4_minus());
        assert_ne!(a.key(), b.key());
    }

    #[test]
    fn labeling_is_an_isomorphism_to_the_code() {
        let g = generators::wheel(5);
        let cf = canonical_form(&g);
        let h = g.relabel(&cf.labeling);
        assert_eq!(canonical_form(&h).key(), cf.key());
        // identity labeling on the relabeled graph reproduces the code
        let order: Vec<usize> = (0..h.n()).collect();
        let adj = adjacency(h.n(), &h.edge_pairs());
        assert_eq!(code_of(&adj, &order), cf.bits);
    }

    proptest! {
        #[test]
        fn invariant_under_relabeling(n in 4usize..11, seed in 0u64..500, bias in 0.0f64..1.0) {
            let g = generators::random_near_triangulation(n, seed, bias);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5a5a));
            let h = g.relabel(&perm);
            prop_assert_eq!(canonical_form(&g).key(), canonical_form(&h).key());
            prop_assert_eq!(plane_code(&g), plane_code(&h));
            prop_assert_eq!(plane_code(&g), plane_code(&g.mirror()));
        }
    }
}
