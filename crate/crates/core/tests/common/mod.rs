//! Independent enumeration oracle for small n.
//!
//! Brute force over every labeled graph on n vertices and every rotation
//! system: a graph counts when it is 2-connected and some rotation system is
//! planar (Euler's formula on traced faces) with at most one face that is not
//! a triangle. Classes are compared by permutation-minimal edge masks, so
//! nothing from the library's own canonical form is trusted here.

use std::collections::BTreeSet;

use orient_nt::PlaneGraph;

fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            out.push((u, v));
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub struct Labeled {
    n: usize,
    pairs: Vec<(usize, usize)>,
    index: Vec<Vec<usize>>,
    perms: Vec<Vec<usize>>,
}

impl Labeled {
    pub fn new(n: usize) -> Self {
        let pairs = pairs(n);
        let mut index = vec![vec![usize::MAX; n]; n];
        for (i, &(u, v)) in pairs.iter().enumerate() {
            index[u][v] = i;
            index[v][u] = i;
        }
        Labeled {
            n,
            pairs,
            index,
            perms: permutations(n),
        }
    }

    fn canon(&self, mask: u32) -> u32 {
        let mut best = u32::MAX;
        for p in &self.perms {
            let mut m = 0u32;
            for (i, &(u, v)) in self.pairs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    m |= 1 << self.index[p[u]][p[v]];
                }
            }
            best = best.min(m);
        }
        best
    }

    fn adjacency(&self, mask: u32) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, &(u, v)) in self.pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        adj
    }
}

fn connected_without(adj: &[Vec<usize>], skip: Option<usize>) -> bool {
    let n = adj.len();
    let start = (0..n).find(|&v| Some(v) != skip).unwrap();
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if Some(w) != skip && !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n - skip.is_some() as usize
}

fn two_connected(adj: &[Vec<usize>]) -> bool {
    connected_without(adj, None) && (0..adj.len()).all(|v| connected_without(adj, Some(v)))
}

/// Face lengths of the rotation system `rot`.
fn face_lengths(rot: &[Vec<usize>]) -> Vec<usize> {
    let n = rot.len();
    let mut pos = vec![vec![usize::MAX; n]; n];
    for v in 0..n {
        for (i, &w) in rot[v].iter().enumerate() {
            pos[v][w] = i;
        }
    }
    let mut used = vec![vec![false; n]; n];
    let mut out = Vec::new();
    for u in 0..n {
        for &v in &rot[u] {
            if used[u][v] {
                continue;
            }
            let (mut a, mut b) = (u, v);
            let mut len = 0;
            while !used[a][b] {
                used[a][b] = true;
                len += 1;
                let d = rot[b].len();
                let c = rot[b][(pos[b][a] + 1) % d];
                a = b;
                b = c;
            }
            out.push(len);
        }
    }
    out
}

fn embeds_as_near_triangulation(adj: &[Vec<usize>]) -> bool {
    let n = adj.len();
    let m: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
    // first neighbor fixed, the rest permuted
    let choices: Vec<Vec<Vec<usize>>> = adj
        .iter()
        .map(|nb| {
            permutations(nb.len() - 1)
                .into_iter()
                .map(|p| std::iter::once(nb[0]).chain(p.into_iter().map(|i| nb[i + 1])).collect())
                .collect()
        })
        .collect();
    let mut idx = vec![0usize; n];
    loop {
        let rot: Vec<Vec<usize>> = (0..n).map(|v| choices[v][idx[v]].clone()).collect();
        let faces = face_lengths(&rot);
        if faces.len() + n == m + 2 && faces.iter().filter(|&&l| l != 3).count() <= 1 {
            return true;
        }
        let mut v = 0;
        loop {
            if v == n {
                return false;
            }
            idx[v] += 1;
            if idx[v] < choices[v].len() {
                break;
            }
            idx[v] = 0;
            v += 1;
        }
    }
}

pub fn brute_force_classes(lab: &Labeled) -> BTreeSet<u32> {
    let n = lab.n;
    let e = lab.pairs.len();
    let mut candidates = BTreeSet::new();
    for mask in 0u32..1 << e {
        let m = mask.count_ones() as usize;
        if m < 2 * n - 3 || m > 3 * n - 6 {
            continue;
        }
        let adj = lab.adjacency(mask);
        if adj.iter().any(|nb| nb.len() < 2) || !two_connected(&adj) {
            continue;
        }
        candidates.insert(lab.canon(mask));
    }
    candidates
        .into_iter()
        .filter(|&c| embeds_as_near_triangulation(&lab.adjacency(c)))
        .collect()
}

/// Permutation-minimal edge masks of `graphs`.
pub fn classes_of(lab: &Labeled, graphs: &[PlaneGraph]) -> BTreeSet<u32> {
    graphs
        .iter()
        .map(|g| {
            let mut mask = 0u32;
            for edge in g.edges() {
                let (u, v) = edge.endpoints();
                mask |= 1 << lab.index[u][v];
            }
            lab.canon(mask)
        })
        .collect()
}
