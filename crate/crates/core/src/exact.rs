//! Exact oriented diameter by branch and bound over edge directions.
//!
//! Edges are branched in order of decreasing edge betweenness. At every node
//! the unassigned edges are treated as two-way streets; if some ordered pair
//! is then still farther apart than the incumbent allows, no completion can
//! do better and the subtree is cut. A vertex whose edges are all assigned
//! and all point the same way is cut immediately. The first edge is pinned,
//! since reversing an orientation preserves its diameter.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::digraph::{self, Orientation};
use crate::plane_graph::{Edge, PlaneGraph, VertexId};

/// Limits for one search. `None` means unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: Option<u64>,
    pub time_limit: Option<Duration>,
    /// Stop as soon as an orientation with diameter at most this is found.
    pub target_bound: Option<u32>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes: Some(max_nodes),
            ..Self::default()
        }
    }

    pub fn with_target(mut self, target: u32) -> Self {
        self.target_bound = Some(target);
        self
    }

    fn validate(&self) -> Result<(), ExactError> {
        if self.max_nodes == Some(0) || self.time_limit == Some(Duration::ZERO) {
            return Err(ExactError::InvalidBudget);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactOutcome {
    pub value: u32,
    pub witness: Orientation,
    /// Search-tree nodes visited.
    pub nodes: u64,
    /// False when the search stopped at `target_bound` without proving optimality.
    pub proven_optimal: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("edge {0} is a bridge; no strong orientation exists")]
    HasBridge(Edge),
    #[error("search budget exhausted after {nodes} nodes (lower bound {lower_bound})")]
    BudgetExhausted {
        incumbent: Option<(u32, Orientation)>,
        lower_bound: u32,
        nodes: u64,
    },
    #[error("no strong orientation meets the anchor bound")]
    Infeasible,
    #[error("search budget limits must be positive")]
    InvalidBudget,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("graph needs at least two vertices")]
    TooSmall,
}

/// Bridge of the simple graph `(n, edges)`, if any.
pub fn find_bridge(n: usize, edges: &[(VertexId, VertexId)]) -> Option<Edge> {
    let mut adj = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, i));
        adj[v].push((u, i));
    }
    let mut disc = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    let mut time = 0;
    for root in 0..n {
        if disc[root] != u32::MAX {
            continue;
        }
        // iterative DFS: (vertex, parent edge, next adjacency index)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        disc[root] = time;
        low[root] = time;
        time += 1;
        while let Some(&mut (u, pe, ref mut i)) = stack.last_mut() {
            if *i < adj[u].len() {
                let (v, e) = adj[u][*i];
                *i += 1;
                if e == pe {
                    continue;
                }
                if disc[v] == u32::MAX {
                    disc[v] = time;
                    low[v] = time;
                    time += 1;
                    stack.push((v, e, 0));
                } else {
                    low[u] = low[u].min(disc[v]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[u]);
                    if low[u] > disc[p] {
                        let (a, b) = edges[pe];
                        return Some(Edge::new(a, b));
                    }
                }
            }
        }
    }
    None
}

/// Brandes edge betweenness on the unweighted undirected graph.
fn edge_betweenness(n: usize, edges: &[(VertexId, VertexId)]) -> Vec<f64> {
    let mut adj = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, i));
        adj[v].push((u, i));
    }
    let mut score = vec![0.0; edges.len()];
    for s in 0..n {
        let mut order = Vec::with_capacity(n);
        let mut dist = vec![usize::MAX; n];
        let mut sigma = vec![0.0f64; n];
        dist[s] = 0;
        sigma[s] = 1.0;
        let mut head = 0;
        order.push(s);
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &(v, _) in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    order.push(v);
                }
                if dist[v] == dist[u] + 1 {
                    sigma[v] += sigma[u];
                }
            }
        }
        let mut delta = vec![0.0f64; n];
        for &w in order.iter().rev() {
            for &(v, e) in &adj[w] {
                if dist[v] != usize::MAX && dist[v] + 1 == dist[w] {
                    let c = sigma[v] / sigma[w] * (1.0 + delta[w]);
                    score[e] += c;
                    delta[v] += c;
                }
            }
        }
    }
    score
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Minimize,
    /// Collect every orientation within the fixed limit.
    Enumerate,
}

struct Search<'a> {
    n: usize,
    /// Edges in branching order.
    edges: Vec<(VertexId, VertexId)>,
    /// Per vertex: (edge index, neighbor).
    inc: Vec<Vec<(usize, VertexId)>>,
    /// +1: edges[i].0 -> edges[i].1, -1: reverse, 0: unset.
    dir: Vec<i8>,
    unset_at: Vec<u32>,
    out_at: Vec<u32>,
    in_at: Vec<u32>,
    anchor: Option<(VertexId, u32)>,
    /// Current cap on every pairwise distance.
    limit: u32,
    lower_bound: u32,
    mode: Mode,
    budget: &'a SearchBudget,
    started: Instant,
    nodes: u64,
    exhausted: bool,
    done: bool,
    best: Option<(u32, Vec<i8>)>,
    found: Vec<Vec<i8>>,
    fix_first: bool,
    target_stop: bool,
    dist: Vec<u32>,
    queue: Vec<VertexId>,
}

impl<'a> Search<'a> {
    fn new(
        n: usize,
        raw_edges: &[(VertexId, VertexId)],
        anchor: Option<(VertexId, u32)>,
        limit: u32,
        mode: Mode,
        budget: &'a SearchBudget,
    ) -> Self {
        let score = edge_betweenness(n, raw_edges);
        let mut idx: Vec<usize> = (0..raw_edges.len()).collect();
        idx.sort_by(|&a, &b| score[b].total_cmp(&score[a]).then(a.cmp(&b)));
        let edges: Vec<_> = idx.iter().map(|&i| raw_edges[i]).collect();
        let mut inc = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            inc[u].push((i, v));
            inc[v].push((i, u));
        }
        let unset_at = inc.iter().map(|l| l.len() as u32).collect();
        Search {
            n,
            dir: vec![0; edges.len()],
            edges,
            inc,
            unset_at,
            out_at: vec![0; n],
            in_at: vec![0; n],
            anchor,
            limit,
            lower_bound: 0,
            mode,
            budget,
            started: Instant::now(),
            nodes: 0,
            exhausted: false,
            done: false,
            best: None,
            found: Vec::new(),
            fix_first: true,
            target_stop: false,
            dist: vec![0; n],
            queue: Vec::with_capacity(n),
        }
    }

    fn assign(&mut self, e: usize, d: i8) {
        let (u, v) = self.edges[e];
        let (t, h) = if d > 0 { (u, v) } else { (v, u) };
        self.dir[e] = d;
        self.unset_at[u] -= 1;
        self.unset_at[v] -= 1;
        self.out_at[t] += 1;
        self.in_at[h] += 1;
    }

    fn unassign(&mut self, e: usize) {
        let (u, v) = self.edges[e];
        let (t, h) = if self.dir[e] > 0 { (u, v) } else { (v, u) };
        self.dir[e] = 0;
        self.unset_at[u] += 1;
        self.unset_at[v] += 1;
        self.out_at[t] -= 1;
        self.in_at[h] -= 1;
    }

    fn locally_ok(&self, v: VertexId) -> bool {
        self.unset_at[v] > 0 || (self.out_at[v] > 0 && self.in_at[v] > 0)
    }

    /// BFS over the optimistic digraph; `None` if a distance exceeds `cap`
    /// or a vertex is unreachable, else the farthest distance.
    fn sweep(&mut self, s: VertexId, cap: u32, forward: bool) -> Option<u32> {
        self.dist.iter_mut().for_each(|d| *d = u32::MAX);
        self.queue.clear();
        self.dist[s] = 0;
        self.queue.push(s);
        let mut head = 0;
        let mut far = 0;
        while head < self.queue.len() {
            let x = self.queue[head];
            head += 1;
            let dx = self.dist[x];
            for &(e, y) in &self.inc[x] {
                if self.dist[y] != u32::MAX {
                    continue;
                }
                let d = self.dir[e];
                let from_x = if self.edges[e].0 == x { d >= 0 } else { d <= 0 };
                let usable = if forward { from_x } else { d == 0 || !from_x };
                if usable {
                    if dx + 1 > cap {
                        return None;
                    }
                    self.dist[y] = dx + 1;
                    far = dx + 1;
                    self.queue.push(y);
                }
            }
        }
        if self.queue.len() < self.n {
            return None;
        }
        Some(far)
    }

    fn feasible(&mut self) -> Option<u32> {
        let mut worst = 0;
        if let Some((v, a)) = self.anchor {
            let cap = a.min(self.limit);
            self.sweep(v, cap, true)?;
            self.sweep(v, cap, false)?;
        }
        for s in 0..self.n {
            worst = worst.max(self.sweep(s, self.limit, true)?);
        }
        Some(worst)
    }

    fn out_of_budget(&mut self) -> bool {
        if let Some(m) = self.budget.max_nodes {
            if self.nodes >= m {
                self.exhausted = true;
            }
        }
        if self.nodes.is_multiple_of(256) {
            if let Some(t) = self.budget.time_limit {
                if self.started.elapsed() >= t {
                    self.exhausted = true;
                }
            }
        }
        self.exhausted
    }

    fn dfs(&mut self, depth: usize) {
        if self.done || self.out_of_budget() {
            return;
        }
        self.nodes += 1;
        if depth == self.edges.len() {
            let Some(diam) = self.feasible() else { return };
            match self.mode {
                Mode::Enumerate => self.found.push(self.dir.clone()),
                Mode::Minimize => {
                    self.best = Some((diam, self.dir.clone()));
                    if diam == 0 {
                        self.done = true;
                        return;
                    }
                    self.limit = diam - 1;
                    let target_hit = self.budget.target_bound.is_some_and(|t| diam <= t);
                    if diam <= self.lower_bound {
                        self.done = true;
                    } else if target_hit {
                        self.done = true;
                        self.target_stop = true;
                    }
                }
            }
            return;
        }
        let choices: &[i8] = if depth == 0 && self.fix_first { &[1] } else { &[1, -1] };
        for &d in choices {
            self.assign(depth, d);
            let (u, v) = self.edges[depth];
            if self.locally_ok(u) && self.locally_ok(v) && self.feasible().is_some() {
                self.dfs(depth + 1);
            }
            self.unassign(depth);
            if self.done || self.exhausted {
                return;
            }
        }
    }

    fn orientation(&self, dir: &[i8]) -> Orientation {
        let arcs = self
            .edges
            .iter()
            .zip(dir)
            .map(|(&(u, v), &d)| if d > 0 { (u, v) } else { (v, u) })
            .collect();
        Orientation::new(self.n, arcs).expect("search assigns each edge once")
    }
}

fn undirected_lower_bound(n: usize, edges: &[(VertexId, VertexId)]) -> u32 {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut best = 0;
    for s in 0..n {
        let mut dist = vec![u32::MAX; n];
        dist[s] = 0;
        let mut q = std::collections::VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &v in &adj[u] {
                if dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    q.push_back(v);
                }
            }
        }
        best = best.max(dist.into_iter().max().unwrap_or(0));
    }
    best
}

fn run_minimize(
    n: usize,
    edges: &[(VertexId, VertexId)],
    anchor: Option<(VertexId, u32)>,
    budget: &SearchBudget,
) -> Result<ExactOutcome, ExactError> {
    budget.validate()?;
    if n < 2 {
        return Err(ExactError::TooSmall);
    }
    if let Some((v, _)) = anchor {
        if v >= n {
            return Err(ExactError::VertexOutOfRange(v));
        }
    }
    if let Some(b) = find_bridge(n, edges) {
        return Err(ExactError::HasBridge(b));
    }
    let lower_bound = undirected_lower_bound(n, edges);
    // every strong orientation has diameter below n
    let mut s = Search::new(n, edges, anchor, n as u32, Mode::Minimize, budget);
    s.lower_bound = lower_bound;
    if let Some(t) = budget.target_bound {
        // feasibility pass: prune at the target straight away
        s.limit = t.max(lower_bound).min(n as u32);
        s.dfs(0);
        if s.best.is_none() && !s.exhausted {
            let (spent, started) = (s.nodes, s.started);
            s = Search::new(n, edges, anchor, n as u32, Mode::Minimize, budget);
            s.lower_bound = lower_bound;
            s.nodes = spent;
            s.started = started;
            s.dfs(0);
        }
    } else {
        s.dfs(0);
    }
    let best = s.best.take().map(|(v, dir)| (v, s.orientation(&dir)));
    if s.exhausted {
        return Err(ExactError::BudgetExhausted {
            incumbent: best,
            lower_bound,
            nodes: s.nodes,
        });
    }
    match best {
        Some((value, witness)) => {
            let proven_optimal = !s.target_stop;
            debug_assert_eq!(digraph::diameter(&witness).finite(), Some(value));
            Ok(ExactOutcome {
                value,
                witness,
                nodes: s.nodes,
                proven_optimal,
            })
        }
        None if anchor.is_some() => Err(ExactError::Infeasible),
        None => unreachable!("bridgeless graphs have strong orientations"),
    }
}

/// Minimum diameter over all strong orientations of `(n, edges)`.
pub fn oriented_diameter_exact_edges(
    n: usize,
    edges: &[(VertexId, VertexId)],
    budget: &SearchBudget,
) -> Result<ExactOutcome, ExactError> {
    run_minimize(n, edges, None, budget)
}

pub fn oriented_diameter_exact(g: &PlaneGraph, budget: &SearchBudget) -> Result<ExactOutcome, ExactError> {
    run_minimize(g.n(), &g.edge_pairs(), None, budget)
}

/// Minimum diameter among strong orientations with `anchored_ecc(v) <= anchor_bound`.
pub fn anchored_exact(
    g: &PlaneGraph,
    v: VertexId,
    anchor_bound: u32,
    budget: &SearchBudget,
) -> Result<ExactOutcome, ExactError> {
    run_minimize(g.n(), &g.edge_pairs(), Some((v, anchor_bound)), budget)
}

/// Every strong orientation of `g` with diameter at most `max_diameter`.
pub fn orientations_within(
    g: &PlaneGraph,
    max_diameter: u32,
    budget: &SearchBudget,
) -> Result<Vec<Orientation>, ExactError> {
    budget.validate()?;
    let edges = g.edge_pairs();
    if let Some(b) = find_bridge(g.n(), &edges) {
        return Err(ExactError::HasBridge(b));
    }
    let mut s = Search::new(g.n(), &edges, None, max_diameter, Mode::Enumerate, budget);
    s.dfs(0);
    if s.exhausted {
        return Err(ExactError::BudgetExhausted {
            incumbent: None,
            lower_bound: 0,
            nodes: s.nodes,
        });
    }
    let found = std::mem::take(&mut s.found);
    let mut out: Vec<Orientation> = Vec::with_capacity(2 * found.len());
    for dir in &found {
        let d = s.orientation(dir);
        out.push(d.reverse());
        out.push(d);
    }
    out.sort_by(|a, b| a.arcs().cmp(b.arcs()));
    Ok(out)
}
