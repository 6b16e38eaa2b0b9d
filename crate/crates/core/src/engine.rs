//! Recursive orientation engine.
//!
//! Every level produces an orientation of its own graph with diameter at
//! most `ceil(n/2)` (one more for a catalogued exception), checked by BFS
//! when `verify_every_level` is set. Levels that miss fall back to a
//! target-bounded exact search within the configured budget.
//!
//! Level structure, after stripping outer edges that sit on a triangle with
//! an interior vertex:
//!
//! * no interior vertex left: the outerplanar routine;
//! * four or more degree-2 vertices: drop four of them (`+2`), or two with a
//!   common neighbor when the four-drop lands on `W5` or `G6_3` (`+1`);
//! * exactly three: the triangle `u1 u2 u3` splits the graph into its closed
//!   disk and three outerplanar pieces, handled by piece sizes.
//!
//! Trace lines are `n=<size>: <step>` with 1-based ids local to that level.

use thiserror::Error;

use crate::catalog::{self, Catalog, CatalogError, ExceptionName};
use crate::digraph::{self, ceil_half, combine, Certificate, Distance, Orientation};
use crate::exact::{anchored_exact, oriented_diameter_exact, ExactError, SearchBudget};
use crate::outerplanar;
use crate::plane_graph::{GraphError, PlaneGraph, Subgraph, VertexId};
use crate::structure::{
    self, analyze, reduce_four_deg2, reduce_three_deg2_with_deg3, reduce_two_deg2, replay_strips,
    strip_separating_outer_edges, Decomposition, Gadget, ReductionStep, StructureError, StructureReport,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineConfig {
    /// Graphs up to this size are solved exactly. At least 8.
    pub base_case_max_n: usize,
    /// Budget for each fallback or base-case search.
    pub budget: SearchBudget,
    pub verify_every_level: bool,
    /// Allow target-bounded exact search when a level misses its bound.
    pub fallback_search: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            base_case_max_n: 8,
            budget: SearchBudget::nodes(2_000_000),
            verify_every_level: true,
            fallback_search: true,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("not a 2-connected near triangulation: {0}")]
    NotNearTriangulation(String),
    #[error("not a maximal outerplanar graph")]
    NotMaximalOuterplanar,
    #[error("verification failed at n={n}: diameter {got} exceeds {goal}")]
    VerificationFailed {
        n: usize,
        got: Distance,
        goal: u32,
        trace: Vec<String>,
    },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("anchor {vertex} has eccentricity above {bound}")]
    AnchorUnmet { vertex: VertexId, bound: u32 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

impl From<GraphError> for EngineError {
    fn from(e: GraphError) -> Self {
        EngineError::PreconditionFailed(e.to_string())
    }
}

impl From<StructureError> for EngineError {
    fn from(e: StructureError) -> Self {
        EngineError::PreconditionFailed(e.to_string())
    }
}

/// Shared state of one `orient` call.
pub(crate) struct Ctx<'a> {
    pub cfg: &'a EngineConfig,
    pub catalog: &'a Catalog,
    pub trace: Vec<String>,
    pub depth: usize,
}

impl<'a> Ctx<'a> {
    pub fn new(cfg: &'a EngineConfig, catalog: &'a Catalog) -> Self {
        Ctx {
            cfg,
            catalog,
            trace: Vec::new(),
            depth: 0,
        }
    }

    pub fn log(&mut self, n: usize, msg: impl AsRef<str>) {
        self.trace
            .push(format!("{}n={n}: {}", "  ".repeat(self.depth), msg.as_ref()));
    }

    /// `ceil(n/2)`, plus one for a catalogued exception.
    pub fn goal(&self, g: &PlaneGraph) -> u32 {
        ceil_half(g.n()) + self.catalog.lookup(g).is_some() as u32
    }

    /// Runs `f` one level deeper; recursion must shrink the graph.
    pub fn descend<T>(
        &mut self,
        parent_n: usize,
        child: &PlaneGraph,
        f: impl FnOnce(&mut Self) -> Result<T, EngineError>,
    ) -> Result<T, EngineError> {
        if child.n() >= parent_n {
            return Err(EngineError::PreconditionFailed(format!(
                "recursion from n={parent_n} to n={}",
                child.n()
            )));
        }
        self.depth += 1;
        let r = f(self);
        self.depth -= 1;
        r
    }

    /// Target-bounded exact search for `diam <= goal` (and the anchor bound).
    pub fn search(&mut self, g: &PlaneGraph, goal: u32, anchor: Option<(VertexId, u32)>) -> Option<Orientation> {
        let budget = self.cfg.budget.with_target(goal);
        let r = match anchor {
            Some((v, b)) => anchored_exact(g, v, b, &budget),
            None => oriented_diameter_exact(g, &budget),
        };
        let found = match r {
            Ok(r) if r.value <= goal => Some(r.witness),
            Err(ExactError::BudgetExhausted {
                incumbent: Some((v, d)),
                ..
            }) if v <= goal => Some(d),
            _ => None,
        };
        self.log(
            g.n(),
            format!(
                "search goal={goal} {}",
                if found.is_some() { "found" } else { "missed" }
            ),
        );
        found
    }

    /// Checks `d` against `goal`; on a miss, tries the fallback search.
    pub fn settle(&mut self, g: &PlaneGraph, d: Orientation, goal: u32) -> Result<Orientation, EngineError> {
        if !self.cfg.verify_every_level && self.depth > 0 {
            return Ok(d);
        }
        let got = digraph::diameter(&d);
        if got <= Distance::Finite(goal) {
            return Ok(d);
        }
        self.log(g.n(), format!("miss diameter={got} goal={goal}"));
        if self.cfg.fallback_search {
            if let Some(d) = self.search(g, goal, None) {
                return Ok(d);
            }
        }
        Err(EngineError::VerificationFailed {
            n: g.n(),
            got,
            goal,
            trace: self.trace.clone(),
        })
    }
}

fn fmt_ids(vs: &[VertexId]) -> String {
    vs.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" ")
}

/// Orients a 2-connected near triangulation and certifies the result.
pub fn orient(g: &PlaneGraph, cfg: &EngineConfig) -> Result<Certificate, EngineError> {
    if cfg.base_case_max_n < catalog::MAX_EXCEPTION_N {
        return Err(EngineError::InvalidConfig(format!(
            "base_case_max_n must be at least {}",
            catalog::MAX_EXCEPTION_N
        )));
    }
    validate(g)?;
    let cat = catalog::global()?;
    let mut ctx = Ctx::new(cfg, cat);
    let d = solve(&mut ctx, g)?;
    let exception = cat.lookup(g).is_some();
    let goal = ctx.goal(g);
    let d = ctx.settle(g, d, goal)?;
    if g.n() <= 10 {
        if let Ok(r) = oriented_diameter_exact(g, &SearchBudget::nodes(1_000_000)) {
            let diam = digraph::diameter(&d).finite().unwrap_or(u32::MAX);
            ctx.trace.push(format!("gap={}", diam.saturating_sub(r.value)));
        }
    }
    let cert =
        Certificate::build(g, d, exception, ctx.trace).map_err(|e| EngineError::PreconditionFailed(e.to_string()))?;
    if !cert.verify(g) {
        return Err(EngineError::VerificationFailed {
            n: g.n(),
            got: cert.diameter,
            goal: cert.bound,
            trace: cert.trace,
        });
    }
    Ok(cert)
}

pub(crate) fn validate(g: &PlaneGraph) -> Result<(), EngineError> {
    let r = g.is_near_triangulation();
    if r.ok() {
        return Ok(());
    }
    let why = if r.too_small {
        "fewer than three vertices".to_string()
    } else if !r.two_connected {
        "not 2-connected".to_string()
    } else {
        format!("{} bounded face(s) are not triangles", r.bad_faces.len())
    };
    Err(EngineError::NotNearTriangulation(why))
}

/// Orientation of `g` within its goal.
pub(crate) fn solve(ctx: &mut Ctx<'_>, g: &PlaneGraph) -> Result<Orientation, EngineError> {
    let n = g.n();
    if let Some(m) = ctx.catalog.lookup(g) {
        ctx.log(n, format!("exception {}", m.entry.name));
        return Ok(m.orientation());
    }
    if n <= ctx.cfg.base_case_max_n {
        let budget = if n <= catalog::MAX_EXCEPTION_N {
            SearchBudget::unlimited()
        } else {
            ctx.cfg.budget.with_target(ceil_half(n))
        };
        let r = oriented_diameter_exact(g, &budget)?;
        ctx.log(n, format!("exact {}", r.value));
        return ctx.settle(g, r.witness, ceil_half(n));
    }
    let (h, strips) = strip_separating_outer_edges(g)?;
    for s in &strips {
        ctx.log(n, s.trace_line());
    }
    let d = if h.interior_vertices().is_empty() {
        outerplanar::solve_outerplanar(ctx, &h, None)?
    } else {
        solve_stripped(ctx, &h)?
    };
    let d = replay_strips(&strips, &d);
    ctx.settle(g, d, ceil_half(n))
}

/// `g` stripped, with interior vertices and more than the base size.
fn solve_stripped(ctx: &mut Ctx<'_>, g: &PlaneGraph) -> Result<Orientation, EngineError> {
    let n = g.n();
    let report = match analyze(g) {
        Ok(r) => r,
        Err(e) => return fallback(ctx, g, &e.to_string()),
    };
    let attempt = if report.degree2.len() >= 4 {
        orient_four(ctx, g, &report)
    } else if let Some(dec) = &report.decomposition {
        let small = dec.pieces.iter().filter(|p| p.size() == 3).count();
        match small {
            0 => case3(ctx, g, dec),
            1 => case2(ctx, g, dec),
            _ => case1(ctx, g, dec),
        }
    } else {
        Err(EngineError::PreconditionFailed(format!(
            "{} degree-2 vertices and no triangle decomposition",
            report.degree2.len()
        )))
    };
    match attempt {
        Ok(d) => ctx.settle(g, d, ceil_half(n)),
        Err(e @ EngineError::NotNearTriangulation(_)) => Err(e),
        Err(e) => fallback(ctx, g, &e.to_string()),
    }
}

fn fallback(ctx: &mut Ctx<'_>, g: &PlaneGraph, why: &str) -> Result<Orientation, EngineError> {
    ctx.log(g.n(), format!("fallback: {why}"));
    let goal = ctx.goal(g);
    if ctx.cfg.fallback_search {
        if let Some(d) = ctx.search(g, goal, None) {
            return Ok(d);
        }
    }
    Err(EngineError::PreconditionFailed(why.to_string()))
}

/// Recurses on `h` and lifts the result through `step`.
fn recurse_step(
    ctx: &mut Ctx<'_>,
    g: &PlaneGraph,
    h: &Subgraph,
    step: &ReductionStep,
) -> Result<Orientation, EngineError> {
    ctx.log(g.n(), step.trace_line());
    let dh = ctx.descend(g.n(), &h.graph, |c| solve(c, &h.graph))?;
    Ok(step.replay(&dh))
}

fn is_named(ctx: &Ctx<'_>, g: &PlaneGraph, names: &[ExceptionName]) -> bool {
    ctx.catalog.lookup(g).is_some_and(|m| names.contains(&m.entry.name))
}

fn orient_four(ctx: &mut Ctx<'_>, g: &PlaneGraph, report: &StructureReport) -> Result<Orientation, EngineError> {
    let mut last = String::from("no admissible set of four degree-2 vertices");
    for four in structure::four_deg2_candidates(g, &report.degree2) {
        let (h, step) = match reduce_four_deg2(g, four) {
            Ok(x) => x,
            Err(e) => {
                last = e.to_string();
                continue;
            }
        };
        if is_named(ctx, &h.graph, &[ExceptionName::W5, ExceptionName::G6_3]) {
            // two ears of the four share a neighbor; drop only those
            for (a, b) in structure::sharing_pairs(g, &four) {
                if let Ok((h2, step2)) = reduce_two_deg2(g, a, b) {
                    if ctx.catalog.lookup(&h2.graph).is_none() {
                        return recurse_step(ctx, g, &h2, &step2);
                    }
                }
            }
            last = "no sharing pair after a four-drop onto W5/G6_3".into();
            continue;
        }
        return recurse_step(ctx, g, &h, &step);
    }
    Err(EngineError::PreconditionFailed(last))
}

/// Case entry points for callers holding a [`StructureReport`].
fn run_case(
    g: &PlaneGraph,
    report: &StructureReport,
    cfg: &EngineConfig,
    case: fn(&mut Ctx<'_>, &PlaneGraph, &Decomposition) -> Result<Orientation, EngineError>,
) -> Result<Certificate, EngineError> {
    validate(g)?;
    let dec = report
        .decomposition
        .as_ref()
        .ok_or_else(|| EngineError::PreconditionFailed("no triangle decomposition".into()))?;
    let cat = catalog::global()?;
    let mut ctx = Ctx::new(cfg, cat);
    let d = case(&mut ctx, g, dec)?;
    Certificate::build(g, d, false, ctx.trace).map_err(|e| EngineError::PreconditionFailed(e.to_string()))
}

/// Two size-3 pieces meet at a triangle corner; drop their ears.
pub fn orient_case1(g: &PlaneGraph, report: &StructureReport, cfg: &EngineConfig) -> Result<Certificate, EngineError> {
    run_case(g, report, cfg, case1)
}

/// Exactly one size-3 piece: disk and two outerplanar pieces anchored at `u2`.
pub fn orient_case2(g: &PlaneGraph, report: &StructureReport, cfg: &EngineConfig) -> Result<Certificate, EngineError> {
    run_case(g, report, cfg, case2)
}

/// Every piece has at least four vertices: drop three ear pairs.
pub fn orient_case3(g: &PlaneGraph, report: &StructureReport, cfg: &EngineConfig) -> Result<Certificate, EngineError> {
    run_case(g, report, cfg, case3)
}

fn case1(ctx: &mut Ctx<'_>, g: &PlaneGraph, dec: &Decomposition) -> Result<Orientation, EngineError> {
    let p = &dec.pieces;
    let i = (0..3)
        .find(|&i| p[i].size() == 3 && p[(i + 1) % 3].size() == 3)
        .ok_or_else(|| EngineError::PreconditionFailed("fewer than two size-3 pieces".into()))?;
    let (a, b) = (p[i].ear, p[(i + 1) % 3].ear);
    let (Some(a), Some(b)) = (a, b) else {
        return Err(EngineError::PreconditionFailed(
            "piece without a degree-2 vertex".into(),
        ));
    };
    let (h, step) = reduce_two_deg2(g, a, b)?;
    if ctx.catalog.lookup(&h.graph).is_some() {
        return Err(EngineError::PreconditionFailed(
            "two-ear reduction reached an exception".into(),
        ));
    }
    recurse_step(ctx, g, &h, &step)
}

/// Lifts a piece orientation into `g`'s ids.
fn lift(sub: &Subgraph, d: &Orientation, n: usize) -> Orientation {
    d.relabel(&sub.to_parent, n)
}

fn union(a: &Orientation, b: &Orientation) -> Result<Orientation, EngineError> {
    combine(a, b, true)
        .map(|(d, _)| d)
        .map_err(|e| EngineError::PreconditionFailed(e.to_string()))
}

fn local(sub: &Subgraph, v: VertexId) -> Result<VertexId, EngineError> {
    sub.local_of(v)
        .ok_or_else(|| EngineError::PreconditionFailed(format!("vertex {} missing from piece", v + 1)))
}

/// Orientation of `t` (a triangulated triangle) with anchored eccentricity at
/// `u` at most `n_t / 2` when `t = K4`, otherwise within `ceil(n_t / 2)`.
fn orient_t_bar(ctx: &mut Ctx<'_>, g: &PlaneGraph, t: &Subgraph, u: VertexId) -> Result<Orientation, EngineError> {
    let tg = &t.graph;
    let ul = local(t, u)?;
    if let Some(m) = ctx.catalog.lookup(tg) {
        if m.entry.name != ExceptionName::K4 {
            return Err(EngineError::PreconditionFailed(format!(
                "triangle disk is the exception {}",
                m.entry.name
            )));
        }
        let (ecc, d) = m
            .anchored(ul)
            .ok_or_else(|| EngineError::PreconditionFailed("K4 anchor missing".into()))?;
        if ecc > 2 {
            return Err(EngineError::AnchorUnmet { vertex: u, bound: 2 });
        }
        ctx.log(g.n(), format!("disk K4 anchored at {} ecc={ecc}", u + 1));
        return Ok(d);
    }
    ctx.log(g.n(), format!("disk n={}", tg.n()));
    ctx.descend(g.n(), tg, |c| solve(c, tg))
}

fn case2(ctx: &mut Ctx<'_>, g: &PlaneGraph, dec: &Decomposition) -> Result<Orientation, EngineError> {
    let n = g.n();
    let k = dec
        .pieces
        .iter()
        .position(|p| p.size() == 3)
        .ok_or_else(|| EngineError::PreconditionFailed("no size-3 piece".into()))?;
    // rotate so the size-3 piece is the third one
    let r = (k + 1) % 3;
    let piece = |j: usize| &dec.pieces[(j + r) % 3];
    let (o1, o2, o3) = (piece(0), piece(1), piece(2));
    let u2 = o1.end;
    debug_assert_eq!(o2.start, u2);
    let (n1, n2, nt) = (o1.size(), o2.size(), dec.n_t());
    for (name, s) in [("n1", n1), ("n2", n2), ("n_T", nt)] {
        if s < 4 || s + 5 > n {
            return Err(EngineError::PreconditionFailed(format!("{name}={s} outside 4..=n-5")));
        }
    }
    for (ni, other) in [(n1, n2), (n2, n1)] {
        // 2 * (ceil(ni/2) + ceil(nT/2)) <= n + 3 - other + 2 <= n + 1
        let lhs = 2 * (ceil_half(ni) + ceil_half(nt));
        let mid = (n + 5 - other) as u32;
        if lhs > mid || mid > n as u32 + 1 {
            return Err(EngineError::PreconditionFailed("case-2 size arithmetic".into()));
        }
    }
    ctx.log(n, format!("case2 u2={} n1={n1} n2={n2} n_T={nt}", u2 + 1));
    let dt = orient_t_bar(ctx, g, &dec.t_bar, u2)?;
    let mut d = lift(&dec.t_bar, &dt, n);
    for o in [o1, o2] {
        let ul = local(&o.sub, u2)?;
        let og = &o.sub.graph;
        let di = ctx.descend(n, og, |c| {
            outerplanar::solve_outerplanar(c, og, Some((ul, ceil_half(og.n()))))
        })?;
        if digraph::anchored_ecc(&di, ul).map_or(true, |e| e > ceil_half(og.n())) {
            return Err(EngineError::AnchorUnmet {
                vertex: u2,
                bound: ceil_half(og.n()),
            });
        }
        d = union(&d, &lift(&o.sub, &di, n))?;
    }
    let v3 = o3
        .ear
        .ok_or_else(|| EngineError::PreconditionFailed("size-3 piece without its ear".into()))?;
    let ear = Gadget::Ear {
        v: v3,
        a: o3.start,
        b: o3.end,
    };
    ctx.log(n, format!("ear {}", v3 + 1));
    d.extended(&ear.arcs(&d))
        .map_err(|e| EngineError::PreconditionFailed(e.to_string()))
}

fn case3(ctx: &mut Ctx<'_>, g: &PlaneGraph, dec: &Decomposition) -> Result<Orientation, EngineError> {
    let n = g.n();
    let mut pairs = Vec::with_capacity(3);
    for p in &dec.pieces {
        let v = p
            .ear
            .ok_or_else(|| EngineError::PreconditionFailed("piece without a degree-2 vertex".into()))?;
        let vp = g
            .neighbors(v)
            .find(|&x| x != p.start && x != p.end && g.degree(x) == 3)
            .ok_or_else(|| EngineError::PreconditionFailed(format!("ear {} has no degree-3 neighbor", v + 1)))?;
        pairs.push((v, vp));
    }
    let pairs: [(VertexId, VertexId); 3] = pairs.try_into().expect("three pieces");
    let (h, step) = reduce_three_deg2_with_deg3(g, pairs)?;
    if !is_named(ctx, &h.graph, &[ExceptionName::K4, ExceptionName::G6_3]) {
        if ctx.catalog.lookup(&h.graph).is_some() {
            return Err(EngineError::PreconditionFailed(
                "three-pair reduction reached W5".into(),
            ));
        }
        return recurse_step(ctx, g, &h, &step);
    }
    // two K4minus pieces around a shared corner, joined to the rest anchored there
    let p = &dec.pieces;
    let i = (0..3)
        .find(|&i| p[i].size() == 4 && p[(i + 1) % 3].size() == 4)
        .ok_or_else(|| EngineError::PreconditionFailed("no two adjacent K4minus pieces".into()))?;
    let (a, b) = (&p[i], &p[(i + 1) % 3]);
    let u = a.end;
    let removed = [pairs[i].0, pairs[i].1, pairs[(i + 1) % 3].0, pairs[(i + 1) % 3].1];
    let hp = g.delete_vertices(&removed)?;
    validate(&hp.graph)?;
    let bound = (n / 2 - 2) as u32;
    ctx.log(
        n,
        format!(
            "case3 special at {} removing {} (H' n={})",
            u + 1,
            fmt_ids(&removed),
            hp.graph.n()
        ),
    );
    let ul = local(&hp, u)?;
    let dp = match ctx.catalog.lookup(&hp.graph) {
        Some(m) => m.anchored(ul).map(|(_, d)| d),
        None => None,
    };
    let dp = match dp {
        Some(d) => d,
        None => {
            let hg = &hp.graph;
            ctx.descend(n, hg, |c| solve(c, hg))?
        }
    };
    let dp = if digraph::anchored_ecc(&dp, ul).map_or(true, |e| e > bound) {
        let goal = (n / 2 - 1) as u32;
        ctx.search(&hp.graph, goal, Some((ul, bound)))
            .ok_or(EngineError::AnchorUnmet { vertex: u, bound })?
    } else {
        dp
    };
    let mut d = lift(&hp, &dp, n);
    for o in [a, b] {
        let m = ctx
            .catalog
            .lookup(&o.sub.graph)
            .filter(|m| m.entry.name == ExceptionName::K4Minus)
            .ok_or_else(|| EngineError::PreconditionFailed("piece is not K4minus".into()))?;
        let (ecc, di) = m
            .anchored(local(&o.sub, u)?)
            .ok_or_else(|| EngineError::PreconditionFailed("K4minus anchor missing".into()))?;
        if ecc > 2 {
            return Err(EngineError::AnchorUnmet { vertex: u, bound: 2 });
        }
        d = union(&d, &lift(&o.sub, &di, n))?;
    }
    Ok(d)
}
