//! Maximal outerplanar graphs.
//!
//! Uses the same degree-2 reductions as the general engine: four ears
//! (`+2`), three ears each with a degree-3 neighbor (`+3`), or two ears on a
//! common neighbor (`max(+1, 4)`), recursing on the smaller outerplanar graph.
//! Zig-zag strips have only two ears far apart and admit none of these; such
//! levels, and any level that misses its bound or a requested anchor bound,
//! go to the target-bounded exact search.

use crate::catalog;
use crate::digraph::{self, ceil_half, Certificate, Orientation};
use crate::engine::{validate, Ctx, EngineConfig, EngineError};
use crate::exact::{anchored_exact, oriented_diameter_exact, SearchBudget};
use crate::plane_graph::{PlaneGraph, Subgraph, VertexId};
use crate::structure::{
    degree_two_vertices, ear_pairs, four_deg2_candidates, reduce_four_deg2, reduce_three_deg2_with_deg3,
    reduce_two_deg2, sharing_pairs, ReductionStep,
};

/// Orients a maximal outerplanar graph within `ceil(n/2)` (one more for the
/// outerplanar exceptions). With an anchor, its anchored eccentricity is at
/// most `ceil(n/2)` as well.
pub fn orient_outerplanar(
    g: &PlaneGraph,
    anchor: Option<VertexId>,
    cfg: &EngineConfig,
) -> Result<Certificate, EngineError> {
    let cat = catalog::global()?;
    let mut ctx = Ctx::new(cfg, cat);
    let anchor = anchor.map(|v| (v, ceil_half(g.n())));
    if let Some((v, _)) = anchor {
        if v >= g.n() {
            return Err(EngineError::PreconditionFailed(format!(
                "anchor {} out of range",
                v + 1
            )));
        }
    }
    let d = solve_outerplanar(&mut ctx, g, anchor)?;
    let exception = cat.lookup(g).is_some();
    Certificate::build(g, d, exception, ctx.trace).map_err(|e| EngineError::PreconditionFailed(e.to_string()))
}

fn check_outerplanar(g: &PlaneGraph) -> Result<(), EngineError> {
    validate(g).map_err(|_| EngineError::NotMaximalOuterplanar)?;
    if !g.interior_vertices().is_empty() {
        return Err(EngineError::NotMaximalOuterplanar);
    }
    Ok(())
}

fn anchor_ok(d: &Orientation, anchor: Option<(VertexId, u32)>) -> bool {
    anchor.is_none_or(|(v, b)| digraph::anchored_ecc(d, v).is_ok_and(|e| e <= b))
}

pub(crate) fn solve_outerplanar(
    ctx: &mut Ctx<'_>,
    g: &PlaneGraph,
    anchor: Option<(VertexId, u32)>,
) -> Result<Orientation, EngineError> {
    check_outerplanar(g)?;
    let n = g.n();
    let goal = ctx.goal(g);
    if let Some(m) = ctx.catalog.lookup(g) {
        ctx.log(n, format!("exception {}", m.entry.name));
        return match anchor {
            None => Ok(m.orientation()),
            Some((v, b)) => match m.anchored(v) {
                Some((ecc, d)) if ecc <= b => Ok(d),
                _ => Err(EngineError::AnchorUnmet { vertex: v, bound: b }),
            },
        };
    }
    let d = if n <= ctx.cfg.base_case_max_n.max(catalog::MAX_EXCEPTION_N) {
        let budget = if n <= catalog::MAX_EXCEPTION_N {
            SearchBudget::unlimited()
        } else {
            ctx.cfg.budget.with_target(goal)
        };
        let r = match anchor {
            Some((v, b)) => anchored_exact(g, v, b, &budget),
            None => oriented_diameter_exact(g, &budget),
        };
        match r {
            Ok(r) => {
                ctx.log(n, format!("exact {}", r.value));
                r.witness
            }
            Err(e) => {
                ctx.log(n, format!("exact failed: {e}"));
                return search_or_fail(ctx, g, goal, anchor);
            }
        }
    } else {
        match reduce(ctx, g) {
            Some(d) => d,
            None => {
                ctx.log(n, "no reduction applies");
                return search_or_fail(ctx, g, goal, anchor);
            }
        }
    };
    let d = ctx.settle(g, d, goal)?;
    if anchor_ok(&d, anchor) {
        return Ok(d);
    }
    ctx.log(n, "anchor missed");
    search_or_fail(ctx, g, goal, anchor)
}

fn search_or_fail(
    ctx: &mut Ctx<'_>,
    g: &PlaneGraph,
    goal: u32,
    anchor: Option<(VertexId, u32)>,
) -> Result<Orientation, EngineError> {
    if ctx.cfg.fallback_search {
        if let Some(d) = ctx.search(g, goal, anchor) {
            return Ok(d);
        }
    }
    Err(match anchor {
        Some((vertex, bound)) => EngineError::AnchorUnmet { vertex, bound },
        None => EngineError::PreconditionFailed(format!("no orientation within {goal} found at n={}", g.n())),
    })
}

/// Reduction candidates in preference order.
fn candidates(g: &PlaneGraph) -> Vec<(Subgraph, ReductionStep)> {
    let a = degree_two_vertices(g);
    let mut out = Vec::new();
    for four in four_deg2_candidates(g, &a).into_iter().take(4) {
        out.extend(reduce_four_deg2(g, four).ok());
    }
    let pairs = ear_pairs(g);
    let k = pairs.len();
    if k >= 3 {
        for i in 0..k.min(4) {
            let t = [pairs[i], pairs[(i + 1) % k], pairs[(i + 2) % k]];
            out.extend(reduce_three_deg2_with_deg3(g, t).ok());
        }
    }
    for (x, y) in sharing_pairs(g, &a).into_iter().take(4) {
        out.extend(reduce_two_deg2(g, x, y).ok());
    }
    out
}

fn reduce(ctx: &mut Ctx<'_>, g: &PlaneGraph) -> Option<Orientation> {
    let n = g.n();
    for (h, step) in candidates(g) {
        if ctx.catalog.lookup(&h.graph).is_some() {
            continue;
        }
        ctx.log(n, step.trace_line());
        let hg = &h.graph;
        match ctx.descend(n, hg, |c| solve_outerplanar(c, hg, None)) {
            Ok(dh) => return Some(step.replay(&dh)),
            Err(e) => ctx.log(n, format!("reduction failed: {e}")),
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::Distance;
    use crate::generators;

    #[test]
    fn triangle_and_k4_minus() {
        let cfg = EngineConfig::default();
        let c = orient_outerplanar(&generators::triangle(), None, &cfg).unwrap();
        assert_eq!(c.diameter, Distance::Finite(2));
        let g = generators::k4_minus();
        for v in 0..4 {
            let c = orient_outerplanar(&g, Some(v), &cfg).unwrap();
            assert!(c.exception && c.diameter == Distance::Finite(3));
            assert!(digraph::anchored_ecc(&c.orientation, v).unwrap() <= 2);
        }
    }

    #[test]
    fn snake_twelve_is_exactly_six() {
        let c = orient_outerplanar(&generators::snake(12), None, &EngineConfig::default()).unwrap();
        assert_eq!(c.diameter, Distance::Finite(6));
    }

    #[test]
    fn random_with_anchors() {
        let cfg = EngineConfig::default();
        for seed in 0..30u64 {
            let n = 9 + (seed as usize * 5) % 40;
            let g = generators::random_maximal_outerplanar(n, seed);
            let v = seed as usize % n;
            let c = orient_outerplanar(&g, Some(v), &cfg).unwrap();
            assert!(c.verify(&g));
            assert!(digraph::anchored_ecc(&c.orientation, v).unwrap() <= ceil_half(n));
        }
    }

    #[test]
    fn rejects_interior_vertices() {
        let r = orient_outerplanar(&generators::k4(), None, &EngineConfig::default());
        assert_eq!(r.unwrap_err(), EngineError::NotMaximalOuterplanar);
    }
}
