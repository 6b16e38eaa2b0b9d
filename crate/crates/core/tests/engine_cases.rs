use orient_nt::catalog::{self, ExceptionName};
use orient_nt::digraph::{diameter, is_strongly_connected};
use orient_nt::engine::{orient_case1, orient_case2, orient_case3};
use orient_nt::generators::random_near_triangulation;
use orient_nt::structure::{analyze, strip_separating_outer_edges, StructureReport};
use orient_nt::{ceil_half, orient, Distance, EngineConfig, EngineError, PlaneGraph};
use proptest::prelude::*;

fn check(g: &PlaneGraph, c: &orient_nt::Certificate) {
    assert!(c.verify(g));
    assert!(is_strongly_connected(&c.orientation));
    let d = diameter(&c.orientation).finite().unwrap();
    assert!(d <= ceil_half(g.n()), "n = {} diameter {d}", g.n());
}

/// Stripped instances whose analysis found the triangle decomposition,
/// keyed by how many of the three pieces are single triangles.
fn decomposed(max: usize) -> Vec<(usize, PlaneGraph, StructureReport)> {
    let mut out = Vec::new();
    for seed in 0..4000u64 {
        let n = 9 + (seed as usize % 12);
        let bias = [0.3, 0.5, 0.7][seed as usize % 3];
        let (s, _) = strip_separating_outer_edges(&random_near_triangulation(n, seed, bias)).unwrap();
        let r = analyze(&s).unwrap();
        if let Some(dec) = &r.decomposition {
            let small = dec.pieces.iter().filter(|p| p.size() == 3).count();
            out.push((small, s, r));
            if out.len() == max {
                break;
            }
        }
    }
    out
}

#[test]
fn exception_certificates() {
    let cat = catalog::global().unwrap();
    let cfg = EngineConfig::default();
    for name in ExceptionName::ALL {
        let e = cat.get(name);
        let c = orient(&e.graph, &cfg).unwrap();
        assert!(c.exception && c.verify(&e.graph));
        assert_eq!(
            c.diameter,
            Distance::Finite(ceil_half(e.graph.n()) + 1),
            "{}",
            name.as_str()
        );
    }
}

#[test]
fn stacked_nine() {
    let g = random_near_triangulation(9, 3, 1.0);
    assert_eq!(g.outer_cycle().unwrap().len(), 3);
    check(&g, &orient(&g, &EngineConfig::default()).unwrap());
}

#[test]
fn each_case_on_real_decompositions() {
    let cfg = EngineConfig::default();
    let all = decomposed(300);
    let mut seen = [0usize; 4];
    let mut k4_top = 0;
    for (small, g, r) in &all {
        let c = match small {
            0 => orient_case3(g, r, &cfg),
            1 => orient_case2(g, r, &cfg),
            _ => orient_case1(g, r, &cfg),
        }
        .unwrap();
        check(g, &c);
        seen[*small] += 1;
        if *small == 1 && r.decomposition.as_ref().unwrap().n_t() == 4 {
            k4_top += 1;
        }
    }
    assert!(seen[0] > 0 && seen[1] > 0 && seen[2] + seen[3] > 0, "{seen:?}");
    assert!(k4_top > 0);
}

#[test]
fn cases_need_a_decomposition() {
    let cfg = EngineConfig::default();
    let g = random_near_triangulation(12, 5, 0.0);
    let r = analyze(&g).unwrap();
    assert!(r.decomposition.is_none());
    for f in [orient_case1, orient_case2, orient_case3] {
        assert!(matches!(f(&g, &r, &cfg), Err(EngineError::PreconditionFailed(_))));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn engine_meets_the_bound(n in 9usize..60, seed in any::<u64>(), bias in prop::sample::select(vec![0.0, 0.3, 0.7, 1.0])) {
        let g = random_near_triangulation(n, seed, bias);
        let c = orient(&g, &EngineConfig::default()).unwrap();
        prop_assert!(c.verify(&g) && c.within_bound());
    }
}
