//! Acceptance suite. Prints one PASS/FAIL line per criterion and fails if any
//! criterion fails. Run with `cargo test --test acceptance`.
//! `ACCEPTANCE_ONLY=3,5` restricts the run to the listed criteria.

mod common;

use std::io::Write as _;
use std::time::Instant;

use rayon::prelude::*;

use orient_nt::catalog::{self, ExceptionName};
use orient_nt::census::census;
use orient_nt::digraph::{anchored_ecc, diameter, is_strongly_connected};
use orient_nt::exact::orientations_within;
use orient_nt::generators::{enumerate, random_near_triangulation, tight_family};
use orient_nt::structure::{
    analyze, degree_two_vertices, ear_pair_gadget, reduce_four_deg2, reduce_three_deg2_with_deg3, reduce_two_deg2,
    strip_separating_outer_edges, ReductionStep,
};
use orient_nt::{
    anchored_exact, ceil_half, orient, oriented_diameter_exact, EngineConfig, PlaneGraph, SearchBudget, Subgraph,
};

/// Number of random instances for the bound check.
const RANDOM_INSTANCES: u64 = 1000;
/// Number of stripped instances with interior vertices for the structure check.
const STRUCTURE_INSTANCES: usize = 500;
/// Every reduction applicable to an enumerated graph up to these sizes is
/// checked against every optimal orientation of the reduced graph. The
/// three-ear-pair rule removes six vertices and first applies at n = 9, so
/// the degree-2 rules run two sizes past the strips.
const STRIP_MAX_N: usize = 8;
const DEGREE2_MAX_N: usize = 10;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exception_census() -> Outcome {
    for n in 3..=6 {
        let lab = common::Labeled::new(n);
        let ours = common::classes_of(&lab, &enumerate(n));
        ensure(ours == common::brute_force_classes(&lab), || {
            format!("enumeration disagrees with brute force at n = {n}")
        })?;
    }
    let c = census(8).map_err(|e| e.to_string())?;
    let ex: Vec<_> = c.exceptions().collect();
    let ods: Vec<u32> = ex.iter().map(|r| r.oriented_diameter).collect();
    let ns: Vec<usize> = ex.iter().map(|r| r.n).collect();
    ensure(ns == [4, 4, 6, 6, 6, 6, 8], || format!("exception sizes {ns:?}"))?;
    ensure(ods == [3, 3, 4, 4, 4, 4, 5], || format!("exception diameters {ods:?}"))?;
    ensure(ex.iter().all(|r| r.oriented_diameter == ceil_half(r.n) + 1), || {
        "od != ceil(n/2)+1".into()
    })?;
    let cat = catalog::global().map_err(|e| e.to_string())?;
    let w5 = ex
        .iter()
        .filter(|r| cat.lookup(&r.graph).is_some_and(|m| m.entry.name == ExceptionName::W5))
        .count();
    ensure(w5 == 1, || format!("{w5} rows match W5"))?;
    Ok(format!("7 exceptions, ods {ods:?}, counts {:?}", c.counts()))
}

fn anchored_values() -> Outcome {
    let cat = catalog::global().map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for name in [ExceptionName::K4, ExceptionName::G6_3] {
        let g = &cat.get(name).graph;
        let n = g.n();
        let half = (n / 2) as u32;
        let outer = g.outer_mask();
        let anchors: Vec<usize> = (0..n)
            .filter(|&v| g.degree(v) == 3 && g.neighbors(v).any(|w| !outer[w]))
            .collect();
        ensure(!anchors.is_empty(), || {
            format!("{}: no anchor candidate", name.as_str())
        })?;
        let mut hit = false;
        for &v in &anchors {
            let r = anchored_exact(g, v, half, &SearchBudget::unlimited()).map_err(|e| e.to_string())?;
            let ecc = anchored_ecc(&r.witness, v).map_err(|e| e.to_string())?;
            let d = diameter(&r.witness).finite();
            if r.value == half + 1 && ecc == half && d == Some(half + 1) {
                hit = true;
                out.push(format!("{} v={} diam={} ecc={}", name.as_str(), v + 1, half + 1, ecc));
                break;
            }
        }
        ensure(hit, || {
            format!("{}: no anchor reaches diam n/2+1 with ecc n/2", name.as_str())
        })?;
    }
    Ok(out.join(", "))
}

fn random_bound() -> Outcome {
    let cfg = EngineConfig::default();
    let biases = [0.0, 0.3, 0.7, 1.0];
    let failures: Vec<String> = (0..RANDOM_INSTANCES)
        .into_par_iter()
        .filter_map(|seed| {
            let n = 9 + (seed.wrapping_mul(2654435761) % 192) as usize;
            let bias = biases[(seed % 4) as usize];
            let g = random_near_triangulation(n, seed, bias);
            let ok = orient(&g, &cfg).is_ok_and(|c| {
                c.verify(&g)
                    && is_strongly_connected(&c.orientation)
                    && diameter(&c.orientation).finite().is_some_and(|d| d <= ceil_half(n))
            });
            (!ok).then(|| format!("seed {seed} n {n} bias {bias}"))
        })
        .collect();
    ensure(failures.is_empty(), || {
        format!("{} failures, first {:?}", failures.len(), failures.first())
    })?;
    Ok(format!("{RANDOM_INSTANCES} instances, 0 failures"))
}

fn oracle_sandwich() -> Outcome {
    let cfg = EngineConfig::default();
    let cat = catalog::global().map_err(|e| e.to_string())?;
    let mut checked = 0;
    for n in 3..=8 {
        for g in enumerate(n) {
            if cat.lookup(&g).is_some() {
                continue;
            }
            let exact = oriented_diameter_exact(&g, &SearchBudget::unlimited())
                .map_err(|e| e.to_string())?
                .value;
            let c = orient(&g, &cfg).map_err(|e| format!("n = {n}: {e}"))?;
            let d = c.diameter.finite().ok_or("engine output not strong")?;
            ensure(c.verify(&g), || format!("n = {n}: certificate does not verify"))?;
            ensure(exact <= d && d <= ceil_half(n), || {
                format!("n = {n}: exact {exact} engine {d}")
            })?;
            ensure(exact as usize >= g.undirected_diameter(), || {
                format!("n = {n}: exact below undirected diameter")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} non-exception graphs"))
}

fn tightness() -> Outcome {
    let mut got = Vec::new();
    for n in 5..=14 {
        let g = tight_family(n);
        ensure(g.interior_vertices().is_empty(), || format!("n = {n}: not outerplanar"))?;
        let r = oriented_diameter_exact(&g, &SearchBudget::unlimited()).map_err(|e| e.to_string())?;
        ensure(r.value == ceil_half(n), || format!("n = {n}: exact {}", r.value))?;
        got.push(r.value);
    }
    Ok(format!("n=5..14 -> {got:?}"))
}

fn structure() -> Outcome {
    let biases = [0.3, 0.5, 0.7, 1.0];
    let (mut found, mut three, mut seed) = (0, 0, 0u64);
    while found < STRUCTURE_INSTANCES {
        let n = 9 + (seed as usize * 7) % 52;
        let g = random_near_triangulation(n, seed, biases[(seed % 4) as usize]);
        seed += 1;
        let (s, _) = strip_separating_outer_edges(&g).map_err(|e| e.to_string())?;
        if s.interior_vertices().is_empty() {
            continue;
        }
        found += 1;
        let r = analyze(&s).map_err(|e| e.to_string())?;
        let tag = format!("seed {} n {n}", seed - 1);
        ensure(r.attachments.len() >= 3, || {
            format!("{tag}: |S| = {}", r.attachments.len())
        })?;
        ensure(r.degree2.len() >= 3, || format!("{tag}: |A| = {}", r.degree2.len()))?;
        if r.degree2.len() == 3 {
            three += 1;
            ensure(r.attachments.len() == 3, || {
                format!("{tag}: |A| = 3 but |S| = {}", r.attachments.len())
            })?;
            let t = r.triangle.ok_or_else(|| format!("{tag}: no triangle"))?;
            ensure(t.iter().all(|v| r.attachments.contains(v)), || {
                format!("{tag}: triangle is not G[S]")
            })?;
            ensure(
                s.has_edge(t[0], t[1]) && s.has_edge(t[1], t[2]) && s.has_edge(t[2], t[0]),
                || format!("{tag}: G[S] not a triangle"),
            )?;
            let inside = s.interior_of(&t).map_err(|e| e.to_string())?;
            ensure(s.interior_vertices().iter().all(|v| inside.contains(v)), || {
                format!("{tag}: interior vertex outside T")
            })?;
        }
    }
    Ok(format!(
        "{STRUCTURE_INSTANCES} instances, {three} with exactly three degree-2 vertices"
    ))
}

/// Every applicable reduction of `g`.
fn reductions(g: &PlaneGraph, strips: bool) -> Vec<(Subgraph, ReductionStep)> {
    let mut out = Vec::new();
    let a = degree_two_vertices(g);
    if strips {
        if let Ok((_, steps)) = strip_separating_outer_edges(g) {
            if let Some(first) = steps.first() {
                let u = first.removed_edges[0];
                if let Ok(h) = g.delete_edge(u.lo(), u.hi()) {
                    let all: Vec<usize> = (0..g.n()).collect();
                    out.push((
                        Subgraph {
                            graph: h,
                            to_parent: all,
                        },
                        first.clone(),
                    ));
                }
            }
        }
    }
    for (i, &x) in a.iter().enumerate() {
        for &y in &a[i + 1..] {
            out.extend(reduce_two_deg2(g, x, y).ok());
        }
    }
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            for k in j + 1..a.len() {
                for l in k + 1..a.len() {
                    out.extend(reduce_four_deg2(g, [a[i], a[j], a[k], a[l]]).ok());
                }
            }
        }
    }
    let pairs: Vec<(usize, usize)> = a
        .iter()
        .flat_map(|&v| {
            g.neighbors(v)
                .filter(move |&w| ear_pair_gadget(g, v, w).is_ok())
                .map(move |w| (v, w))
        })
        .collect();
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            for k in j + 1..pairs.len() {
                let t = [pairs[i], pairs[j], pairs[k]];
                if t[0].0 != t[1].0 && t[1].0 != t[2].0 && t[0].0 != t[2].0 {
                    out.extend(reduce_three_deg2_with_deg3(g, t).ok());
                }
            }
        }
    }
    out
}

fn reduction_contracts() -> Outcome {
    let mut counts = [0usize; 4];
    let mut checked = 0usize;
    for n in 4..=DEGREE2_MAX_N {
        let graphs = enumerate(n);
        let results: Vec<Result<([usize; 4], usize), String>> = graphs
            .par_iter()
            .map(|g| {
                let mut local = ([0usize; 4], 0usize);
                for (h, step) in reductions(g, n <= STRIP_MAX_N) {
                    let hg = &h.graph;
                    let od = oriented_diameter_exact(hg, &SearchBudget::unlimited())
                        .map_err(|e| e.to_string())?
                        .value;
                    let (add, floor) = step.contract();
                    let bound = (od + add).max(floor);
                    for dh in orientations_within(hg, od, &SearchBudget::unlimited()).map_err(|e| e.to_string())? {
                        let d = step.replay(&dh);
                        let got = diameter(&d).finite();
                        if !got.is_some_and(|x| x <= bound) {
                            return Err(format!("n = {n} {}: diam {got:?} > {bound}", step.trace_line()));
                        }
                        local.1 += 1;
                    }
                    local.0[step.kind as usize] += 1;
                }
                Ok(local)
            })
            .collect();
        for r in results {
            let (c, k) = r?;
            for i in 0..4 {
                counts[i] += c[i];
            }
            checked += k;
        }
    }
    ensure(counts.iter().all(|&c| c > 0), || {
        format!("some rule never applied: {counts:?}")
    })?;
    Ok(format!(
        "steps strip/two/four/three = {counts:?}, {checked} optimal H orientations replayed"
    ))
}

/// Written past the test harness capture so the lines show up in a plain
/// `cargo test` log.
fn report(line: String) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        ("1 exception census", exception_census),
        ("2 anchored values for K4 and G6_3", anchored_values),
        ("3 random bound", random_bound),
        ("4 oracle sandwich n<=8", oracle_sandwich),
        ("5 tight family n=5..14", tightness),
        ("6 structure of stripped instances", structure),
        ("7 reduction contracts", reduction_contracts),
    ];
    let only: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        if only.as_ref().is_some_and(|o| !o.contains(&(i + 1))) {
            continue;
        }
        let t = Instant::now();
        let r = run();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(msg) => report(format!("PASS {name}: {msg} ({secs:.1}s)")),
            Err(msg) => {
                failed += 1;
                report(format!("FAIL {name}: {msg} ({secs:.1}s)"));
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
