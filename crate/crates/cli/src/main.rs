//! `orient-nt`: orient, verify, solve exactly and census near triangulations.
//!
//! Exit codes: 0 ok, 1 other error, 2 parse error, 3 not a near
//! triangulation, 4 verification failed, 5 search budget exhausted,
//! 6 bound exceeded on an exception graph without `--allow-exception`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{ArgAction, Parser, Subcommand};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use orient_nt::catalog::{self, Catalog};
use orient_nt::census::census;
use orient_nt::digraph::{anchored_ecc, diameter};
use orient_nt::exact::ExactError;
use orient_nt::formats::{certificate_report, parse_or, parse_pg, to_dot, write_or, write_pg, FormatError};
use orient_nt::{
    anchored_exact, ceil_half, generators, orient, oriented_diameter_exact, Certificate, Distance, EngineConfig,
    EngineError, Orientation, PlaneGraph, SearchBudget,
};

#[derive(Parser)]
#[command(
    name = "orient-nt",
    version,
    about = "Low-diameter strong orientations of near triangulations"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Orient one or more `.pg` files and certify the result.
    Orient {
        inputs: Vec<PathBuf>,
        /// Orientation output (single input only). Default: input with `.or`.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Report output (single input only). Default: stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Largest n solved directly by exact search.
        #[arg(long, default_value_t = 8)]
        base_max: usize,
        /// Check the diameter goal at every recursion level.
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        verify_levels: bool,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Solve a seeded random relabeling of the input, then map back.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
        /// Accept `ceil(n/2)+1` on catalog exceptions.
        #[arg(long)]
        allow_exception: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Exact oriented diameter by branch and bound.
    Exact {
        input: PathBuf,
        #[arg(long)]
        budget_nodes: Option<u64>,
        #[arg(long)]
        budget_secs: Option<f64>,
        /// Anchor vertex (1-based).
        #[arg(long)]
        anchor: Option<usize>,
        /// Anchored eccentricity cap. Default: `ceil(n/2)`.
        #[arg(long, requires = "anchor")]
        anchor_bound: Option<u32>,
        /// Witness output. Default: stdout after the value.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate all near triangulations up to `--nmax` with exact diameters.
    Census {
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        /// Write `census.tsv` and per-graph files here.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Rewrite the exception catalog (`ORIENT_NT_CACHE`, else `exceptions.cat`).
        #[arg(long)]
        rebuild_catalog: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Check an orientation against a graph.
    Verify {
        graph: PathBuf,
        orientation: PathBuf,
        #[arg(long)]
        allow_exception: bool,
        #[arg(long)]
        json: bool,
    },
    /// Write a generated graph as `.pg`.
    Generate {
        /// random, snake, fan, wheel, tight, k4, k4minus, triangle
        #[arg(long, default_value = "random")]
        family: String,
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        bias: f64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

struct Fail {
    code: u8,
    msg: String,
}

impl Fail {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        Fail { code, msg: msg.into() }
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        Fail::new(1, e.to_string())
    }
}

fn format_fail(path: &Path, e: FormatError) -> Fail {
    match e {
        FormatError::Graph(g) => Fail::new(3, format!("{}: {g}", path.display())),
        other => Fail::new(2, format!("{}: {other}", path.display())),
    }
}

fn engine_fail(e: EngineError) -> Fail {
    match e {
        EngineError::NotNearTriangulation(_) | EngineError::NotMaximalOuterplanar => Fail::new(3, e.to_string()),
        EngineError::VerificationFailed { .. } => Fail::new(4, e.to_string()),
        other => Fail::new(1, other.to_string()),
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail::new(1, format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<PlaneGraph, Fail> {
    parse_pg(&read(path)?).map_err(|e| format_fail(path, e))
}

fn set_jobs(jobs: Option<usize>) -> Result<(), Fail> {
    if let Some(k) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| Fail::new(1, e.to_string()))?;
    }
    Ok(())
}

fn catalog_name(g: &PlaneGraph) -> Result<Option<String>, Fail> {
    let cat = catalog::global().map_err(|e| Fail::new(1, e.to_string()))?;
    Ok(cat.lookup(g).map(|m| m.entry.name.to_string()))
}

fn certificate_json(c: &Certificate, name: Option<&str>) -> Value {
    json!({
        "diameter": c.diameter.finite(),
        "bound": c.bound,
        "strong": c.strongly_connected,
        "exception": c.exception,
        "exception_name": name,
        "trace": c.trace,
    })
}

fn orient_seeded(g: &PlaneGraph, cfg: &EngineConfig, seed: Option<u64>) -> Result<Certificate, EngineError> {
    let Some(seed) = seed else {
        return orient(g, cfg);
    };
    let mut perm: Vec<usize> = (0..g.n()).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let c = orient(&g.relabel(&perm), cfg)?;
    let mut inverse = vec![0; g.n()];
    for (old, &new) in perm.iter().enumerate() {
        inverse[new] = old;
    }
    let mut trace = vec![format!("relabeled with seed {seed}; ids below are relabeled")];
    trace.extend(c.trace);
    Certificate::build(g, c.orientation.relabel(&inverse, g.n()), c.exception, trace)
        .map_err(|e| EngineError::PreconditionFailed(e.to_string()))
}

struct OrientOpts<'a> {
    cfg: &'a EngineConfig,
    seed: Option<u64>,
    allow_exception: bool,
    json: bool,
}

/// Orients one file and returns its report.
fn orient_one(input: &Path, out: &Path, dot: Option<&Path>, o: &OrientOpts<'_>) -> Result<String, Fail> {
    let g = read_graph(input)?;
    let c = orient_seeded(&g, o.cfg, o.seed).map_err(engine_fail)?;
    if !c.verify(&g) {
        return Err(Fail::new(
            4,
            format!("{}: certificate does not verify", input.display()),
        ));
    }
    fs::write(out, write_or(&c.orientation))?;
    if let Some(p) = dot {
        fs::write(p, to_dot(&c.orientation, Some(&g)))?;
    }
    let name = catalog_name(&g)?;
    let report = if o.json {
        let mut v = certificate_json(&c, name.as_deref());
        v["input"] = json!(input.display().to_string());
        v["n"] = json!(g.n());
        format!("{v}\n")
    } else {
        certificate_report(&c)
    };
    let over = c.diameter.finite().is_none_or(|d| d > c.bound);
    if over && !(o.allow_exception && name.is_some()) {
        return Err(Fail::new(
            6,
            format!(
                "{report}{}: diameter {} exceeds bound {}",
                input.display(),
                c.diameter,
                c.bound
            ),
        ));
    }
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn cmd_orient(
    inputs: Vec<PathBuf>,
    out: Option<PathBuf>,
    report: Option<PathBuf>,
    base_max: usize,
    verify_levels: bool,
    dot: Option<PathBuf>,
    o: OrientOpts<'_>,
    jobs: Option<usize>,
) -> Result<(), Fail> {
    use rayon::prelude::*;
    if inputs.is_empty() {
        return Err(Fail::new(1, "no input files"));
    }
    if inputs.len() > 1 && (out.is_some() || report.is_some() || dot.is_some()) {
        return Err(Fail::new(1, "--out, --report and --dot take a single input"));
    }
    set_jobs(jobs)?;
    let cfg = EngineConfig {
        base_case_max_n: base_max,
        verify_every_level: verify_levels,
        ..EngineConfig::default()
    };
    let o = OrientOpts { cfg: &cfg, ..o };
    let results: Vec<Result<String, Fail>> = inputs
        .par_iter()
        .map(|input| {
            let out = out.clone().unwrap_or_else(|| input.with_extension("or"));
            orient_one(input, &out, dot.as_deref(), &o)
        })
        .collect();
    let mut worst: Option<Fail> = None;
    for (input, r) in inputs.iter().zip(results) {
        match r {
            Ok(text) => match &report {
                Some(p) => fs::write(p, text)?,
                None if inputs.len() > 1 && !o.json => print!("== {}\n{text}", input.display()),
                None => print!("{text}"),
            },
            Err(f) => {
                eprintln!("{}", f.msg);
                if worst.as_ref().is_none_or(|w| f.code > w.code) {
                    worst = Some(f);
                }
            }
        }
    }
    match worst {
        Some(f) => Err(Fail::new(f.code, String::new())),
        None => Ok(()),
    }
}

fn cmd_exact(
    input: PathBuf,
    budget_nodes: Option<u64>,
    budget_secs: Option<f64>,
    anchor: Option<usize>,
    anchor_bound: Option<u32>,
    out: Option<PathBuf>,
    as_json: bool,
) -> Result<(), Fail> {
    let g = read_graph(&input)?;
    let budget = SearchBudget {
        max_nodes: budget_nodes,
        time_limit: budget_secs
            .map(Duration::try_from_secs_f64)
            .transpose()
            .map_err(|e| Fail::new(1, format!("--budget-secs: {e}")))?,
        target_bound: None,
    };
    let anchor = match anchor {
        Some(0) => return Err(Fail::new(1, "--anchor is 1-based")),
        Some(v) => Some((v - 1, anchor_bound.unwrap_or(ceil_half(g.n())))),
        None => None,
    };
    let r = match anchor {
        Some((v, b)) => anchored_exact(&g, v, b, &budget),
        None => oriented_diameter_exact(&g, &budget),
    };
    let emit = |value: u32, d: &Orientation, proven: bool, nodes: Option<u64>| -> Result<(), Fail> {
        let ecc = anchor.map(|(v, _)| anchored_ecc(d, v).ok());
        if as_json {
            let v = json!({
                "value": value,
                "proven_optimal": proven,
                "nodes": nodes,
                "anchor_ecc": ecc.flatten(),
                "witness": d.arcs().iter().map(|&(a, b)| [a + 1, b + 1]).collect::<Vec<_>>(),
            });
            println!("{v}");
        } else {
            println!("{value}");
            if !proven {
                println!("proven_optimal=false");
            }
            if let Some(Some(e)) = ecc {
                println!("anchor_ecc={e}");
            }
        }
        match &out {
            Some(p) => fs::write(p, write_or(d))?,
            None if !as_json => print!("{}", write_or(d)),
            None => {}
        }
        Ok(())
    };
    match r {
        Ok(r) => emit(r.value, &r.witness, r.proven_optimal, Some(r.nodes)),
        Err(ExactError::BudgetExhausted {
            incumbent,
            lower_bound,
            nodes,
        }) => {
            if let Some((value, d)) = incumbent {
                emit(value, &d, false, Some(nodes))?;
            }
            Err(Fail::new(
                5,
                format!("budget exhausted after {nodes} nodes (lower bound {lower_bound})"),
            ))
        }
        Err(e @ ExactError::VertexOutOfRange(_)) => Err(Fail::new(1, e.to_string())),
        Err(e) => Err(Fail::new(3, e.to_string())),
    }
}

fn cmd_census(nmax: usize, out: Option<PathBuf>, rebuild: bool, jobs: Option<usize>) -> Result<(), Fail> {
    if nmax < 3 {
        return Err(Fail::new(1, "--nmax must be at least 3"));
    }
    set_jobs(jobs)?;
    let c = census(nmax).map_err(|e| Fail::new(1, e.to_string()))?;
    println!("n\tgraphs\texceptions");
    for (n, graphs, ex) in c.counts() {
        println!("{n}\t{graphs}\t{ex}");
    }
    let cat = catalog::global().map_err(|e| Fail::new(1, e.to_string()))?;
    for r in c.exceptions() {
        let name = cat
            .lookup(&r.graph)
            .map(|m| m.entry.name.to_string())
            .unwrap_or_else(|| "?".into());
        println!(
            "exception id={} n={} m={} od={} name={name}",
            r.id, r.n, r.m, r.oriented_diameter
        );
    }
    let total = c.exceptions().count();
    println!("total exceptions: {total}");
    if let Some(dir) = out {
        c.write_dir(&dir)?;
    }
    if rebuild {
        if nmax < catalog::MAX_EXCEPTION_N {
            return Err(Fail::new(
                1,
                format!("--rebuild-catalog needs --nmax >= {}", catalog::MAX_EXCEPTION_N),
            ));
        }
        let fresh = Catalog::from_census(&c).map_err(|e| Fail::new(1, e.to_string()))?;
        let path = std::env::var_os("ORIENT_NT_CACHE").map_or_else(|| PathBuf::from("exceptions.cat"), PathBuf::from);
        fs::write(&path, fresh.to_text())?;
        println!("catalog written to {}", path.display());
    }
    if nmax >= 8 && c.rows.iter().filter(|r| r.n <= 8 && r.exception).count() != 7 {
        return Err(Fail::new(1, "expected exactly 7 exceptions up to n = 8"));
    }
    Ok(())
}

fn cmd_verify(graph: PathBuf, orientation: PathBuf, allow_exception: bool, as_json: bool) -> Result<(), Fail> {
    let g = read_graph(&graph)?;
    let d = parse_or(&read(&orientation)?, g.n()).map_err(|e| format_fail(&orientation, e))?;
    d.check_covers(&g)
        .map_err(|e| Fail::new(2, format!("{}: {e}", orientation.display())))?;
    let diam = diameter(&d);
    let bound = ceil_half(g.n());
    let name = catalog_name(&g)?;
    let problems: Vec<(usize, &str)> = (0..g.n())
        .filter_map(|v| match (d.out_degree(v), d.in_degree(v)) {
            (0, _) => Some((v, "sink")),
            (_, 0) => Some((v, "source")),
            _ => None,
        })
        .collect();
    if as_json {
        let v = json!({
            "diameter": diam.finite(),
            "bound": bound,
            "strong": diam.is_finite(),
            "exception": name.is_some(),
            "exception_name": name,
            "problems": problems.iter().map(|&(v, kind)| json!({"vertex": v + 1, "kind": kind})).collect::<Vec<_>>(),
        });
        println!("{v}");
    } else {
        println!(
            "diameter={diam}\nbound={bound}\nstrong={}\nexception={}",
            diam.is_finite(),
            name.is_some()
        );
    }
    match diam {
        Distance::Infinite => Err(Fail::new(
            4,
            if problems.is_empty() {
                "not strongly connected".into()
            } else {
                let what: Vec<String> = problems
                    .iter()
                    .map(|&(v, kind)| format!("vertex {} is a {kind}", v + 1))
                    .collect();
                format!("not strongly connected: {}", what.join(", "))
            },
        )),
        Distance::Finite(x) if x > bound => {
            if allow_exception && name.is_some() {
                Ok(())
            } else if name.is_some() {
                Err(Fail::new(
                    6,
                    format!("diameter {x} exceeds bound {bound} (exception graph)"),
                ))
            } else {
                Err(Fail::new(4, format!("diameter {x} exceeds bound {bound}")))
            }
        }
        Distance::Finite(_) => Ok(()),
    }
}

fn cmd_generate(family: &str, n: usize, seed: u64, bias: f64, out: Option<PathBuf>) -> Result<(), Fail> {
    let need = |min: usize| {
        if n < min {
            Err(Fail::new(1, format!("{family} needs n >= {min}")))
        } else {
            Ok(())
        }
    };
    let g = match family {
        "random" => {
            need(3)?;
            if !(0.0..=1.0).contains(&bias) {
                return Err(Fail::new(1, "--bias must be in [0, 1]"));
            }
            generators::random_near_triangulation(n, seed, bias)
        }
        "snake" => {
            need(3)?;
            generators::snake(n)
        }
        "fan" => {
            need(3)?;
            generators::fan(n)
        }
        "wheel" => {
            need(4)?;
            generators::wheel(n - 1)
        }
        "tight" => {
            need(5)?;
            generators::tight_family(n)
        }
        "k4" => generators::k4(),
        "k4minus" => generators::k4_minus(),
        "triangle" => generators::triangle(),
        other => return Err(Fail::new(1, format!("unknown family `{other}`"))),
    };
    match out {
        Some(p) => fs::write(p, write_pg(&g))?,
        None => print!("{}", write_pg(&g)),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Fail> {
    match cli.cmd {
        Cmd::Orient {
            inputs,
            out,
            report,
            base_max,
            verify_levels,
            dot,
            seed,
            json,
            allow_exception,
            jobs,
        } => {
            let cfg = EngineConfig::default();
            let o = OrientOpts {
                cfg: &cfg,
                seed,
                allow_exception,
                json,
            };
            cmd_orient(inputs, out, report, base_max, verify_levels, dot, o, jobs)
        }
        Cmd::Exact {
            input,
            budget_nodes,
            budget_secs,
            anchor,
            anchor_bound,
            out,
            json,
        } => cmd_exact(input, budget_nodes, budget_secs, anchor, anchor_bound, out, json),
        Cmd::Census {
            nmax,
            out,
            rebuild_catalog,
            jobs,
        } => cmd_census(nmax, out, rebuild_catalog, jobs),
        Cmd::Verify {
            graph,
            orientation,
            allow_exception,
            json,
        } => cmd_verify(graph, orientation, allow_exception, json),
        Cmd::Generate {
            family,
            n,
            seed,
            bias,
            out,
        } => cmd_generate(&family, n, seed, bias, out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.msg.is_empty() {
                eprintln!("error: {}", f.msg);
            }
            ExitCode::from(f.code)
        }
    }
}
