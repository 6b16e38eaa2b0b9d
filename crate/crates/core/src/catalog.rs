//! The seven exceptional near triangulations, taken from the `n <= 8`
//! census rather than typed in by hand.
//!
//! Names follow (n, outerplanarity, degrees): `K4minus` and `K4` at n = 4;
//! at n = 6 the wheel `W5`, the other non-outerplanar graph `G6_3`, and the
//! two outerplanar ones `G6_1`, `G6_2` in canonical-key order; `G8_1` at n = 8.

use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use thiserror::Error;

use crate::canon::canonical_form;
use crate::census::{census, Census};
use crate::digraph::{self, ceil_half, Distance, Orientation};
use crate::exact::{anchored_exact, ExactError, SearchBudget};
use crate::formats::{parse_or, parse_pg, write_or, write_pg, FormatError};
use crate::plane_graph::{PlaneGraph, VertexId};

/// Largest exception size; lookups skip anything bigger.
pub const MAX_EXCEPTION_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExceptionName {
    K4Minus,
    K4,
    W5,
    G6_1,
    G6_2,
    G6_3,
    G8_1,
}

impl ExceptionName {
    pub const ALL: [ExceptionName; 7] = [
        ExceptionName::K4Minus,
        ExceptionName::K4,
        ExceptionName::W5,
        ExceptionName::G6_1,
        ExceptionName::G6_2,
        ExceptionName::G6_3,
        ExceptionName::G8_1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExceptionName::K4Minus => "K4minus",
            ExceptionName::K4 => "K4",
            ExceptionName::W5 => "W5",
            ExceptionName::G6_1 => "G6_1",
            ExceptionName::G6_2 => "G6_2",
            ExceptionName::G6_3 => "G6_3",
            ExceptionName::G8_1 => "G8_1",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.as_str() == s)
    }
}

impl fmt::Display for ExceptionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("census mismatch: {0}")]
    CensusMismatch(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("catalog file: {0}")]
    Format(String),
}

impl From<FormatError> for CatalogError {
    fn from(e: FormatError) -> Self {
        CatalogError::Format(e.to_string())
    }
}

/// An optimal orientation with the smallest anchored eccentricity at `vertex`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Anchor {
    pub vertex: VertexId,
    pub ecc: u32,
    pub orientation: Orientation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: ExceptionName,
    pub graph: PlaneGraph,
    pub canonical_form: String,
    pub exact_od: u32,
    pub optimal_orientation: Orientation,
    /// One per vertex.
    pub anchors: Vec<Anchor>,
    labeling: Vec<usize>,
}

impl CatalogEntry {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn anchor(&self, v: VertexId) -> Option<&Anchor> {
        self.anchors.iter().find(|a| a.vertex == v)
    }

    fn check(&self) -> Result<(), CatalogError> {
        let bad = |msg: String| Err(CatalogError::CensusMismatch(format!("{}: {msg}", self.name)));
        if canonical_form(&self.graph).key() != self.canonical_form {
            return bad("canonical form does not match graph".into());
        }
        if self.exact_od != ceil_half(self.n()) + 1 {
            return bad(format!("oriented diameter {} is not ceil(n/2)+1", self.exact_od));
        }
        for d in std::iter::once(&self.optimal_orientation).chain(self.anchors.iter().map(|a| &a.orientation)) {
            if d.check_covers(&self.graph).is_err() || digraph::diameter(d) != Distance::Finite(self.exact_od) {
                return bad("stored orientation does not attain the oriented diameter".into());
            }
        }
        for a in &self.anchors {
            if digraph::anchored_ecc(&a.orientation, a.vertex) != Ok(a.ecc) {
                return bad(format!("anchor {} does not have eccentricity {}", a.vertex + 1, a.ecc));
            }
        }
        Ok(())
    }
}

/// Isomorphism from a catalog entry onto some input graph.
#[derive(Debug, Clone)]
pub struct CatalogMatch<'a> {
    pub entry: &'a CatalogEntry,
    /// `map[x]` is the input vertex playing the role of entry vertex `x`.
    pub map: Vec<VertexId>,
}

impl CatalogMatch<'_> {
    pub fn orientation(&self) -> Orientation {
        self.entry.optimal_orientation.relabel(&self.map, self.map.len())
    }

    /// Anchored orientation at input vertex `v`: `(anchored ecc, orientation)`.
    pub fn anchored(&self, v: VertexId) -> Option<(u32, Orientation)> {
        let x = self.map.iter().position(|&y| y == v)?;
        let a = self.entry.anchor(x)?;
        Some((a.ecc, a.orientation.relabel(&self.map, self.map.len())))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

fn name_of(g: &PlaneGraph, outerplanar_rank: &mut usize) -> Option<ExceptionName> {
    let outerplanar = g.interior_vertices().is_empty();
    match (g.n(), outerplanar) {
        (4, _) if g.m() == 6 => Some(ExceptionName::K4),
        (4, _) => Some(ExceptionName::K4Minus),
        (6, false) if g.interior_vertices().iter().any(|&v| g.degree(v) == 5) => Some(ExceptionName::W5),
        (6, false) => Some(ExceptionName::G6_3),
        (6, true) => {
            *outerplanar_rank += 1;
            match *outerplanar_rank {
                1 => Some(ExceptionName::G6_1),
                2 => Some(ExceptionName::G6_2),
                _ => None,
            }
        }
        (8, _) => Some(ExceptionName::G8_1),
        _ => None,
    }
}

fn best_anchor(g: &PlaneGraph, v: VertexId, od: u32) -> Result<Anchor, CatalogError> {
    for b in 1..=od {
        match anchored_exact(g, v, b, &SearchBudget::unlimited()) {
            Ok(r) if r.value == od => {
                return Ok(Anchor {
                    vertex: v,
                    ecc: digraph::anchored_ecc(&r.witness, v).expect("strong"),
                    orientation: r.witness,
                })
            }
            Ok(_) | Err(ExactError::Infeasible) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(CatalogError::CensusMismatch(format!(
        "no optimal orientation anchored at {}",
        v + 1
    )))
}

impl Catalog {
    pub fn bootstrap() -> Result<Self, CatalogError> {
        Self::from_census(&census(MAX_EXCEPTION_N)?)
    }

    pub fn from_census(c: &Census) -> Result<Self, CatalogError> {
        let mut rows: Vec<_> = c.exceptions().collect();
        rows.sort_by(|a, b| (a.n, &a.key).cmp(&(b.n, &b.key)));
        let mut rank = 0;
        let mut entries = Vec::new();
        for r in rows {
            let name = name_of(&r.graph, &mut rank)
                .ok_or_else(|| CatalogError::CensusMismatch(format!("unexpected exception at n={}", r.n)))?;
            let anchors = (0..r.n)
                .map(|v| best_anchor(&r.graph, v, r.oriented_diameter))
                .collect::<Result<Vec<_>, _>>()?;
            let cf = canonical_form(&r.graph);
            entries.push(CatalogEntry {
                name,
                graph: r.graph.clone(),
                canonical_form: cf.key(),
                exact_od: r.oriented_diameter,
                optimal_orientation: r.witness.clone(),
                anchors,
                labeling: cf.labeling,
            });
        }
        entries.sort_by_key(|e| e.name);
        let catalog = Catalog { entries };
        catalog.check()?;
        Ok(catalog)
    }

    fn check(&self) -> Result<(), CatalogError> {
        let names: Vec<ExceptionName> = self.entries.iter().map(|e| e.name).collect();
        if names != ExceptionName::ALL {
            return Err(CatalogError::CensusMismatch(format!(
                "expected 7 named exceptions, found {}",
                names.iter().map(|n| n.as_str()).collect::<Vec<_>>().join(", ")
            )));
        }
        self.entries.iter().try_for_each(CatalogEntry::check)
    }

    pub fn get(&self, name: ExceptionName) -> &CatalogEntry {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .expect("catalog is complete")
    }

    pub fn lookup(&self, g: &PlaneGraph) -> Option<CatalogMatch<'_>> {
        if g.n() > MAX_EXCEPTION_N || g.n() < 4 {
            return None;
        }
        let cf = canonical_form(g);
        let key = cf.key();
        let entry = self.entries.iter().find(|e| e.canonical_form == key)?;
        let order = cf.order();
        let map = entry.labeling.iter().map(|&p| order[p]).collect();
        Some(CatalogMatch { entry, map })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# orient-nt exception catalog\n");
        for e in &self.entries {
            out.push_str(&format!(
                "entry {}\nod {}\nkey {}\ngraph\n",
                e.name, e.exact_od, e.canonical_form
            ));
            out.push_str(&write_pg(&e.graph));
            out.push_str("orientation\n");
            out.push_str(&write_or(&e.optimal_orientation));
            for a in &e.anchors {
                out.push_str(&format!("anchor {} {}\n", a.vertex + 1, a.ecc));
                out.push_str(&write_or(&a.orientation));
            }
            out.push_str("end\n");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, CatalogError> {
        let lines: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let err = |msg: String| CatalogError::Format(msg);
        let is_marker =
            |l: &str| l == "orientation" || l == "end" || l.starts_with("anchor ") || l.starts_with("entry ");
        // lines from `i` up to the next marker
        let block = |i: &mut usize| -> String {
            let start = *i;
            while *i < lines.len() && !is_marker(lines[*i]) {
                *i += 1;
            }
            lines[start..*i].join("\n")
        };
        let mut entries = Vec::new();
        let mut i = 0;
        while i < lines.len() {
            let name = lines[i]
                .strip_prefix("entry ")
                .and_then(ExceptionName::parse)
                .ok_or_else(|| err(format!("expected `entry <name>`, found `{}`", lines[i])))?;
            let field = |i: usize, prefix: &str| -> Result<&str, CatalogError> {
                lines
                    .get(i)
                    .and_then(|l| l.strip_prefix(prefix))
                    .ok_or_else(|| err(format!("{name}: expected `{prefix}` line")))
            };
            let od: u32 = field(i + 1, "od ")?
                .parse()
                .map_err(|_| err(format!("{name}: bad od")))?;
            let key = field(i + 2, "key ")?.to_string();
            field(i + 3, "graph")?;
            i += 4;
            let graph = parse_pg(&block(&mut i))?;
            field(i, "orientation")?;
            i += 1;
            let optimal_orientation = parse_or(&block(&mut i), graph.n())?;
            let mut anchors = Vec::new();
            while let Some(rest) = lines.get(i).and_then(|l| l.strip_prefix("anchor ")) {
                let nums: Vec<usize> = rest.split_whitespace().filter_map(|t| t.parse().ok()).collect();
                if nums.len() != 2 || nums[0] == 0 || nums[0] > graph.n() {
                    return Err(err(format!("{name}: bad anchor line `{}`", lines[i])));
                }
                i += 1;
                let orientation = parse_or(&block(&mut i), graph.n())?;
                anchors.push(Anchor {
                    vertex: nums[0] - 1,
                    ecc: nums[1] as u32,
                    orientation,
                });
            }
            field(i, "end")?;
            i += 1;
            let labeling = canonical_form(&graph).labeling;
            entries.push(CatalogEntry {
                name,
                graph,
                canonical_form: key,
                exact_od: od,
                optimal_orientation,
                anchors,
                labeling,
            });
        }
        let catalog = Catalog { entries };
        catalog.check()?;
        Ok(catalog)
    }

    /// Reads a cache file, or bootstraps and tries to write one.
    pub fn load_or_bootstrap(path: &Path) -> Result<Self, CatalogError> {
        if let Ok(text) = std::fs::read_to_string(path) {
            if let Ok(c) = Self::from_text(&text) {
                return Ok(c);
            }
        }
        let c = Self::bootstrap()?;
        let _ = std::fs::write(path, c.to_text());
        Ok(c)
    }
}

static GLOBAL: OnceLock<Result<Catalog, CatalogError>> = OnceLock::new();

/// Process-wide catalog. Uses the file named by `ORIENT_NT_CACHE` when set.
pub fn global() -> Result<&'static Catalog, CatalogError> {
    GLOBAL
        .get_or_init(|| match std::env::var_os("ORIENT_NT_CACHE") {
            Some(p) => Catalog::load_or_bootstrap(Path::new(&p)),
            None => Catalog::bootstrap(),
        })
        .as_ref()
        .map_err(Clone::clone)
}
