//! Exhaustive census: every 2-connected near triangulation up to a size,
//! with its exact oriented diameter.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use rayon::prelude::*;

use crate::canon::canonical_form;
use crate::digraph::{ceil_half, Orientation};
use crate::exact::{oriented_diameter_exact, ExactError, SearchBudget};
use crate::formats::{write_or, write_pg};
use crate::generators::enumerate;
use crate::plane_graph::PlaneGraph;

#[derive(Debug, Clone)]
pub struct CensusRow {
    /// 1-based running id, ordered by `n` then canonical key.
    pub id: usize,
    pub n: usize,
    pub m: usize,
    pub oriented_diameter: u32,
    pub bound: u32,
    pub exception: bool,
    pub key: String,
    pub graph: PlaneGraph,
    pub witness: Orientation,
}

#[derive(Debug, Clone, Default)]
pub struct Census {
    pub rows: Vec<CensusRow>,
}

impl Census {
    pub fn exceptions(&self) -> impl Iterator<Item = &CensusRow> {
        self.rows.iter().filter(|r| r.exception)
    }

    /// `(n, graphs, exceptions)` per size.
    pub fn counts(&self) -> Vec<(usize, usize, usize)> {
        let mut out: Vec<(usize, usize, usize)> = Vec::new();
        for r in &self.rows {
            match out.last_mut() {
                Some(last) if last.0 == r.n => {
                    last.1 += 1;
                    last.2 += r.exception as usize;
                }
                _ => out.push((r.n, 1, r.exception as usize)),
            }
        }
        out
    }

    pub fn tsv(&self) -> String {
        let mut out = String::from("id\tn\tm\toriented_diameter\tbound\texception\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                r.id, r.n, r.m, r.oriented_diameter, r.bound, r.exception
            );
        }
        out
    }

    /// Writes `census.tsv` plus `g<id>.pg` / `g<id>.or` per row.
    pub fn write_dir(&self, dir: &Path) -> io::Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("census.tsv"), self.tsv())?;
        for r in &self.rows {
            fs::write(dir.join(format!("g{}.pg", r.id)), write_pg(&r.graph))?;
            fs::write(dir.join(format!("g{}.or", r.id)), write_or(&r.witness))?;
        }
        Ok(())
    }
}

/// Census of all sizes `3..=n_max`. Solving runs on the current rayon pool.
pub fn census(n_max: usize) -> Result<Census, ExactError> {
    let mut rows = Vec::new();
    for n in 3..=n_max {
        let solved: Vec<(PlaneGraph, u32, Orientation)> = enumerate(n)
            .into_par_iter()
            .map(|g| {
                let r = oriented_diameter_exact(&g, &SearchBudget::unlimited())?;
                Ok((g, r.value, r.witness))
            })
            .collect::<Result<_, ExactError>>()?;
        for (g, od, witness) in solved {
            let bound = ceil_half(n);
            rows.push(CensusRow {
                id: rows.len() + 1,
                n,
                m: g.m(),
                oriented_diameter: od,
                bound,
                exception: od > bound,
                key: canonical_form(&g).key(),
                graph: g,
                witness,
            });
        }
    }
    Ok(Census { rows })
}
