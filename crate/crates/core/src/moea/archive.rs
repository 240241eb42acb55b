//! CSV form of the per-generation archive.
//!
//! Columns: `generation,index,<genes…>,<objectives…>,rank,crowding`, with an
//! infinite crowding distance written as `inf`.

use std::io::{self, BufRead, Write};

use super::nsga2::{GenerationRecord, Individual};
use crate::csvfmt;

/// Column names for genes and objectives.
#[derive(Debug, Clone, PartialEq)]
pub struct Columns {
    pub genes: Vec<String>,
    pub objectives: Vec<String>,
}

impl Columns {
    pub fn generic(num_genes: usize, num_objectives: usize) -> Self {
        Columns {
            genes: (1..=num_genes).map(|i| format!("x_{i}")).collect(),
            objectives: (1..=num_objectives).map(|i| format!("f_{i}")).collect(),
        }
    }

    fn header(&self) -> String {
        let mut cols = vec!["generation".to_string(), "index".to_string()];
        cols.extend(self.genes.iter().cloned());
        cols.extend(self.objectives.iter().cloned());
        cols.push("rank".to_string());
        cols.push("crowding".to_string());
        cols.join(",")
    }
}

fn write_row<W: Write>(out: &mut W, generation: usize, index: usize, ind: &Individual) -> io::Result<()> {
    writeln!(
        out,
        "{generation},{index},{},{},{},{}",
        csvfmt::row(ind.genes.iter().copied()),
        csvfmt::row(ind.objectives.iter().copied()),
        ind.rank,
        csvfmt::num(ind.crowding)
    )
}

pub fn write_archive_csv<W: Write>(
    mut out: W,
    columns: &Columns,
    records: &[GenerationRecord],
) -> io::Result<()> {
    writeln!(out, "{}", columns.header())?;
    for rec in records {
        for (idx, ind) in rec.population.iter().enumerate() {
            write_row(&mut out, rec.generation, idx, ind)?;
        }
    }
    Ok(())
}

/// Rank-1 members of `record` only.
pub fn write_front_csv<W: Write>(
    mut out: W,
    columns: &Columns,
    record: &GenerationRecord,
) -> io::Result<()> {
    writeln!(out, "{}", columns.header())?;
    for (idx, ind) in record.population.iter().enumerate() {
        if ind.rank == 1 {
            write_row(&mut out, record.generation, idx, ind)?;
        }
    }
    Ok(())
}

/// One parsed archive line.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveRow {
    pub generation: usize,
    pub index: usize,
    pub individual: Individual,
}

/// Reads a file written by [`write_archive_csv`] or [`write_front_csv`].
pub fn read_archive_csv<R: BufRead>(input: R, num_genes: usize, num_objectives: usize) -> io::Result<Vec<ArchiveRow>> {
    let bad = |line: usize, msg: &str| io::Error::new(io::ErrorKind::InvalidData, format!("line {line}: {msg}"));
    let expected = 2 + num_genes + num_objectives + 2;
    let mut rows = Vec::new();
    for (n, line) in input.lines().enumerate().skip(1) {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != expected {
            return Err(bad(n + 1, &format!("expected {expected} fields, found {}", fields.len())));
        }
        let int = |s: &str| s.parse::<usize>().map_err(|_| bad(n + 1, "bad integer"));
        let float = |s: &str| csvfmt::parse_num(s).ok_or_else(|| bad(n + 1, "bad number"));
        let genes = fields[2..2 + num_genes].iter().map(|s| float(s)).collect::<io::Result<Vec<_>>>()?;
        let objectives = fields[2 + num_genes..2 + num_genes + num_objectives]
            .iter()
            .map(|s| float(s))
            .collect::<io::Result<Vec<_>>>()?;
        rows.push(ArchiveRow {
            generation: int(fields[0])?,
            index: int(fields[1])?,
            individual: Individual {
                genes,
                objectives,
                rank: int(fields[expected - 2])?,
                crowding: float(fields[expected - 1])?,
            },
        });
    }
    Ok(rows)
}
