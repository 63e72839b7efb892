use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::record::NamedVerdict;
use crate::error::Result;
use crate::graph::{accordion, AccordionParams};
use crate::hamiltonicity::{reference_cell, Agreement, CellStatus, PmhTable, ReferenceCell};

fn symbol(s: CellStatus) -> &'static str {
    match s {
        CellStatus::Holds => "P",
        CellStatus::Fails => "X",
        CellStatus::BudgetExceeded => "B",
        CellStatus::NotApplicable => ".",
    }
}

fn status_word(s: CellStatus) -> &'static str {
    match s {
        CellStatus::Holds => "HOLDS",
        CellStatus::Fails => "FAILS",
        CellStatus::BudgetExceeded => "BUDGET_EXCEEDED",
        CellStatus::NotApplicable => "N/A",
    }
}

fn reference_word(n: usize, k: usize) -> &'static str {
    match reference_cell(n, k) {
        Some(ReferenceCell::Pmh) => "PMH",
        Some(ReferenceCell::NotPmh) => "NOT_PMH",
        Some(ReferenceCell::Unknown) => "UNKNOWN",
        Some(ReferenceCell::Invalid) => "N/A",
        None => "",
    }
}

fn witness_name(n: usize, k: usize) -> String {
    format!("A_{n}_{k}.json")
}

/// `n,k,status,reference,witness,nodes,seconds,cached`, one row per cell.
pub fn table_csv(table: &PmhTable, witness_dir: Option<&Path>) -> String {
    let mut out = String::from("n,k,status,reference,witness,nodes,seconds,cached\n");
    for c in &table.cells {
        let witness = match (c.status, witness_dir) {
            (CellStatus::Fails, Some(d)) => d.join(witness_name(c.n, c.k)).display().to_string(),
            _ => String::new(),
        };
        let (nodes, secs) = c
            .verdict
            .as_ref()
            .map_or((String::new(), String::new()), |v| {
                (
                    v.stats.nodes.to_string(),
                    format!("{:.3}", v.stats.elapsed_secs),
                )
            });
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            c.n,
            c.k,
            status_word(c.status),
            reference_word(c.n, c.k),
            witness,
            nodes,
            secs,
            c.cached
        );
    }
    out
}

/// Grid with one row per `n`. `P` holds, `X` fails, `B` budget exceeded,
/// `.` invalid parameters; `*` marks a cell the reference leaves open, and
/// `!` a disagreement with the reference.
pub fn table_text(table: &PmhTable) -> String {
    let mut ns: Vec<usize> = table.cells.iter().map(|c| c.n).collect();
    let mut ks: Vec<usize> = table.cells.iter().map(|c| c.k).collect();
    ns.sort_unstable();
    ns.dedup();
    ks.sort_unstable();
    ks.dedup();
    let mismatches = table.agreement().mismatches;
    let mut out = String::from(" n\\k");
    for k in &ks {
        let _ = write!(out, "{k:>4}");
    }
    out.push('\n');
    for &n in &ns {
        let _ = write!(out, "{n:>4}");
        for &k in &ks {
            let cell = table.get(n, k).map_or(" ", |c| symbol(c.status));
            let mark = if mismatches.contains(&(n, k)) {
                "!"
            } else if reference_cell(n, k) == Some(ReferenceCell::Unknown) {
                "*"
            } else {
                " "
            };
            let _ = write!(out, "{:>3}{mark}", cell);
        }
        out.push('\n');
    }
    out
}

pub fn agreement_text(a: &Agreement) -> String {
    let mut out = format!(
        "agreement: {}/{} definitive reference cells ({:.1}%)\n",
        a.agreed,
        a.compared,
        a.percent()
    );
    let list = |v: &[(usize, usize)]| {
        v.iter()
            .map(|(n, k)| format!("({n},{k})"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    if !a.mismatches.is_empty() {
        let _ = writeln!(out, "mismatches: {}", list(&a.mismatches));
    }
    if !a.undecided.is_empty() {
        let _ = writeln!(out, "undecided within budget: {}", list(&a.undecided));
    }
    if !a.reference_unknown.is_empty() {
        let _ = writeln!(
            out,
            "reference unknown (informational only): {}",
            list(&a.reference_unknown)
        );
    }
    out
}

#[derive(Serialize)]
pub struct TableFiles {
    pub csv: PathBuf,
    pub text: PathBuf,
    pub agreement: PathBuf,
    pub witnesses: Vec<PathBuf>,
}

/// Writes `table.csv`, `table.txt`, `agreement.json` and one named witness
/// file per failing cell under `dir/witnesses/`.
pub fn write_table(table: &PmhTable, dir: &Path) -> Result<TableFiles> {
    let wdir = dir.join("witnesses");
    std::fs::create_dir_all(&wdir)?;
    let mut witnesses = Vec::new();
    for c in &table.cells {
        if let (CellStatus::Fails, Some(v)) = (c.status, &c.verdict) {
            let g = accordion(AccordionParams::new(c.n, c.k)?)?;
            let path = wdir.join(witness_name(c.n, c.k));
            std::fs::write(&path, serde_json::to_vec_pretty(&NamedVerdict::new(&g, v))?)?;
            witnesses.push(path);
        }
    }
    let files = TableFiles {
        csv: dir.join("table.csv"),
        text: dir.join("table.txt"),
        agreement: dir.join("agreement.json"),
        witnesses,
    };
    let agreement = table.agreement();
    std::fs::write(&files.csv, table_csv(table, Some(&wdir)))?;
    std::fs::write(
        &files.text,
        format!("{}\n{}", table_text(table), agreement_text(&agreement)),
    )?;
    std::fs::write(&files.agreement, serde_json::to_vec_pretty(&agreement)?)?;
    Ok(files)
}
