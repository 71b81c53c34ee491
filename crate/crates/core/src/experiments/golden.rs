use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::sweeps::{fidelity_row, negativity_cell, System, Treatment};
use super::tolerance::{TolPolicy, Tolerance};
use crate::fock::{density_block, local_transform, normal_form_squeeze, qudit_subspace_deficit};
use crate::ion_chain::IonChainModel;
use crate::scalar_field::DEFAULT_MASS;
use crate::{Error, Result};

/// Chain length of the negativity tables.
pub const NEGATIVITY_CHAIN: usize = 150;
/// Absolute tolerance on squeeze factors and fidelities.
pub const FIDELITY_ABS_TOL: f64 = 0.002;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TableId {
    Table(u8),
    AppendixB,
}

impl TableId {
    pub const ALL: [TableId; 8] = [
        TableId::Table(1),
        TableId::Table(2),
        TableId::Table(3),
        TableId::Table(4),
        TableId::Table(5),
        TableId::Table(6),
        TableId::Table(7),
        TableId::AppendixB,
    ];

    pub fn file_name(self) -> String {
        match self {
            TableId::Table(k) => format!("table{k}.csv"),
            TableId::AppendixB => "appendix_b.csv".into(),
        }
    }

    /// The copy compiled into the library, if this table exists.
    pub fn embedded(self) -> Option<&'static str> {
        Some(match self {
            TableId::Table(1) => include_str!("../../golden/table1.csv"),
            TableId::Table(2) => include_str!("../../golden/table2.csv"),
            TableId::Table(3) => include_str!("../../golden/table3.csv"),
            TableId::Table(4) => include_str!("../../golden/table4.csv"),
            TableId::Table(5) => include_str!("../../golden/table5.csv"),
            TableId::Table(6) => include_str!("../../golden/table6.csv"),
            TableId::Table(7) => include_str!("../../golden/table7.csv"),
            TableId::AppendixB => include_str!("../../golden/appendix_b.csv"),
            TableId::Table(_) => return None,
        })
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "b" | "appendix-b" | "appendix_b" => Ok(TableId::AppendixB),
            other => match other.parse::<u8>() {
                Ok(k @ 1..=7) => Ok(TableId::Table(k)),
                _ => Err(Error::InvalidArgument(format!(
                    "unknown table '{s}' (expected 1..7 or appendix-b)"
                ))),
            },
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableId::Table(k) => write!(f, "table {k}"),
            TableId::AppendixB => f.write_str("appendix-b density block"),
        }
    }
}

/// Where golden CSVs come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GoldenSource {
    /// Copies compiled into the library.
    Embedded,
    /// `tableK.csv` / `appendix_b.csv` in a directory.
    Dir(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenTable {
    pub id: TableId,
    /// `key=value` pairs from `# ` comment lines.
    pub meta: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl GoldenTable {
    pub fn parse(id: TableId, text: &str) -> Result<Self> {
        let mut meta = Vec::new();
        let mut lines = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(c) = line.strip_prefix('#') {
                if let Some((k, v)) = c.trim().split_once('=') {
                    meta.push((k.trim().to_string(), v.trim().to_string()));
                }
            } else {
                lines.push(
                    line.split(',')
                        .map(|s| s.trim().to_string())
                        .collect::<Vec<_>>(),
                );
            }
        }
        let header = if id == TableId::AppendixB {
            Vec::new()
        } else if lines.is_empty() {
            return Err(Error::Golden(format!("{id}: empty file")));
        } else {
            lines.remove(0)
        };
        let width = if id == TableId::AppendixB {
            9
        } else {
            header.len()
        };
        if let Some((i, _)) = lines.iter().enumerate().find(|(_, r)| r.len() != width) {
            return Err(Error::Golden(format!(
                "{id}: row {} has the wrong width",
                i + 1
            )));
        }
        if id == TableId::AppendixB && lines.len() != 9 {
            return Err(Error::Golden(format!(
                "{id}: expected 9 rows, got {}",
                lines.len()
            )));
        }
        Ok(Self {
            id,
            meta,
            header,
            rows: lines,
        })
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn column(&self, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Golden(format!("{}: missing column '{name}'", self.id)))
    }
}

pub fn load_golden(id: TableId, source: &GoldenSource) -> Result<GoldenTable> {
    let text = match source {
        GoldenSource::Embedded => id
            .embedded()
            .ok_or_else(|| Error::Golden(format!("no such table: {id}")))?
            .to_string(),
        GoldenSource::Dir(dir) => read_file(&dir.join(id.file_name()))?,
    };
    GoldenTable::parse(id, &text)
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Golden(format!("cannot read {}: {e}", path.display())))
}

fn number(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::Golden(format!("not a number: '{s}'")))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellCheck {
    pub row: String,
    pub column: String,
    pub printed: String,
    pub golden: f64,
    pub computed: f64,
    pub tolerance: Tolerance,
    pub pass: bool,
}

impl CellCheck {
    fn new(
        row: String,
        column: &str,
        printed: &str,
        computed: f64,
        tolerance: Tolerance,
    ) -> Result<Self> {
        let golden = number(printed)?;
        Ok(Self {
            row,
            column: column.to_string(),
            printed: printed.to_string(),
            golden,
            computed,
            tolerance,
            pass: tolerance.accepts(computed, golden),
        })
    }

    /// `|computed − golden| / bound`, infinite for a missed exact zero.
    pub fn severity(&self) -> f64 {
        let dev = (self.computed - self.golden).abs();
        match self.tolerance.bound() {
            b if b > 0.0 => dev / b,
            _ if dev == 0.0 => 0.0,
            _ => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoldenReport {
    pub table: TableId,
    pub policy: TolPolicy,
    pub cells: Vec<CellCheck>,
}

impl GoldenReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CellCheck> {
        self.cells.iter().filter(|c| !c.pass)
    }

    /// The `k` cells closest to (or furthest past) their bound.
    pub fn worst(&self, k: usize) -> Vec<&CellCheck> {
        let mut v: Vec<&CellCheck> = self.cells.iter().collect();
        v.sort_by(|a, b| b.severity().total_cmp(&a.severity()));
        v.truncate(k);
        v
    }

    pub fn summary(&self) -> String {
        let failed = self.failures().count();
        let mut out = format!(
            "{}: {} cells, {} failed [{}]\n",
            self.table,
            self.cells.len(),
            failed,
            if failed == 0 { "PASS" } else { "FAIL" }
        );
        for c in self.failures() {
            out.push_str(&format!(
                "  FAIL {} / {}: golden {} computed {:.6e} (bound {:.1e})\n",
                c.row,
                c.column,
                c.printed,
                c.computed,
                c.tolerance.bound()
            ));
        }
        for c in self.worst(3) {
            out.push_str(&format!(
                "  worst {} / {}: golden {} computed {:.6e} ({:.2} of bound)\n",
                c.row,
                c.column,
                c.printed,
                c.computed,
                c.severity()
            ));
        }
        out
    }
}

const NEGATIVITY_COLUMNS: [(&str, System, Treatment); 6] = [
    ("ion_trace", System::Ion, Treatment::Trace),
    ("ion_phi", System::Ion, Treatment::Phi),
    ("ion_pi", System::Ion, Treatment::Pi),
    ("scalar_trace", System::Scalar, Treatment::Trace),
    ("scalar_phi", System::Scalar, Treatment::Phi),
    ("scalar_pi", System::Scalar, Treatment::Pi),
];

/// Recomputes every cell of a golden table and compares it under `policy`.
pub fn golden_check(id: TableId, policy: TolPolicy, source: &GoldenSource) -> Result<GoldenReport> {
    let table = load_golden(id, source)?;
    let cells = match id {
        TableId::Table(k @ 1..=3) => check_negativity(&table, [1, 3, 5][k as usize - 1], policy)?,
        TableId::Table(4..=6) => check_fidelity(&table, policy)?,
        TableId::Table(7) => check_fock(&table, policy)?,
        TableId::AppendixB => check_density(&table, policy)?,
        TableId::Table(_) => unreachable!(),
    };
    Ok(GoldenReport {
        table: id,
        policy,
        cells,
    })
}

fn check_negativity(table: &GoldenTable, d: usize, policy: TolPolicy) -> Result<Vec<CellCheck>> {
    let chain = IonChainModel::build(NEGATIVITY_CHAIN)?.local_mode_cm();
    let sep_col = table.column("separation")?;
    let mut jobs = Vec::new();
    for row in &table.rows {
        let separation: usize = row[sep_col]
            .parse()
            .map_err(|_| Error::Golden(format!("bad separation '{}'", row[sep_col])))?;
        for (name, system, treatment) in NEGATIVITY_COLUMNS {
            jobs.push((
                separation,
                name,
                system,
                treatment,
                row[table.column(name)?].clone(),
            ));
        }
    }
    jobs.par_iter()
        .map(|(separation, name, system, treatment, printed)| {
            let v = negativity_cell(
                *system,
                Some(&chain),
                DEFAULT_MASS,
                d,
                *separation,
                *treatment,
            )?;
            let golden = number(printed)?;
            let tol = Tolerance::from_printed(printed, golden, policy);
            let computed = if v.separable { 0.0 } else { v.value };
            CellCheck::new(
                format!("d={d} separation={separation}"),
                name,
                printed,
                computed,
                tol,
            )
        })
        .collect()
}

fn check_fidelity(table: &GoldenTable, policy: TolPolicy) -> Result<Vec<CellCheck>> {
    let n: usize = table
        .meta("chain_size")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Golden(format!("{}: missing chain_size", table.id)))?;
    let chain = IonChainModel::build(n)?.local_mode_cm();
    let (cw, cz, craw, csq) = (
        table.column("region_size")?,
        table.column("squeeze_z")?,
        table.column("fidelity_raw")?,
        table.column("fidelity_squeezed")?,
    );
    let tol = Tolerance::Absolute {
        bound: policy.scale_absolute(FIDELITY_ABS_TOL),
    };
    let per_row: Result<Vec<Vec<CellCheck>>> = table
        .rows
        .par_iter()
        .map(|row| {
            let w: usize = row[cw]
                .parse()
                .map_err(|_| Error::Golden(format!("bad region size '{}'", row[cw])))?;
            let r = fidelity_row(&chain, w, DEFAULT_MASS)?;
            let key = format!("N={n} W={w}");
            Ok(vec![
                CellCheck::new(key.clone(), "squeeze_z", &row[cz], r.squeeze_z, tol)?,
                CellCheck::new(key.clone(), "fidelity_raw", &row[craw], r.fidelity_raw, tol)?,
                CellCheck::new(
                    key,
                    "fidelity_squeezed",
                    &row[csq],
                    r.fidelity_squeezed,
                    tol,
                )?,
            ])
        })
        .collect();
    Ok(per_row?.into_iter().flatten().collect())
}

/// The squeezed column near 1e−14 is only trusted to two figures from
/// this qudit dimension on.
pub const FOCK_TWO_FIGURE_FROM: usize = 7;

fn check_fock(table: &GoldenTable, policy: TolPolicy) -> Result<Vec<CellCheck>> {
    let cm = IonChainModel::build(2)?.local_mode_cm();
    let squeezed = local_transform(&cm, normal_form_squeeze(&cm), 0.0)?;
    let (cd, craw, csq) = (
        table.column("qudit_dim")?,
        table.column("p_out_raw")?,
        table.column("p_out_squeezed")?,
    );
    let per_row: Result<Vec<Vec<CellCheck>>> = table
        .rows
        .par_iter()
        .map(|row| {
            let d: usize = row[cd]
                .parse()
                .map_err(|_| Error::Golden(format!("bad qudit dimension '{}'", row[cd])))?;
            let raw_g = number(&row[craw])?;
            let sq_g = number(&row[csq])?;
            let raw_tol = Tolerance::from_printed(&row[craw], raw_g, policy);
            let sq_tol = if d >= FOCK_TWO_FIGURE_FROM {
                Tolerance::sig_figs(sq_g, 2, policy)
            } else {
                Tolerance::from_printed(&row[csq], sq_g, policy)
            };
            let key = format!("D={d}");
            Ok(vec![
                CellCheck::new(
                    key.clone(),
                    "p_out_raw",
                    &row[craw],
                    qudit_subspace_deficit(&cm, d)?,
                    raw_tol,
                )?,
                CellCheck::new(
                    key,
                    "p_out_squeezed",
                    &row[csq],
                    qudit_subspace_deficit(&squeezed, d)?,
                    sq_tol,
                )?,
            ])
        })
        .collect();
    Ok(per_row?.into_iter().flatten().collect())
}

const DENSITY_ZERO_TOL: f64 = 1e-12;

const FOCK_LABELS: [&str; 9] = ["00", "01", "02", "10", "11", "12", "20", "21", "22"];

fn check_density(table: &GoldenTable, policy: TolPolicy) -> Result<Vec<CellCheck>> {
    let rho = density_block(&IonChainModel::build(2)?.local_mode_cm(), 3)?;
    let mut cells = Vec::with_capacity(81);
    for (i, row) in table.rows.iter().enumerate() {
        for (j, printed) in row.iter().enumerate() {
            let golden = number(printed)?;
            // printed zeros are parity-forbidden entries; allow rounding noise
            let tol = match Tolerance::from_printed(printed, golden, policy) {
                Tolerance::ExactZero => Tolerance::Absolute {
                    bound: DENSITY_ZERO_TOL,
                },
                t => t,
            };
            cells.push(CellCheck::new(
                format!("<{}|", FOCK_LABELS[i]),
                &format!("|{}>", FOCK_LABELS[j]),
                printed,
                rho[(i, j)],
                tol,
            )?);
        }
    }
    Ok(cells)
}
