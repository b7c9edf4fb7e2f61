//! Volume tables for circumscribing (table 1) and inscribing (table 2)
//! regions, one cell per row in long format.

use phaselock_core::{estimate_regions, exact_volume, PolytopeSpec, Region, Result, VolumeEstimate};
use serde::Serialize;

use crate::output::{Cell, Payload};

pub const TABLE1_DEFAULT_N: [usize; 4] = [5, 10, 15, 20];
pub const TABLE2_DEFAULT_N: [usize; 2] = [5, 10];
/// Table 2 sizes at or above this get a warning about LP cost.
pub const TABLE2_SLOW_N: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Mc,
}

/// One volume cell. Monte Carlo cells carry a standard error and, when a
/// closed form exists, the exact value for comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableCell {
    pub n: usize,
    pub column: &'static str,
    pub spec: String,
    pub method: Method,
    pub volume: f64,
    pub std_error: Option<f64>,
    pub samples: Option<u64>,
    pub exact: Option<f64>,
    pub ratio_to_c_cs: f64,
    pub error: Option<String>,
}

impl TableCell {
    /// `exact` or `mc±σ`.
    pub fn label(&self) -> String {
        match (self.method, self.std_error) {
            (Method::Exact, _) => "exact".into(),
            (Method::Mc, Some(se)) => format!("mc±{se:.3}"),
            (Method::Mc, None) => "mc".into(),
        }
    }
}

pub const COLUMNS: [&str; 11] = [
    "n",
    "column",
    "spec",
    "method",
    "volume",
    "std_error",
    "samples",
    "exact",
    "ratio_to_c_cs",
    "label",
    "error",
];

pub fn to_payload(cells: &[TableCell]) -> Payload {
    let rows = cells
        .iter()
        .map(|c| {
            vec![
                c.n.into(),
                c.column.into(),
                c.spec.clone().into(),
                match c.method {
                    Method::Exact => "exact",
                    Method::Mc => "mc",
                }
                .into(),
                c.volume.into(),
                c.std_error.into(),
                c.samples.map_or(Cell::Empty, Cell::from),
                c.exact.into(),
                c.ratio_to_c_cs.into(),
                c.label().into(),
                c.error.clone().map_or(Cell::Empty, Cell::from),
            ]
        })
        .collect();
    Payload::table(&COLUMNS, rows)
}

enum Source {
    Exact(PolytopeSpec),
    Mc(Region),
}

struct Column {
    name: &'static str,
    source: Source,
    /// Uses the LP sample budget.
    lp: bool,
}

fn mc_cell(n: usize, col: &Column, est: &VolumeEstimate, c_cs: f64) -> TableCell {
    let (spec, exact) = match &col.source {
        Source::Mc(Region::Polytope(s)) => (s.to_string(), exact_volume(s).ok()),
        Source::Mc(r) => (r.to_string(), None),
        Source::Exact(_) => unreachable!("exact columns are not sampled"),
    };
    TableCell {
        n,
        column: col.name,
        spec,
        method: Method::Mc,
        volume: est.value,
        std_error: Some(est.std_error),
        samples: Some(est.samples),
        exact,
        ratio_to_c_cs: est.value / c_cs,
        error: None,
    }
}

fn error_cell(n: usize, col: &Column, err: &phaselock_core::Error) -> TableCell {
    let spec = match &col.source {
        Source::Exact(s) => s.to_string(),
        Source::Mc(r) => r.to_string(),
    };
    TableCell {
        n,
        column: col.name,
        spec,
        method: match col.source {
            Source::Exact(_) => Method::Exact,
            Source::Mc(_) => Method::Mc,
        },
        volume: f64::NAN,
        std_error: None,
        samples: None,
        exact: None,
        ratio_to_c_cs: f64::NAN,
        error: Some(err.to_string()),
    }
}

/// Evaluates one table row. Exact columns are computed directly; sampled
/// columns are grouped into as few passes as their budgets allow. A failure
/// marks the affected cells instead of aborting the table.
fn row(n: usize, columns: &[Column], samples: u64, lp_samples: u64, seed: u64) -> Vec<TableCell> {
    let c_cs = PolytopeSpec::c_cs(n).and_then(|s| exact_volume(&s)).unwrap_or(f64::NAN);
    let mut cells: Vec<Option<TableCell>> = vec![None; columns.len()];
    for (i, col) in columns.iter().enumerate() {
        if let Source::Exact(s) = &col.source {
            cells[i] = Some(match exact_volume(s) {
                Ok(v) => TableCell {
                    n,
                    column: col.name,
                    spec: s.to_string(),
                    method: Method::Exact,
                    volume: v,
                    std_error: None,
                    samples: None,
                    exact: Some(v),
                    ratio_to_c_cs: v / c_cs,
                    error: None,
                },
                Err(e) => error_cell(n, col, &e),
            });
        }
    }
    for lp in [false, true] {
        let idx: Vec<usize> = columns
            .iter()
            .enumerate()
            .filter(|(_, c)| c.lp == lp && matches!(c.source, Source::Mc(_)))
            .map(|(i, _)| i)
            .collect();
        if idx.is_empty() {
            continue;
        }
        let regions: Vec<Region> = idx
            .iter()
            .map(|&i| match &columns[i].source {
                Source::Mc(r) => r.clone(),
                Source::Exact(_) => unreachable!(),
            })
            .collect();
        let m = if lp { lp_samples } else { samples };
        match estimate_regions(&regions, m, seed) {
            Ok(est) => {
                for (&i, e) in idx.iter().zip(&est) {
                    cells[i] = Some(mc_cell(n, &columns[i], e, c_cs));
                }
            }
            Err(e) => {
                for &i in &idx {
                    cells[i] = Some(error_cell(n, &columns[i], &e));
                }
            }
        }
    }
    cells.into_iter().map(|c| c.expect("every column evaluated")).collect()
}

fn table1_columns(n: usize) -> Result<Vec<Column>> {
    let c_db = PolytopeSpec::c_db(n)?;
    let c_cs = PolytopeSpec::c_cs(n)?;
    let c_all = PolytopeSpec::c_cs_all(n)?;
    let mc = |name, r| Column {
        name,
        source: Source::Mc(r),
        lp: false,
    };
    Ok(vec![
        Column {
            name: "C_CS",
            source: Source::Exact(c_cs.clone()),
            lp: false,
        },
        Column {
            name: "C_DB",
            source: Source::Exact(c_db.clone()),
            lp: false,
        },
        mc("cap_j C_CS(N,j)", Region::Polytope(c_all.clone())),
        mc(
            "C_DB cap C_CS",
            Region::Polytope(PolytopeSpec::intersection(vec![c_db.clone(), c_cs])?),
        ),
        mc(
            "C_DB cap_j C_CS(N,j)",
            Region::Polytope(PolytopeSpec::intersection(vec![c_db, c_all])?),
        ),
        mc("true", Region::Locked { n }),
    ])
}

fn table2_columns(n: usize) -> Result<Vec<Column>> {
    let i_db = PolytopeSpec::i_db(n)?;
    let i_cs = PolytopeSpec::i_cs(n)?;
    let mc = |name, r, lp| Column {
        name,
        source: Source::Mc(r),
        lp,
    };
    Ok(vec![
        mc("true", Region::Locked { n }, false),
        mc(
            "hull(R_CS cup R_DB)",
            Region::Polytope(PolytopeSpec::hull_of_union(vec![i_db.clone(), i_cs.clone()])?),
            true,
        ),
        mc("I_DB", Region::Polytope(i_db), false),
        mc("I_CS", Region::Polytope(i_cs), false),
    ])
}

/// Circumscribing volumes: exact `C_CS` and `C_DB`, sampled intersections
/// and phase-locked volume, all with ratios to `|C_CS|`.
pub fn table1(ns: &[usize], samples: u64, seed: u64) -> Result<Vec<TableCell>> {
    let mut out = Vec::new();
    for &n in ns {
        out.extend(row(n, &table1_columns(n)?, samples, samples, seed));
    }
    Ok(out)
}

/// Inscribed volumes, all sampled. The hull column uses LP membership and
/// its own budget `lp_samples`; `I_DB` and `I_CS` carry their exact value.
pub fn table2(ns: &[usize], samples: u64, lp_samples: u64, seed: u64) -> Result<Vec<TableCell>> {
    let mut out = Vec::new();
    for &n in ns {
        out.extend(row(n, &table2_columns(n)?, samples, lp_samples, seed));
    }
    Ok(out)
}
