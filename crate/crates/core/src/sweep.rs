//! Tables behind the command-line front end.
//!
//! Each builder evaluates a grid of `(λ, log10 n)` points in parallel and
//! returns rows in `(λ, log10 n, k)` order. A numeric failure inside a row
//! becomes a `null` cell and a warning rather than aborting the sweep.

use std::f64::consts::LN_10;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::asymptotics;
use crate::error::Error;
use crate::instance::ProblemInstance;
use crate::maxdist::{self, ModeReport};
use crate::specfun::Accuracy;

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
    Null,
}

impl Cell {
    fn from_result(r: &Result<f64, Error>) -> Self {
        match r {
            Ok(v) => Cell::Real(*v),
            Err(_) => Cell::Null,
        }
    }

    /// Fixed rendering: integers verbatim, reals with 17 significant digits
    /// in scientific notation, non-finite reals and nulls as `null`.
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) if v.is_finite() => format!("{v:.16e}"),
            Cell::Real(_) | Cell::Null => "null".to_string(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Real(v) if v.is_finite() => Some(*v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Column names plus rows of cells; every row has one cell per column.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl SweepTable {
    fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Header row, comma separated, `\n` line ends.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Array of flat objects with identical keys, one object per line.
    pub fn to_json(&self) -> String {
        let mut out = String::from("[");
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str(if i == 0 { "\n  {" } else { ",\n  {" });
            for (j, (name, cell)) in self.columns.iter().zip(row).enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "\"{name}\": {}", cell.render());
            }
            out.push('}');
        }
        out.push_str("\n]\n");
        out
    }
}

/// A value of `n`, carried both as its decade and its natural log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub log10_n: f64,
    pub ln_n: f64,
}

impl GridPoint {
    pub fn from_log10(log10_n: f64) -> Self {
        Self { log10_n, ln_n: log10_n * LN_10 }
    }

    /// Integer `n`; the natural log is taken directly for accuracy.
    pub fn from_count(n: u64) -> Self {
        let v = n as f64;
        Self { log10_n: v.log10(), ln_n: v.ln() }
    }
}

/// Parse `min:max:step` into `min, min+step, ..., <= max`. Grid values are
/// rounded to 12 decimals so that `0:1:0.1` yields exactly `0.3`, not
/// `0.30000000000000004`.
pub fn parse_range(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected min:max:step, got `{text}`"));
    }
    let nums: Vec<f64> =
        parts.iter().map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}"))).collect::<Result<_, _>>()?;
    let (min, max, step) = (nums[0], nums[1], nums[2]);
    if !(min.is_finite() && max.is_finite() && step.is_finite()) || step <= 0.0 || min > max {
        return Err(format!("invalid range `{text}`"));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| ((min + i as f64 * step) * 1e12).round() / 1e12).collect())
}

/// A row result plus the warnings produced while computing it.
struct Rows {
    rows: Vec<Vec<Cell>>,
    warnings: Vec<String>,
}

fn label(lambda: f64, p: &GridPoint) -> String {
    format!("lambda={lambda} log10_n={}", p.log10_n)
}

fn instance(lambda: f64, p: &GridPoint) -> Result<ProblemInstance, Error> {
    ProblemInstance::new(lambda, p.ln_n)
}

fn sorted_grid(lambdas: &[f64], points: &[GridPoint]) -> Vec<(f64, GridPoint)> {
    let mut lambdas = lambdas.to_vec();
    lambdas.sort_by(f64::total_cmp);
    let mut points = points.to_vec();
    points.sort_by(|a, b| a.log10_n.total_cmp(&b.log10_n));
    lambdas.iter().flat_map(|&l| points.iter().map(move |&p| (l, p))).collect()
}

fn build<F>(columns: Vec<&'static str>, lambdas: &[f64], points: &[GridPoint], row_fn: F) -> (SweepTable, Vec<String>)
where
    F: Fn(f64, &GridPoint) -> Rows + Sync,
{
    let grid = sorted_grid(lambdas, points);
    let results: Vec<Rows> = grid.par_iter().map(|(l, p)| row_fn(*l, p)).collect();
    let mut table = SweepTable::new(columns);
    let mut warnings = Vec::new();
    for r in results {
        table.rows.extend(r.rows);
        warnings.extend(r.warnings);
    }
    (table, warnings)
}

fn warn(warnings: &mut Vec<String>, lambda: f64, p: &GridPoint, what: &str, e: &Error) {
    warnings.push(format!("{}: {what}: {e}", label(lambda, p)));
}

/// Distribution rows `(lambda, log10_n, k, pmf, log_pmf)` for `k = 0..=k_max`;
/// without `k_max` each point runs up to its own scan window's upper end.
pub fn dist_table(lambdas: &[f64], points: &[GridPoint], k_max: Option<u64>) -> (SweepTable, Vec<String>) {
    let columns = vec!["lambda", "log10_n", "k", "pmf", "log_pmf"];
    build(columns, lambdas, points, |lambda, p| {
        let mut warnings = Vec::new();
        let inst = match instance(lambda, p) {
            Ok(i) => i,
            Err(e) => {
                warn(&mut warnings, lambda, p, "instance", &e);
                let row = vec![Cell::Real(lambda), Cell::Real(p.log10_n), Cell::Null, Cell::Null, Cell::Null];
                return Rows { rows: vec![row], warnings };
            }
        };
        let top = match k_max {
            Some(k) => Ok(k),
            None => maxdist::mode(&inst).map(|r| r.scan_hi),
        };
        let top = match top {
            Ok(k) => k,
            Err(e) => {
                warn(&mut warnings, lambda, p, "scan window", &e);
                let row = vec![Cell::Real(lambda), Cell::Real(p.log10_n), Cell::Null, Cell::Null, Cell::Null];
                return Rows { rows: vec![row], warnings };
            }
        };
        let rows = match maxdist::pmf_row(&inst, 0, top) {
            Ok(row) => row
                .into_iter()
                .map(|(k, lp)| {
                    vec![
                        Cell::Real(lambda),
                        Cell::Real(p.log10_n),
                        Cell::Int(k),
                        Cell::Real(lp.prob()),
                        Cell::Real(lp.ln()),
                    ]
                })
                .collect(),
            Err(e) => {
                warn(&mut warnings, lambda, p, "pmf", &e);
                (0..=top)
                    .map(|k| vec![Cell::Real(lambda), Cell::Real(p.log10_n), Cell::Int(k), Cell::Null, Cell::Null])
                    .collect()
            }
        };
        Rows { rows, warnings }
    })
}

fn mode_for(lambda: f64, p: &GridPoint, warnings: &mut Vec<String>) -> Option<(ProblemInstance, ModeReport)> {
    let inst = match instance(lambda, p) {
        Ok(i) => i,
        Err(e) => {
            warn(warnings, lambda, p, "instance", &e);
            return None;
        }
    };
    match maxdist::mode(&inst) {
        Ok(r) => Some((inst, r)),
        Err(e) => {
            warn(warnings, lambda, p, "mode", &e);
            None
        }
    }
}

/// Focussing rows `(lambda, log10_n, i_best, p_two_point)`.
pub fn prob_table(lambdas: &[f64], points: &[GridPoint]) -> (SweepTable, Vec<String>) {
    let columns = vec!["lambda", "log10_n", "i_best", "p_two_point"];
    build(columns, lambdas, points, |lambda, p| {
        let mut warnings = Vec::new();
        let head = [Cell::Real(lambda), Cell::Real(p.log10_n)];
        let tail = match mode_for(lambda, p, &mut warnings) {
            Some((_, r)) => [Cell::Int(r.i_n), Cell::Real(r.p_two_point)],
            None => [Cell::Null, Cell::Null],
        };
        Rows { rows: vec![head.into_iter().chain(tail).collect()], warnings }
    })
}

/// Everything the asymptotics module says about one instance, as cells.
struct AsymptoticCells {
    x0: Cell,
    x1: Cell,
    x2: Cell,
    kimber: Cell,
    beta_n: Cell,
    continuous_root: Cell,
    err_x0: Cell,
    err_x1: Cell,
}

/// Extra Newton steps reported by `point`.
const POINT_NEWTON_STEPS: usize = 1;

fn asymptotic_cells(
    lambda: f64,
    p: &GridPoint,
    inst: Option<&ProblemInstance>,
    i_n: Option<u64>,
    warnings: &mut Vec<String>,
) -> AsymptoticCells {
    let Some(inst) = inst else {
        return AsymptoticCells {
            x0: Cell::Null,
            x1: Cell::Null,
            x2: Cell::Null,
            kimber: Cell::Null,
            beta_n: Cell::Null,
            continuous_root: Cell::Null,
            err_x0: Cell::Null,
            err_x1: Cell::Null,
        };
    };
    let rep = asymptotics::report(inst, POINT_NEWTON_STEPS, Accuracy::default());
    for (what, r) in [
        ("x0", &rep.x0),
        ("x1", &rep.x1),
        ("kimber", &rep.kimber),
        ("beta_n", &rep.beta_n),
        ("continuous_root", &rep.continuous_root),
    ] {
        if let Err(e) = r {
            warn(warnings, lambda, p, what, e);
        }
    }
    let err = |r: &Result<f64, Error>| match (r, i_n) {
        (Ok(v), Some(i)) => Cell::Real(v - i as f64),
        _ => Cell::Null,
    };
    let x2 = match &rep.x_newton {
        Ok(v) => v.last().map_or(Cell::Null, |x| Cell::Real(*x)),
        Err(_) => Cell::Null,
    };
    AsymptoticCells {
        err_x0: err(&rep.x0),
        err_x1: err(&rep.x1),
        x0: Cell::from_result(&rep.x0),
        x1: Cell::from_result(&rep.x1),
        x2,
        kimber: Cell::from_result(&rep.kimber),
        beta_n: Cell::from_result(&rep.beta_n),
        continuous_root: Cell::from_result(&rep.continuous_root),
    }
}

/// Mode-versus-asymptotics rows `(lambda, log10_n, i_n, x0, x1, kimber,
/// beta_n, continuous_root, err_x0, err_x1)` with `err_* = value - i_n`.
pub fn modes_table(lambdas: &[f64], points: &[GridPoint]) -> (SweepTable, Vec<String>) {
    let columns =
        vec!["lambda", "log10_n", "i_n", "x0", "x1", "kimber", "beta_n", "continuous_root", "err_x0", "err_x1"];
    build(columns, lambdas, points, |lambda, p| {
        let mut warnings = Vec::new();
        let mode = mode_for(lambda, p, &mut warnings);
        let i_n = mode.as_ref().map(|(_, r)| r.i_n);
        let inst = instance(lambda, p).ok();
        let a = asymptotic_cells(lambda, p, inst.as_ref(), i_n, &mut warnings);
        let row = vec![
            Cell::Real(lambda),
            Cell::Real(p.log10_n),
            i_n.map_or(Cell::Null, Cell::Int),
            a.x0,
            a.x1,
            a.kimber,
            a.beta_n,
            a.continuous_root,
            a.err_x0,
            a.err_x1,
        ];
        Rows { rows: vec![row], warnings }
    })
}

/// Single-instance record with every computable quantity.
pub fn point_table(lambda: f64, p: GridPoint) -> (SweepTable, Vec<String>) {
    let columns = vec![
        "lambda",
        "log10_n",
        "i_n",
        "p_mode",
        "p_two_point",
        "pmf_argmax",
        "p_max",
        "scan_lo",
        "scan_hi",
        "x0",
        "x1",
        "x2",
        "kimber",
        "beta_n",
        "continuous_root",
        "err_x0",
        "err_x1",
    ];
    build(columns, &[lambda], &[p], |lambda, p| {
        let mut warnings = Vec::new();
        let mode = mode_for(lambda, p, &mut warnings);
        let inst = instance(lambda, p).ok();
        let i_n = mode.as_ref().map(|(_, r)| r.i_n);
        let a = asymptotic_cells(lambda, p, inst.as_ref(), i_n, &mut warnings);
        let m = match &mode {
            Some((_, r)) => vec![
                Cell::Int(r.i_n),
                Cell::Real(r.p_mode),
                Cell::Real(r.p_two_point),
                Cell::Int(r.pmf_argmax),
                Cell::Real(r.p_max),
                Cell::Int(r.scan_lo),
                Cell::Int(r.scan_hi),
            ],
            None => vec![Cell::Null; 7],
        };
        let mut row = vec![Cell::Real(lambda), Cell::Real(p.log10_n)];
        row.extend(m);
        row.extend([a.x0, a.x1, a.x2, a.kimber, a.beta_n, a.continuous_root, a.err_x0, a.err_x1]);
        Rows { rows: vec![row], warnings }
    })
}
