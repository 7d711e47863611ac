//! CSV artifacts with a bit-exact schema.
//!
//! State files carry three comment headers and one column-header row:
//!
//! ```text
//! # model=<name>
//! # t=<time>
//! # dx=<cell width>
//! kind,index,x,comp0[,comp1,…]
//! avg,0,<x center>,<values…>
//! …
//! point,0,<x interface>,<values…>
//! …
//! ```
//!
//! All reals are printed with 17 significant digits (`{:.16e}`), which
//! round-trips every f64 exactly: files parse back to bitwise-identical
//! states.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{AfError, Result};
use crate::grid::Grid1D;
use crate::state::AfState;

use super::norms::ErrorReport;

fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write a state snapshot. The `model_name` header is informational and is
/// returned verbatim by [`read_state_csv`].
pub fn write_state_csv(
    path: &Path,
    state: &AfState,
    grid: &Grid1D,
    model_name: &str,
) -> Result<()> {
    let m = state.m;
    let mut out = String::new();
    let _ = writeln!(out, "# model={model_name}");
    let _ = writeln!(out, "# t={}", fmt_real(state.time));
    let _ = writeln!(out, "# dx={}", fmt_real(grid.dx));
    let comps: Vec<String> = (0..m).map(|c| format!("comp{c}")).collect();
    let _ = writeln!(out, "kind,index,x,{}", comps.join(","));
    for i in 0..state.n_cells() {
        let vals: Vec<String> = state.avg(i).iter().map(|v| fmt_real(*v)).collect();
        let _ = writeln!(out, "avg,{i},{},{}", fmt_real(grid.cell_center(i)), vals.join(","));
    }
    for p in 0..state.n_points() {
        let vals: Vec<String> = state.point(p).iter().map(|v| fmt_real(*v)).collect();
        let _ = writeln!(out, "point,{p},{},{}", fmt_real(grid.interface_x(p)), vals.join(","));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// A parsed state file: raw rows, in file order, with their coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvState {
    pub model: String,
    pub t: f64,
    pub dx: f64,
    /// Cell-average rows (row i belongs to cell i).
    pub averages: Vec<Vec<f64>>,
    pub avg_x: Vec<f64>,
    /// Point-value rows (row p belongs to interface DOF p).
    pub points: Vec<Vec<f64>>,
    pub point_x: Vec<f64>,
}

fn malformed(path: &Path, what: impl std::fmt::Display) -> AfError {
    AfError::Io(format!("{}: {what}", path.display()))
}

fn parse_header<'a>(line: Option<&'a str>, key: &str, path: &Path) -> Result<&'a str> {
    let prefix = format!("# {key}=");
    line.and_then(|l| l.strip_prefix(prefix.as_str()))
        .ok_or_else(|| malformed(path, format!("expected header '# {key}=…'")))
}

/// Read a state file written by [`write_state_csv`].
pub fn read_state_csv(path: &Path) -> Result<CsvState> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let model = parse_header(lines.next(), "model", path)?.to_string();
    let t: f64 = parse_header(lines.next(), "t", path)?
        .parse()
        .map_err(|e| malformed(path, format!("bad t header: {e}")))?;
    let dx: f64 = parse_header(lines.next(), "dx", path)?
        .parse()
        .map_err(|e| malformed(path, format!("bad dx header: {e}")))?;
    let columns = lines
        .next()
        .ok_or_else(|| malformed(path, "missing column header"))?;
    let m = columns.split(',').count().checked_sub(3).filter(|m| *m > 0).ok_or_else(|| {
        malformed(path, "column header must be kind,index,x,comp0[,comp1,…]")
    })?;

    let mut state = CsvState {
        model,
        t,
        dx,
        averages: Vec::new(),
        avg_x: Vec::new(),
        points: Vec::new(),
        point_x: Vec::new(),
    };
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != m + 3 {
            return Err(malformed(
                path,
                format!("row {}: expected {} fields, got {}", lineno + 5, m + 3, fields.len()),
            ));
        }
        let index: usize = fields[1]
            .parse()
            .map_err(|e| malformed(path, format!("row {}: bad index: {e}", lineno + 5)))?;
        let mut reals = fields[2..].iter().map(|f| {
            f.parse::<f64>()
                .map_err(|e| malformed(path, format!("row {}: bad real: {e}", lineno + 5)))
        });
        let x = reals.next().unwrap()?;
        let vals = reals.collect::<Result<Vec<f64>>>()?;
        let (rows, xs) = match fields[0] {
            "avg" => (&mut state.averages, &mut state.avg_x),
            "point" => (&mut state.points, &mut state.point_x),
            other => {
                return Err(malformed(
                    path,
                    format!("row {}: unknown kind '{other}'", lineno + 5),
                ))
            }
        };
        if index != rows.len() {
            return Err(malformed(
                path,
                format!("row {}: index {} out of order (expected {})", lineno + 5, index, rows.len()),
            ));
        }
        rows.push(vals);
        xs.push(x);
    }
    if state.averages.is_empty() {
        return Err(malformed(path, "no average rows"));
    }
    Ok(state)
}

/// Write a convergence table: one row per resolution with per-component L1
/// and L∞ norms and the pairwise L1 orders (blank in the first row).
pub fn write_convergence_csv(
    path: &Path,
    model_name: &str,
    operator: &str,
    t_end: f64,
    resolutions: &[usize],
    reports: &[ErrorReport],
    orders_l1: &[Vec<f64>],
) -> Result<()> {
    if reports.len() != resolutions.len() {
        return Err(AfError::Internal(format!(
            "{} reports for {} resolutions",
            reports.len(),
            resolutions.len()
        )));
    }
    let m = reports.first().map(|r| r.l1.len()).unwrap_or(0);
    if orders_l1.len() != m {
        return Err(AfError::Internal(format!(
            "{} order columns for {m} components",
            orders_l1.len()
        )));
    }
    let mut out = String::new();
    let _ = writeln!(out, "# model={model_name}");
    let _ = writeln!(out, "# operator={operator}");
    let _ = writeln!(out, "# t_end={}", fmt_real(t_end));
    let mut cols = vec!["n_cells".to_string(), "dofs".to_string()];
    cols.extend((0..m).map(|c| format!("l1_comp{c}")));
    cols.extend((0..m).map(|c| format!("linf_comp{c}")));
    cols.extend((0..m).map(|c| format!("eoc_l1_comp{c}")));
    let _ = writeln!(out, "{}", cols.join(","));
    for (k, (n, rep)) in resolutions.iter().zip(reports).enumerate() {
        let mut fields = vec![n.to_string(), rep.dofs.to_string()];
        fields.extend(rep.l1.iter().map(|v| fmt_real(*v)));
        fields.extend(rep.linf.iter().map(|v| fmt_real(*v)));
        for orders in orders_l1 {
            if k == 0 {
                fields.push(String::new());
            } else {
                fields.push(format!("{:.4}", orders[k - 1]));
            }
        }
        let _ = writeln!(out, "{}", fields.join(","));
    }
    std::fs::write(path, out)?;
    Ok(())
}
