//! Globally continuous piecewise-parabolic reconstruction.
//!
//! In the scaled cell coordinate s = (x − x_center)/dx ∈ [−1/2, 1/2] the
//! reconstruction of a cell with average q̄ and interface values qL, qR is
//!
//! ```text
//! p(s) = c2·s² + c1·s + c0,
//! c2 = −3(2q̄ − qL − qR),
//! c1 = qR − qL,
//! c0 = (6q̄ − qL − qR)/4.
//! ```
//!
//! It interpolates both interface values, p(∓1/2) = qL/qR, and preserves the
//! cell mean, ∫ p ds = c0 + c2/12 = q̄. Because neighboring cells share their
//! interface value, the global reconstruction is continuous.

use crate::error::{AfError, Result};
use crate::grid::Grid1D;
use crate::state::AfState;

/// Relative slack (in units of `dx`) allowed when evaluating at a position
/// nominally outside the cell; covers roundoff from the cell search.
pub const EVAL_SLACK: f64 = 1e-12;

/// Parabola coefficients for one component from (average, left, right).
#[inline]
pub(crate) fn coefficients(avg: f64, q_left: f64, q_right: f64) -> (f64, f64, f64) {
    let c2 = -3.0 * (2.0 * avg - q_left - q_right);
    let c1 = q_right - q_left;
    let c0 = (6.0 * avg - q_left - q_right) * 0.25;
    (c2, c1, c0)
}

/// Evaluate one component of the reconstruction at scaled coordinate `s`.
#[inline]
pub(crate) fn eval_component(avg: f64, q_left: f64, q_right: f64, s: f64) -> f64 {
    let (c2, c1, c0) = coefficients(avg, q_left, q_right);
    (c2 * s + c1) * s + c0
}

/// The reconstruction parabola of a single cell, all components.
#[derive(Debug, Clone, PartialEq)]
pub struct CellParabola {
    pub c2: Vec<f64>,
    pub c1: Vec<f64>,
    pub c0: Vec<f64>,
    pub x_center: f64,
    pub dx: f64,
}

/// Build the parabola of a cell from its average and interface values.
pub fn reconstruct_cell(
    avg: &[f64],
    q_left: &[f64],
    q_right: &[f64],
    x_center: f64,
    dx: f64,
) -> CellParabola {
    debug_assert_eq!(avg.len(), q_left.len());
    debug_assert_eq!(avg.len(), q_right.len());
    let m = avg.len();
    let mut p = CellParabola {
        c2: vec![0.0; m],
        c1: vec![0.0; m],
        c0: vec![0.0; m],
        x_center,
        dx,
    };
    for c in 0..m {
        let (c2, c1, c0) = coefficients(avg[c], q_left[c], q_right[c]);
        p.c2[c] = c2;
        p.c1[c] = c1;
        p.c0[c] = c0;
    }
    p
}

impl CellParabola {
    /// Evaluate at physical position `x`.
    ///
    /// Positions within `EVAL_SLACK · dx` outside the cell are clamped to the
    /// nearest edge; anything further out is a domain error.
    pub fn eval(&self, x: f64) -> Result<Vec<f64>> {
        if !x.is_finite() {
            return Err(AfError::Internal(format!("non-finite evaluation position {x}")));
        }
        let mut s = (x - self.x_center) / self.dx;
        if s.abs() > 0.5 {
            if s.abs() - 0.5 <= EVAL_SLACK {
                s = s.clamp(-0.5, 0.5);
            } else {
                return Err(AfError::Domain(format!(
                    "evaluation at x = {x} lies outside the cell centered at {} (dx = {})",
                    self.x_center, self.dx
                )));
            }
        }
        Ok(self.eval_scaled(s))
    }

    /// Evaluate at scaled coordinate `s` without bounds checking.
    pub fn eval_scaled(&self, s: f64) -> Vec<f64> {
        (0..self.c0.len())
            .map(|c| (self.c2[c] * s + self.c1[c]) * s + self.c0[c])
            .collect()
    }

    /// Mean over the cell, `c0 + c2/12`; equals the average the parabola was
    /// built from.
    pub fn cell_mean(&self) -> Vec<f64> {
        self.c0
            .iter()
            .zip(&self.c2)
            .map(|(c0, c2)| c0 + c2 / 12.0)
            .collect()
    }
}

/// Parabola of cell `i` of a state.
pub fn cell_parabola(state: &AfState, grid: &Grid1D, i: usize) -> Result<CellParabola> {
    let (avg, ql, qr) = state.neighbor_values(grid, i)?;
    Ok(reconstruct_cell(avg, ql, qr, grid.cell_center(i), grid.dx))
}

/// Evaluate the global reconstruction at `x`, writing the components to
/// `out`. Periodic grids wrap `x` first; under outflow an `x` outside the
/// domain (beyond roundoff) is a domain error.
pub fn global_eval_into(state: &AfState, grid: &Grid1D, x: f64, out: &mut [f64]) -> Result<()> {
    debug_assert_eq!(out.len(), state.m);
    let i = grid.cell_containing(x)?;
    let (avg, ql, qr) = state.neighbor_values(grid, i)?;
    // The cell search may land `x` a roundoff outside the cell; clamp like
    // CellParabola::eval does.
    let y = match grid.boundary {
        crate::grid::Boundary::Periodic => grid.wrap(x),
        crate::grid::Boundary::Outflow => x,
    };
    let mut s = (y - grid.cell_center(i)) / grid.dx;
    if s.abs() > 0.5 {
        if s.abs() - 0.5 <= EVAL_SLACK {
            s = s.clamp(-0.5, 0.5);
        } else {
            return Err(AfError::Internal(format!(
                "cell search placed x = {x} at scaled coordinate {s}"
            )));
        }
    }
    for c in 0..state.m {
        out[c] = eval_component(avg[c], ql[c], qr[c], s);
    }
    Ok(())
}

/// Evaluate the global reconstruction at `x`.
pub fn global_eval(state: &AfState, grid: &Grid1D, x: f64) -> Result<Vec<f64>> {
    let mut out = vec![0.0; state.m];
    global_eval_into(state, grid, x, &mut out)?;
    Ok(out)
}
