//! Error norms against a reference solution, and convergence orders.
//!
//! The L1 norm integrates |numerical − reference| over the domain with a
//! 5-point Gauss rule per cell, applied to the piecewise-parabolic
//! reconstruction — not to the cell averages alone. The scheme carries two
//! degree-of-freedom families, and a norm over averages only can hide an
//! order loss in the point values; sampling the reconstruction exposes both.

use crate::error::{AfError, Result};
use crate::grid::Grid1D;
use crate::reconstruction::cell_parabola;
use crate::state::AfState;

/// 5-point Gauss–Legendre rule on [−1/2, 1/2]: (node, weight), weights
/// summing to one, exact through polynomial degree 9.
pub(crate) const GAUSS5: [(f64, f64); 5] = [
    (-0.453_089_922_969_332, 0.118_463_442_528_094_54),
    (-0.269_234_655_052_841_55, 0.239_314_335_249_683_23),
    (0.0, 0.284_444_444_444_444_44),
    (0.269_234_655_052_841_55, 0.239_314_335_249_683_23),
    (0.453_089_922_969_332, 0.118_463_442_528_094_54),
];

/// Per-component error norms of one run at one resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    /// ∫|q_num − q_ref| dx per component.
    pub l1: Vec<f64>,
    /// max over all samples of |q_num − q_ref| per component.
    pub linf: Vec<f64>,
    /// Number of cells of the run.
    pub n_cells: usize,
    /// Total stored degrees of freedom (averages and point values, all
    /// components).
    pub dofs: usize,
}

/// Measure the state against a reference function of x.
///
/// The numerical solution is the state's reconstruction, sampled at 5 Gauss
/// points per cell; the reference is evaluated at the same points.
pub fn error_norms<F>(state: &AfState, grid: &Grid1D, mut reference: F) -> Result<ErrorReport>
where
    F: FnMut(f64) -> Result<Vec<f64>>,
{
    let m = state.m;
    let mut l1 = vec![0.0_f64; m];
    let mut linf = vec![0.0_f64; m];
    for i in 0..grid.n_cells {
        let par = cell_parabola(state, grid, i)?;
        let xc = grid.cell_center(i);
        for &(s, w) in GAUSS5.iter() {
            let x = xc + s * grid.dx;
            let num = par.eval_scaled(s);
            let exact = reference(x)?;
            if exact.len() != m {
                return Err(AfError::Internal(format!(
                    "reference returned {} components, state has {m}",
                    exact.len()
                )));
            }
            for c in 0..m {
                let diff = (num[c] - exact[c]).abs();
                l1[c] += w * grid.dx * diff;
                linf[c] = linf[c].max(diff);
            }
        }
    }
    Ok(ErrorReport {
        l1,
        linf,
        n_cells: grid.n_cells,
        dofs: (grid.n_cells + grid.n_point_dofs()) * m,
    })
}

/// Experimental orders of convergence from errors at increasing resolutions:
/// order_k = log(e_k / e_{k+1}) / log(N_{k+1} / N_k).
///
/// A vanishing error (the exactly-resolved case) yields the +∞ sentinel for
/// the pairs it appears in; callers exclude those entries from fits.
pub fn eoc(errors: &[f64], resolutions: &[usize]) -> Result<Vec<f64>> {
    if errors.len() != resolutions.len() || errors.len() < 2 {
        return Err(AfError::Config(format!(
            "order computation needs matching lists of at least 2 entries, got {} errors and {} resolutions",
            errors.len(),
            resolutions.len()
        )));
    }
    if resolutions.windows(2).any(|w| w[1] <= w[0]) {
        return Err(AfError::Config("resolutions must be strictly increasing".into()));
    }
    if let Some(bad) = errors.iter().find(|e| !e.is_finite() || **e < 0.0) {
        return Err(AfError::Config(format!("errors must be finite and ≥ 0, got {bad}")));
    }
    Ok(errors
        .windows(2)
        .zip(resolutions.windows(2))
        .map(|(e, n)| {
            if e[0] == 0.0 || e[1] == 0.0 {
                f64::INFINITY
            } else {
                (e[0] / e[1]).ln() / (n[1] as f64 / n[0] as f64).ln()
            }
        })
        .collect())
}
