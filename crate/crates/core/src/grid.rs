//! Uniform 1-D mesh with periodic or outflow boundary treatment.

use crate::error::{AfError, Result};
use std::fmt;
use std::str::FromStr;

/// Boundary treatment.
///
/// `Periodic` identifies the two ends of the domain, so the interface at
/// `x_right` is the same degree of freedom as the one at `x_left`. `Outflow`
/// keeps independent values at both ends and extends the solution with
/// zeroth-order (constant) ghost data; boundary accuracy drops to first
/// order, which is fine for waves leaving the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    Outflow,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Periodic => write!(f, "periodic"),
            Boundary::Outflow => write!(f, "outflow"),
        }
    }
}

impl FromStr for Boundary {
    type Err = AfError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(Boundary::Periodic),
            "outflow" => Ok(Boundary::Outflow),
            other => Err(AfError::Config(format!(
                "unknown boundary '{other}' (expected 'periodic' or 'outflow')"
            ))),
        }
    }
}

/// Uniform mesh on `[x_left, x_right]` with `n_cells` cells of width `dx`.
///
/// Cell `i` spans `[x_left + i·dx, x_left + (i+1)·dx]`; interface `p` sits at
/// `x_left + p·dx`. Under periodic boundaries interface `n_cells` is
/// identified with interface `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    pub x_left: f64,
    pub x_right: f64,
    pub n_cells: usize,
    pub dx: f64,
    pub boundary: Boundary,
}

impl Grid1D {
    /// Build a grid, validating the geometry.
    ///
    /// Fails when the interval is degenerate or reversed, when any bound is
    /// non-finite, or when `n_cells < 3` (the reconstruction stencil needs at
    /// least three cells to be meaningful).
    pub fn new(x_left: f64, x_right: f64, n_cells: usize, boundary: Boundary) -> Result<Self> {
        if !x_left.is_finite() || !x_right.is_finite() {
            return Err(AfError::Config(format!(
                "grid bounds must be finite, got [{x_left}, {x_right}]"
            )));
        }
        if x_right <= x_left {
            return Err(AfError::Config(format!(
                "grid interval is empty or reversed: [{x_left}, {x_right}]"
            )));
        }
        if n_cells < 3 {
            return Err(AfError::Config(format!(
                "need at least 3 cells, got {n_cells}"
            )));
        }
        let dx = (x_right - x_left) / n_cells as f64;
        Ok(Grid1D { x_left, x_right, n_cells, dx, boundary })
    }

    /// Domain length.
    pub fn length(&self) -> f64 {
        self.x_right - self.x_left
    }

    /// Center of cell `i`.
    pub fn cell_center(&self, i: usize) -> f64 {
        self.x_left + (i as f64 + 0.5) * self.dx
    }

    /// Position of interface `p` (0 ..= n_cells).
    pub fn interface_x(&self, p: usize) -> f64 {
        self.x_left + p as f64 * self.dx
    }

    /// Number of geometric interfaces, `n_cells + 1`.
    pub fn n_interfaces(&self) -> usize {
        self.n_cells + 1
    }

    /// Number of independent point-value degrees of freedom:
    /// `n_cells` under periodic boundaries, `n_cells + 1` under outflow.
    pub fn n_point_dofs(&self) -> usize {
        match self.boundary {
            Boundary::Periodic => self.n_cells,
            Boundary::Outflow => self.n_cells + 1,
        }
    }

    /// Map `x` into `[x_left, x_right)` by periodicity.
    pub fn wrap(&self, x: f64) -> f64 {
        let y = (x - self.x_left).rem_euclid(self.length());
        self.x_left + y
    }

    /// Map an arbitrary position to one inside the domain: periodic wrap, or
    /// a clamp to `[x_left, x_right]` under outflow (constant extension).
    pub fn resolve(&self, x: f64) -> f64 {
        match self.boundary {
            Boundary::Periodic => self.wrap(x),
            Boundary::Outflow => x.clamp(self.x_left, self.x_right),
        }
    }

    /// Index of the cell containing `x`.
    ///
    /// Positions are wrapped (periodic) or must lie inside the domain up to a
    /// roundoff allowance of `1e-12 · length` (outflow); anything further out
    /// is a domain error. A position exactly on an interior interface
    /// resolves to the cell on its right.
    pub fn cell_containing(&self, x: f64) -> Result<usize> {
        if !x.is_finite() {
            return Err(AfError::Internal(format!("non-finite position {x}")));
        }
        let y = match self.boundary {
            Boundary::Periodic => self.wrap(x),
            Boundary::Outflow => {
                let tol = 1e-12 * self.length();
                if x < self.x_left - tol || x > self.x_right + tol {
                    return Err(AfError::Domain(format!(
                        "position {x} outside [{}, {}]",
                        self.x_left, self.x_right
                    )));
                }
                x.clamp(self.x_left, self.x_right)
            }
        };
        let idx = ((y - self.x_left) / self.dx).floor() as isize;
        Ok(idx.clamp(0, self.n_cells as isize - 1) as usize)
    }

    /// Cell index offset by `off` from `i`, wrapped (periodic) or clamped
    /// (outflow) into range.
    pub fn cell_offset(&self, i: usize, off: isize) -> usize {
        let raw = i as isize + off;
        let n = self.n_cells as isize;
        match self.boundary {
            Boundary::Periodic => (raw.rem_euclid(n)) as usize,
            Boundary::Outflow => raw.clamp(0, n - 1) as usize,
        }
    }

    /// Point-value DOF index for the (possibly out-of-range) interface `p`.
    pub fn point_dof(&self, p: isize) -> usize {
        match self.boundary {
            Boundary::Periodic => {
                let n = self.n_cells as isize;
                p.rem_euclid(n) as usize
            }
            Boundary::Outflow => p.clamp(0, self.n_cells as isize) as usize,
        }
    }

    /// Point-value DOF indices of the left and right interfaces of cell `i`.
    pub fn cell_interfaces(&self, i: usize) -> (usize, usize) {
        match self.boundary {
            Boundary::Periodic => (i, (i + 1) % self.n_cells),
            Boundary::Outflow => (i, i + 1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_interval() {
        let err = Grid1D::new(0.0, 0.0, 10, Boundary::Periodic).unwrap_err();
        assert!(matches!(err, AfError::Config(_)));
        let err = Grid1D::new(1.0, -1.0, 10, Boundary::Periodic).unwrap_err();
        assert!(matches!(err, AfError::Config(_)));
    }

    #[test]
    fn rejects_too_few_cells() {
        let err = Grid1D::new(0.0, 1.0, 2, Boundary::Periodic).unwrap_err();
        assert!(matches!(err, AfError::Config(_)));
    }

    #[test]
    fn periodic_unit_interval() {
        let g = Grid1D::new(0.0, 1.0, 100, Boundary::Periodic).unwrap();
        assert_eq!(g.dx, 0.01);
        assert_eq!(g.n_point_dofs(), 100);
        assert_eq!(g.n_interfaces(), 101);
        // interface n_cells is identified with interface 0
        assert_eq!(g.point_dof(100), 0);
        assert_eq!(g.point_dof(-1), 99);
    }

    #[test]
    fn outflow_interfaces() {
        let g = Grid1D::new(-1.0, 1.0, 100, Boundary::Outflow).unwrap();
        assert_eq!(g.n_point_dofs(), 101);
        assert_eq!(g.dx, 0.02);
        for p in 0..=100 {
            let expect = -1.0 + p as f64 * 0.02;
            assert!((g.interface_x(p) - expect).abs() < 1e-14);
        }
        assert_eq!(g.point_dof(-3), 0);
        assert_eq!(g.point_dof(104), 100);
    }

    #[test]
    fn wrap_and_cell_lookup() {
        let g = Grid1D::new(0.0, 1.0, 4, Boundary::Periodic).unwrap();
        assert!((g.wrap(1.3) - 0.3).abs() < 1e-14);
        assert!((g.wrap(-0.1) - 0.9).abs() < 1e-14);
        assert_eq!(g.cell_containing(0.1).unwrap(), 0);
        assert_eq!(g.cell_containing(0.25).unwrap(), 1); // on interface -> right cell
        assert_eq!(g.cell_containing(1.0).unwrap(), 0); // wraps to x_left
        assert_eq!(g.cell_containing(-0.05).unwrap(), 3);
    }

    #[test]
    fn outflow_domain_error() {
        let g = Grid1D::new(0.0, 1.0, 4, Boundary::Outflow).unwrap();
        assert_eq!(g.cell_containing(1.0).unwrap(), 3);
        assert!(matches!(g.cell_containing(1.1), Err(AfError::Domain(_))));
        assert!(matches!(g.cell_containing(-0.2), Err(AfError::Domain(_))));
    }
}
