//! Degrees of freedom of the Active Flux method.
//!
//! A state couples `n_cells` cell averages with point values at the cell
//! interfaces (`n_cells` values under periodic boundaries where the two end
//! interfaces coincide, `n_cells + 1` under outflow). Both kinds of DOF hold
//! `m` components, stored flat with stride `m`.

use crate::error::{AfError, Result};
use crate::grid::Grid1D;

/// Cell averages plus interface point values at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct AfState {
    /// Components per degree of freedom.
    pub m: usize,
    /// Time the state belongs to.
    pub time: f64,
    averages: Vec<f64>,
    point_values: Vec<f64>,
}

impl AfState {
    /// Zero-initialized state matching `grid`.
    pub fn zeros(grid: &Grid1D, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(AfError::Config("state needs at least one component".into()));
        }
        Ok(AfState {
            m,
            time: 0.0,
            averages: vec![0.0; grid.n_cells * m],
            point_values: vec![0.0; grid.n_point_dofs() * m],
        })
    }

    /// Assemble a state from flat average/point-value storage (stride `m`),
    /// validating the lengths against the grid.
    pub fn from_parts(
        grid: &Grid1D,
        m: usize,
        time: f64,
        averages: Vec<f64>,
        point_values: Vec<f64>,
    ) -> Result<Self> {
        if m == 0 {
            return Err(AfError::Config("state needs at least one component".into()));
        }
        if averages.len() != grid.n_cells * m {
            return Err(AfError::Config(format!(
                "expected {} average entries, got {}",
                grid.n_cells * m,
                averages.len()
            )));
        }
        if point_values.len() != grid.n_point_dofs() * m {
            return Err(AfError::Config(format!(
                "expected {} point-value entries, got {}",
                grid.n_point_dofs() * m,
                point_values.len()
            )));
        }
        Ok(AfState { m, time, averages, point_values })
    }

    /// Number of cells represented.
    pub fn n_cells(&self) -> usize {
        self.averages.len() / self.m
    }

    /// Number of point-value DOFs.
    pub fn n_points(&self) -> usize {
        self.point_values.len() / self.m
    }

    /// Average of cell `i`.
    #[inline]
    pub fn avg(&self, i: usize) -> &[f64] {
        &self.averages[i * self.m..(i + 1) * self.m]
    }

    /// Mutable average of cell `i`.
    #[inline]
    pub fn avg_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.averages[i * self.m..(i + 1) * self.m]
    }

    /// Point value at DOF `p`.
    #[inline]
    pub fn point(&self, p: usize) -> &[f64] {
        &self.point_values[p * self.m..(p + 1) * self.m]
    }

    /// Mutable point value at DOF `p`.
    #[inline]
    pub fn point_mut(&mut self, p: usize) -> &mut [f64] {
        &mut self.point_values[p * self.m..(p + 1) * self.m]
    }

    /// Scalar shorthand for `avg` (single-component states).
    #[inline]
    pub fn avg1(&self, i: usize) -> f64 {
        debug_assert_eq!(self.m, 1);
        self.averages[i]
    }

    /// Scalar shorthand for `point` (single-component states).
    #[inline]
    pub fn point1(&self, p: usize) -> f64 {
        debug_assert_eq!(self.m, 1);
        self.point_values[p]
    }

    /// Flat average storage (read-only).
    pub fn averages_flat(&self) -> &[f64] {
        &self.averages
    }

    /// Flat point-value storage (read-only).
    pub fn point_values_flat(&self) -> &[f64] {
        &self.point_values
    }

    /// The reconstruction data of cell `i`: its average together with the
    /// point values at its left and right interfaces. Periodic boundaries
    /// share the wrap-around interface; outflow reads the two end DOFs
    /// directly.
    pub fn neighbor_values(&self, grid: &Grid1D, i: usize) -> Result<(&[f64], &[f64], &[f64])> {
        if i >= self.n_cells() {
            return Err(AfError::Internal(format!(
                "cell index {i} out of range (n_cells = {})",
                self.n_cells()
            )));
        }
        let (pl, pr) = grid.cell_interfaces(i);
        Ok((self.avg(i), self.point(pl), self.point(pr)))
    }

    /// Average of the cell at signed offset position `idx` (wrapped under
    /// periodic boundaries, clamped under outflow — the zeroth-order ghost
    /// extension).
    #[inline]
    pub fn avg_at(&self, grid: &Grid1D, idx: isize) -> &[f64] {
        self.avg(grid.cell_offset(0, idx))
    }

    /// Point value of the (possibly out-of-range) interface `p`, resolved by
    /// the boundary rule.
    #[inline]
    pub fn point_at(&self, grid: &Grid1D, p: isize) -> &[f64] {
        self.point(grid.point_dof(p))
    }

    /// Total conserved quantity per component: `dx · Σ_i avg_i`.
    pub fn total_mass(&self, grid: &Grid1D) -> Vec<f64> {
        let mut mass = vec![0.0; self.m];
        for i in 0..self.n_cells() {
            for (c, v) in self.avg(i).iter().enumerate() {
                mass[c] += v;
            }
        }
        for v in &mut mass {
            *v *= grid.dx;
        }
        mass
    }

    /// Error unless every stored entry is finite.
    pub fn check_finite(&self) -> Result<()> {
        for (what, data) in [("average", &self.averages), ("point value", &self.point_values)] {
            if let Some(k) = data.iter().position(|v| !v.is_finite()) {
                return Err(AfError::Internal(format!(
                    "non-finite {what} at flat index {k} (dof {}, component {})",
                    k / self.m,
                    k % self.m
                )));
            }
        }
        Ok(())
    }
}
