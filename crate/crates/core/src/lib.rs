//! One-dimensional Active Flux solver for hyperbolic conservation laws
//!
//! ```text
//! ∂t q + ∂x f(q) = 0.
//! ```
//!
//! The method carries two kinds of degrees of freedom: cell averages and
//! point values located at the cell interfaces. A globally continuous,
//! piecewise-parabolic reconstruction interpolates the point values and
//! matches the averages. Point values are advanced by following
//! characteristics of the reconstruction (exactly for linear advection,
//! by fixed-point iteration for scalar laws, and by characteristic-variable
//! tracing for systems); averages are advanced conservatively with interface
//! fluxes obtained from Simpson's rule in time. No Riemann solver is used.
//!
//! Crate layout:
//! - [`grid`], [`state`]: mesh and degrees of freedom
//! - [`reconstruction`]: the piecewise-parabolic interpolant
//! - [`models`]: flux functions (linear advection, Burgers, shallow water)
//! - [`evolution`]: characteristic point-value updates and the shock guard
//! - [`update`]: conservative time stepping
//! - [`harness`]: initial conditions, references, error norms, CSV and CLI

pub mod error;
pub mod evolution;
pub mod grid;
pub mod harness;
pub mod models;
pub mod reconstruction;
pub mod state;
pub mod update;

pub use error::{AfError, Result};
pub use evolution::{FootpointResult, OperatorChoice};
pub use grid::{Boundary, Grid1D};
pub use models::ConservationLaw;
pub use reconstruction::CellParabola;
pub use state::AfState;
pub use update::{run_until, step, StepReport};
