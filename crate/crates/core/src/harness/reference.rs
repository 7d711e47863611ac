//! Exact (or near-machine-precision) reference solutions for error norms.
//!
//! Linear advection is solved by translation. A scalar law with smooth data
//! is solved, before its shock-formation time, through the characteristic
//! relation ξ = x − a(q₀(ξ))·t via a safeguarded Newton iteration driven to
//! a 1e−14 residual. Systems have no closed form here; convergence studies
//! fall back to fine-grid self-reference (see the CLI), and asking this
//! module for a system reference is a reported error, not a silent guess.

use crate::error::{AfError, Result};
use crate::grid::{Boundary, Grid1D};
use crate::models::ConservationLaw;
use crate::state::AfState;

use super::ic::Profile;

/// Relative residual target of the characteristic Newton solve.
const NEWTON_TOL: f64 = 1e-14;

/// Characteristic speed a(q) of a scalar model.
fn scalar_speed(model: &dyn ConservationLaw, q: f64) -> f64 {
    model.speeds(&[q])[0]
}

/// d a/d q by central differences (the model interface does not expose an
/// analytic derivative).
fn scalar_speed_derivative(model: &dyn ConservationLaw, q: f64) -> f64 {
    let h = 1e-6 * q.abs().max(1.0);
    (scalar_speed(model, q + h) - scalar_speed(model, q - h)) / (2.0 * h)
}

/// Shock-formation time of a scalar law with the given initial profile on
/// [a, b]: t* = −1 / min_x d/dx a(q₀(x)), +∞ when the data is expansive
/// everywhere. The minimum is taken over a dense sample (4097 points).
pub fn shock_time(model: &dyn ConservationLaw, profile: &Profile, a: f64, b: f64) -> Result<f64> {
    if model.n_comp() != 1 {
        return Err(AfError::Config(format!(
            "shock time is a scalar notion, model '{}' has {} components",
            model.name(),
            model.n_comp()
        )));
    }
    if model.advection_speed().is_some() {
        return Ok(f64::INFINITY);
    }
    let n = 4096;
    let mut steepest = f64::INFINITY;
    for j in 0..=n {
        let x = a + (b - a) * j as f64 / n as f64;
        let q = profile.eval(x);
        let slope = scalar_speed_derivative(model, q) * profile.derivative(x);
        steepest = steepest.min(slope);
    }
    if matches!(profile, Profile::Step { left, right, .. } if {
        let sl = scalar_speed(model, *left);
        let sr = scalar_speed(model, *right);
        sl > sr
    }) {
        // compressive jump: characteristics cross immediately
        return Ok(0.0);
    }
    if steepest >= 0.0 {
        Ok(f64::INFINITY)
    } else {
        Ok(-1.0 / steepest)
    }
}

/// Map a query position into the domain the way the boundary does: wrap for
/// periodic grids, pass through for outflow ones (the reference then is the
/// free-space solution; outflow boundary effects are not modeled).
fn fold(grid: &Grid1D, x: f64) -> f64 {
    match grid.boundary {
        Boundary::Periodic => grid.wrap(x),
        Boundary::Outflow => x,
    }
}

/// Exact solution value at (t, x) for the model and initial profile.
///
/// Advection evaluates the shifted profile. Other scalar laws solve the
/// characteristic relation before the shock time and report
/// [`AfError::ReferenceUnavailable`] at or beyond it; systems always report
/// unavailability (use fine-grid self-reference instead).
pub fn exact_reference(
    model: &dyn ConservationLaw,
    profile: &Profile,
    grid: &Grid1D,
    t: f64,
    x: f64,
) -> Result<Vec<f64>> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(AfError::Config(format!("reference time must be finite and ≥ 0, got {t}")));
    }
    if let Some(c) = model.advection_speed() {
        return Ok(vec![profile.eval(fold(grid, x - c * t))]);
    }
    if model.n_comp() != 1 {
        return Err(AfError::ReferenceUnavailable(format!(
            "no closed-form solution for system '{}'; use fine-grid self-reference",
            model.name()
        )));
    }
    if t == 0.0 {
        return Ok(vec![profile.eval(fold(grid, x))]);
    }
    let t_star = shock_time(model, profile, grid.x_left, grid.x_right)?;
    if t >= t_star * (1.0 - 1e-9) {
        return Err(AfError::ReferenceUnavailable(format!(
            "characteristic reference invalid at t = {t}: shock forms at t ≈ {t_star}"
        )));
    }

    let q0 = |y: f64| profile.eval(fold(grid, y));
    // bracket the footpoint from the global speed range of the data
    let n = 1024;
    let (mut a_lo, mut a_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for j in 0..=n {
        let y = grid.x_left + grid.length() * j as f64 / n as f64;
        let a = scalar_speed(model, q0(y));
        a_lo = a_lo.min(a);
        a_hi = a_hi.max(a);
    }
    let pad = 1e-3 * (1.0 + grid.length());
    let mut lo = x - a_hi * t - pad;
    let mut hi = x - a_lo * t + pad;
    let g = |xi: f64| xi + scalar_speed(model, q0(xi)) * t - x;
    let scale = x.abs().max(a_hi.abs().max(a_lo.abs()) * t).max(1.0);

    // safeguarded Newton: bisect whenever the Newton step is unusable
    let mut xi = 0.5 * (lo + hi);
    for _ in 0..200 {
        let r = g(xi);
        if r.abs() <= NEWTON_TOL * scale {
            return Ok(vec![q0(xi)]);
        }
        if r > 0.0 {
            hi = xi;
        } else {
            lo = xi;
        }
        let slope = 1.0
            + scalar_speed_derivative(model, q0(xi)) * profile.derivative(fold(grid, xi)) * t;
        let newton = xi - r / slope;
        xi = if slope.abs() > 1e-12 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(AfError::Internal(format!(
        "characteristic solve did not reach residual {NEWTON_TOL:e} at (t, x) = ({t}, {x})"
    )))
}

/// Reference closure backed by a computed fine-grid state: evaluates the
/// fine reconstruction at x. Used for system self-convergence studies.
pub fn self_reference<'a>(
    state: &'a AfState,
    grid: &'a Grid1D,
) -> impl FnMut(f64) -> Result<Vec<f64>> + 'a {
    move |x: f64| crate::reconstruction::global_eval(state, grid, grid.resolve(x))
}
