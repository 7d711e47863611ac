//! Initial-condition profiles and state construction.
//!
//! A state is initialized so that both degree-of-freedom families are exact:
//! cell averages are set to the true cell means of the profile (analytically
//! where a closed form exists, otherwise by 5-point Gauss quadrature, exact
//! through degree 9) and point values to exact samples at the interfaces.
//! Anything less would pollute convergence studies with a setup error of
//! unknown order.

use crate::error::{AfError, Result};
use crate::grid::Grid1D;
use crate::state::AfState;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::norms::GAUSS5;

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// A scalar initial profile on the line.
///
/// The oscillatory profiles use the fixed wavenumber 2π, so they are
/// 1-periodic; on the default domain [0, 1] they close up exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    /// q₀(x) = value.
    Constant { value: f64 },
    /// q₀(x) = mean + amplitude·sin(2πx).
    Sine { amplitude: f64, mean: f64 },
    /// q₀(x) = mean + amplitude·cos(2πx).
    Cosine { amplitude: f64, mean: f64 },
    /// q₀(x) = floor + amplitude·exp(−(x−center)²/(2·width²)).
    Gaussian { center: f64, width: f64, amplitude: f64, floor: f64 },
    /// q₀(x) = left for x < x0, right for x ≥ x0.
    Step { left: f64, right: f64, x0: f64 },
}

fn parse_args(name: &str, args: &str, n: usize) -> Result<Vec<f64>> {
    let vals: Vec<f64> = args
        .split(',')
        .map(|a| a.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| {
            AfError::Config(format!("profile '{name}:{args}': arguments must be numbers"))
        })?;
    if vals.len() != n {
        return Err(AfError::Config(format!(
            "profile '{name}' takes {n} arguments, got {}",
            vals.len()
        )));
    }
    if let Some(bad) = vals.iter().find(|v| !v.is_finite()) {
        return Err(AfError::Config(format!("profile '{name}': argument {bad} is not finite")));
    }
    Ok(vals)
}

impl Profile {
    /// Parse `const:v`, `sine:amplitude,mean`, `cosine:amplitude,mean`,
    /// `gaussian:center,width,amplitude,floor`, or `step:left,right,x0`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (name, args) = spec
            .split_once(':')
            .ok_or_else(|| AfError::Config(format!("profile '{spec}' has no arguments")))?;
        match name {
            "const" => {
                let v = parse_args(name, args, 1)?;
                Ok(Profile::Constant { value: v[0] })
            }
            "sine" => {
                let v = parse_args(name, args, 2)?;
                Ok(Profile::Sine { amplitude: v[0], mean: v[1] })
            }
            "cosine" => {
                let v = parse_args(name, args, 2)?;
                Ok(Profile::Cosine { amplitude: v[0], mean: v[1] })
            }
            "gaussian" => {
                let v = parse_args(name, args, 4)?;
                if v[1] <= 0.0 {
                    return Err(AfError::Config(format!(
                        "gaussian width must be positive, got {}",
                        v[1]
                    )));
                }
                Ok(Profile::Gaussian { center: v[0], width: v[1], amplitude: v[2], floor: v[3] })
            }
            "step" => {
                let v = parse_args(name, args, 3)?;
                Ok(Profile::Step { left: v[0], right: v[1], x0: v[2] })
            }
            other => Err(AfError::Config(format!(
                "unknown profile '{other}' (expected const, sine, cosine, gaussian, or step)"
            ))),
        }
    }

    /// Profile value at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Profile::Constant { value } => value,
            Profile::Sine { amplitude, mean } => mean + amplitude * (TAU * x).sin(),
            Profile::Cosine { amplitude, mean } => mean + amplitude * (TAU * x).cos(),
            Profile::Gaussian { center, width, amplitude, floor } => {
                let z = (x - center) / width;
                floor + amplitude * (-0.5 * z * z).exp()
            }
            Profile::Step { left, right, x0 } => {
                if x < x0 {
                    left
                } else {
                    right
                }
            }
        }
    }

    /// Spatial derivative at `x`. The step profile reports 0 (its jump is
    /// not differentiable, and its shock forms immediately anyway).
    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            Profile::Constant { .. } | Profile::Step { .. } => 0.0,
            Profile::Sine { amplitude, .. } => amplitude * TAU * (TAU * x).cos(),
            Profile::Cosine { amplitude, .. } => -amplitude * TAU * (TAU * x).sin(),
            Profile::Gaussian { center, width, amplitude, .. } => {
                let z = (x - center) / width;
                amplitude * (-0.5 * z * z).exp() * (-z / width)
            }
        }
    }

    /// Exact mean of the profile over [a, b]: analytic for the closed-form
    /// cases, 5-point Gauss otherwise.
    pub fn mean(&self, a: f64, b: f64) -> f64 {
        let len = b - a;
        match *self {
            Profile::Constant { value } => value,
            Profile::Sine { amplitude, mean } => {
                mean + amplitude * ((TAU * a).cos() - (TAU * b).cos()) / (TAU * len)
            }
            Profile::Cosine { amplitude, mean } => {
                mean + amplitude * ((TAU * b).sin() - (TAU * a).sin()) / (TAU * len)
            }
            Profile::Gaussian { .. } => gauss5_mean(|x| self.eval(x), a, b),
            Profile::Step { left, right, x0 } => {
                let cut = x0.clamp(a, b);
                (left * (cut - a) + right * (b - cut)) / len
            }
        }
    }
}

/// Mean of `f` over [a, b] by 5-point Gauss–Legendre quadrature.
pub(crate) fn gauss5_mean(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let len = b - a;
    GAUSS5.iter().map(|&(s, w)| w * f(mid + s * len)).sum()
}

/// A parsed initial-condition specification.
#[derive(Debug, Clone, PartialEq)]
pub enum IcSpec {
    /// A single scalar profile.
    Scalar(Profile),
    /// Shallow-water data from depth and velocity profiles; the state stores
    /// (h, h·u).
    ShallowWater { h: Profile, u: Profile },
    /// Independent uniform draws in [mean − amplitude, mean + amplitude]
    /// for every degree of freedom (stability testing).
    Random { amplitude: f64, mean: f64 },
}

/// Parse an initial-condition specification: any scalar profile accepted by
/// [`Profile::parse`], `random:amplitude,mean`, or the shallow-water wrapper
/// `swe:h=<profile>;u=<profile>`.
pub fn parse_ic(spec: &str) -> Result<IcSpec> {
    if let Some(args) = spec.strip_prefix("random:") {
        let v = parse_args("random", args, 2)?;
        if v[0] < 0.0 {
            return Err(AfError::Config(format!("random amplitude must be ≥ 0, got {}", v[0])));
        }
        return Ok(IcSpec::Random { amplitude: v[0], mean: v[1] });
    }
    if let Some(rest) = spec.strip_prefix("swe:") {
        let mut h = None;
        let mut u = None;
        for part in rest.split(';') {
            let (key, prof) = part.split_once('=').ok_or_else(|| {
                AfError::Config(format!(
                    "shallow-water initial condition part '{part}' is not key=<profile>"
                ))
            })?;
            match key.trim() {
                "h" => h = Some(Profile::parse(prof.trim())?),
                "u" => u = Some(Profile::parse(prof.trim())?),
                other => {
                    return Err(AfError::Config(format!(
                        "unknown shallow-water field '{other}' (expected h or u)"
                    )))
                }
            }
        }
        let h = h.ok_or_else(|| AfError::Config("shallow-water ic needs h=<profile>".into()))?;
        let u = u.ok_or_else(|| AfError::Config("shallow-water ic needs u=<profile>".into()))?;
        return Ok(IcSpec::ShallowWater { h, u });
    }
    Ok(IcSpec::Scalar(Profile::parse(spec)?))
}

/// Build the initial state for `spec` on `grid`. `seed` only affects the
/// `random:` specification; deterministic profiles ignore it.
///
/// Cell averages receive exact cell means and point values exact samples.
/// For the shallow-water wrapper the momentum average ∫h·u uses 5-point
/// Gauss quadrature and the depth must be strictly positive everywhere.
pub fn initial_condition(spec: &str, grid: &Grid1D, seed: u64) -> Result<AfState> {
    match parse_ic(spec)? {
        IcSpec::Scalar(profile) => {
            let mut state = AfState::zeros(grid, 1)?;
            for i in 0..grid.n_cells {
                let (a, b) = cell_bounds(grid, i);
                state.avg_mut(i)[0] = profile.mean(a, b);
            }
            for p in 0..state.n_points() {
                state.point_mut(p)[0] = profile.eval(grid.interface_x(p));
            }
            Ok(state)
        }
        IcSpec::ShallowWater { h, u } => {
            let mut state = AfState::zeros(grid, 2)?;
            for i in 0..grid.n_cells {
                let (a, b) = cell_bounds(grid, i);
                state.avg_mut(i)[0] = h.mean(a, b);
                state.avg_mut(i)[1] = gauss5_mean(|x| h.eval(x) * u.eval(x), a, b);
            }
            for p in 0..state.n_points() {
                let x = grid.interface_x(p);
                let hp = h.eval(x);
                state.point_mut(p)[0] = hp;
                state.point_mut(p)[1] = hp * u.eval(x);
            }
            // positivity must hold where the data is used: at samples, at
            // quadrature nodes, and for the resulting means
            for i in 0..grid.n_cells {
                let (a, b) = cell_bounds(grid, i);
                let mid = 0.5 * (a + b);
                for &(s, _) in GAUSS5.iter() {
                    let x = mid + s * (b - a);
                    if h.eval(x) <= 0.0 {
                        return Err(AfError::Inadmissible(format!(
                            "initial depth h({x}) = {} is not positive",
                            h.eval(x)
                        )));
                    }
                }
                if state.avg(i)[0] <= 0.0 {
                    return Err(AfError::Inadmissible(format!(
                        "initial mean depth of cell {i} is not positive"
                    )));
                }
            }
            for p in 0..state.n_points() {
                if state.point(p)[0] <= 0.0 {
                    return Err(AfError::Inadmissible(format!(
                        "initial depth at interface {p} is not positive"
                    )));
                }
            }
            Ok(state)
        }
        IcSpec::Random { amplitude, mean } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut state = AfState::zeros(grid, 1)?;
            // draw order is fixed (averages first, then point values) so a
            // seed pins the state exactly
            for i in 0..grid.n_cells {
                state.avg_mut(i)[0] = mean + amplitude * rng.gen_range(-1.0..=1.0);
            }
            for p in 0..state.n_points() {
                state.point_mut(p)[0] = mean + amplitude * rng.gen_range(-1.0..=1.0);
            }
            Ok(state)
        }
    }
}

fn cell_bounds(grid: &Grid1D, i: usize) -> (f64, f64) {
    (grid.x_left + i as f64 * grid.dx, grid.x_left + (i + 1) as f64 * grid.dx)
}
