//! Conservation-law models: flux functions, wave speeds, and (where they
//! exist) characteristic variables.
//!
//! Provided models:
//! - linear advection  ∂t q + c ∂x q = 0
//! - Burgers           ∂t q + ∂x(q²/2) = 0
//! - shallow water     ∂t (h, hu) + ∂x (hu, hu² + g h²/2) = 0
//!
//! Shallow water carries exact characteristic variables (Riemann invariants)
//!
//! ```text
//! Q₁ = u − 2√(gh),   Q₂ = u + 2√(gh),
//! ```
//!
//! with inverse u = (Q₁+Q₂)/2, √(gh) = (Q₂−Q₁)/4 and characteristic speeds
//! λ₁ = (3Q₁+Q₂)/4, λ₂ = (Q₁+3Q₂)/4. Scalar models are their own
//! characteristic variable.

use crate::error::{AfError, Result};

/// A hyperbolic conservation law with `m` components.
///
/// `speeds` returns the eigenvalues of ∂f/∂q in nondecreasing order. Models
/// with exact characteristic variables additionally expose the transform
/// `to_char`/`from_char` and the speeds as a function of the characteristic
/// variables; `has_char_vars` advertises that capability.
pub trait ConservationLaw: Send + Sync {
    /// Number of components.
    fn n_comp(&self) -> usize;

    /// Canonical name, e.g. `advection:c=1`, `burgers`, `swe:g=1`.
    fn name(&self) -> String;

    /// Flux f(q). Callers must pass admissible states.
    fn flux(&self, q: &[f64]) -> Vec<f64>;

    /// Characteristic speeds (Jacobian eigenvalues), nondecreasing.
    fn speeds(&self, q: &[f64]) -> Vec<f64>;

    /// Largest absolute characteristic speed at `q`.
    fn max_abs_speed(&self, q: &[f64]) -> f64 {
        self.speeds(q).iter().fold(0.0_f64, |acc, s| acc.max(s.abs()))
    }

    /// Whether `q` lies in the model's admissible region.
    fn is_admissible(&self, q: &[f64]) -> bool {
        q.iter().all(|v| v.is_finite())
    }

    /// Whether exact characteristic variables are available.
    fn has_char_vars(&self) -> bool {
        false
    }

    /// Conservative → characteristic variables.
    fn to_char(&self, _q: &[f64]) -> Result<Vec<f64>> {
        Err(AfError::Config(format!(
            "model '{}' has no characteristic variables",
            self.name()
        )))
    }

    /// Characteristic → conservative variables.
    ///
    /// Only meaningful when `has_char_vars()`; the default panics because a
    /// call on any other model is a programming error.
    // named as the inverse of `to_char`, not as a constructor
    #[allow(clippy::wrong_self_convention)]
    fn from_char(&self, _w: &[f64]) -> Vec<f64> {
        panic!("model '{}' has no characteristic variables", self.name());
    }

    /// Characteristic speeds as a function of the characteristic variables.
    ///
    /// Only meaningful when `has_char_vars()`.
    fn speeds_of_char(&self, _w: &[f64]) -> Vec<f64> {
        panic!("model '{}' has no characteristic variables", self.name());
    }

    /// `Some(c)` when the model is linear advection with constant speed `c`.
    fn advection_speed(&self) -> Option<f64> {
        None
    }
}

/// ∂t q + c ∂x q = 0.
#[derive(Debug, Clone, Copy)]
pub struct LinearAdvection {
    pub c: f64,
}

impl LinearAdvection {
    pub fn new(c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(AfError::Config(format!("advection speed must be finite, got {c}")));
        }
        Ok(LinearAdvection { c })
    }
}

impl ConservationLaw for LinearAdvection {
    fn n_comp(&self) -> usize {
        1
    }

    fn name(&self) -> String {
        format!("advection:c={}", self.c)
    }

    fn flux(&self, q: &[f64]) -> Vec<f64> {
        vec![self.c * q[0]]
    }

    fn speeds(&self, _q: &[f64]) -> Vec<f64> {
        vec![self.c]
    }

    fn has_char_vars(&self) -> bool {
        true
    }

    fn to_char(&self, q: &[f64]) -> Result<Vec<f64>> {
        Ok(q.to_vec())
    }

    fn from_char(&self, w: &[f64]) -> Vec<f64> {
        w.to_vec()
    }

    fn speeds_of_char(&self, _w: &[f64]) -> Vec<f64> {
        vec![self.c]
    }

    fn advection_speed(&self) -> Option<f64> {
        Some(self.c)
    }
}

/// ∂t q + ∂x (q²/2) = 0.
#[derive(Debug, Clone, Copy, Default)]
pub struct Burgers;

impl ConservationLaw for Burgers {
    fn n_comp(&self) -> usize {
        1
    }

    fn name(&self) -> String {
        "burgers".into()
    }

    fn flux(&self, q: &[f64]) -> Vec<f64> {
        vec![0.5 * q[0] * q[0]]
    }

    fn speeds(&self, q: &[f64]) -> Vec<f64> {
        vec![q[0]]
    }

    fn has_char_vars(&self) -> bool {
        true
    }

    fn to_char(&self, q: &[f64]) -> Result<Vec<f64>> {
        Ok(q.to_vec())
    }

    fn from_char(&self, w: &[f64]) -> Vec<f64> {
        w.to_vec()
    }

    fn speeds_of_char(&self, w: &[f64]) -> Vec<f64> {
        vec![w[0]]
    }
}

/// Shallow water over a flat bottom, conservative variables (h, hu).
#[derive(Debug, Clone, Copy)]
pub struct ShallowWater {
    pub g: f64,
}

impl ShallowWater {
    pub fn new(g: f64) -> Result<Self> {
        if !(g.is_finite() && g > 0.0) {
            return Err(AfError::Config(format!("gravity must be positive, got {g}")));
        }
        Ok(ShallowWater { g })
    }

    /// Velocity u = (hu)/h.
    fn velocity(q: &[f64]) -> f64 {
        q[1] / q[0]
    }
}

impl ConservationLaw for ShallowWater {
    fn n_comp(&self) -> usize {
        2
    }

    fn name(&self) -> String {
        format!("swe:g={}", self.g)
    }

    fn flux(&self, q: &[f64]) -> Vec<f64> {
        let h = q[0];
        let u = Self::velocity(q);
        vec![q[1], q[1] * u + 0.5 * self.g * h * h]
    }

    fn speeds(&self, q: &[f64]) -> Vec<f64> {
        let u = Self::velocity(q);
        let celerity = (self.g * q[0]).sqrt();
        vec![u - celerity, u + celerity]
    }

    fn is_admissible(&self, q: &[f64]) -> bool {
        q.len() == 2 && q.iter().all(|v| v.is_finite()) && q[0] > 0.0
    }

    fn has_char_vars(&self) -> bool {
        true
    }

    fn to_char(&self, q: &[f64]) -> Result<Vec<f64>> {
        if !self.is_admissible(q) {
            return Err(AfError::Inadmissible(format!(
                "shallow water needs h > 0, got h = {}",
                q[0]
            )));
        }
        let u = Self::velocity(q);
        let celerity = (self.g * q[0]).sqrt();
        Ok(vec![u - 2.0 * celerity, u + 2.0 * celerity])
    }

    fn from_char(&self, w: &[f64]) -> Vec<f64> {
        let u = 0.5 * (w[0] + w[1]);
        let celerity = 0.25 * (w[1] - w[0]);
        let h = celerity * celerity / self.g;
        vec![h, h * u]
    }

    fn speeds_of_char(&self, w: &[f64]) -> Vec<f64> {
        vec![
            0.25 * (3.0 * w[0] + w[1]),
            0.25 * (w[0] + 3.0 * w[1]),
        ]
    }
}

/// Jacobian ∂f/∂q by central differences with absolute step `h`.
///
/// Intended as an independent cross-check of `speeds`; fails when a
/// perturbed state leaves the admissible region.
pub fn jacobian_fd(model: &dyn ConservationLaw, q: &[f64], h: f64) -> Result<Vec<Vec<f64>>> {
    let m = model.n_comp();
    if q.len() != m {
        return Err(AfError::Config(format!(
            "state has {} components, model '{}' expects {m}",
            q.len(),
            model.name()
        )));
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(AfError::Config(format!("step must be positive, got {h}")));
    }
    let mut jac = vec![vec![0.0; m]; m];
    for col in 0..m {
        let mut qp = q.to_vec();
        let mut qm = q.to_vec();
        qp[col] += h;
        qm[col] -= h;
        if !model.is_admissible(&qp) || !model.is_admissible(&qm) {
            return Err(AfError::Inadmissible(format!(
                "perturbation of component {col} by ±{h} leaves the admissible region"
            )));
        }
        let fp = model.flux(&qp);
        let fm = model.flux(&qm);
        for row in 0..m {
            jac[row][col] = (fp[row] - fm[row]) / (2.0 * h);
        }
    }
    Ok(jac)
}

/// Real eigenvalues of a 1×1 or 2×2 matrix, nondecreasing. Complex pairs
/// (non-hyperbolic) are an error.
pub fn jacobian_eigenvalues(jac: &[Vec<f64>]) -> Result<Vec<f64>> {
    match jac.len() {
        1 => Ok(vec![jac[0][0]]),
        2 => {
            let half_tr = 0.5 * (jac[0][0] + jac[1][1]);
            let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
            let disc = half_tr * half_tr - det;
            if disc < 0.0 {
                return Err(AfError::Internal(format!(
                    "complex eigenvalue pair (discriminant {disc})"
                )));
            }
            let r = disc.sqrt();
            Ok(vec![half_tr - r, half_tr + r])
        }
        n => Err(AfError::Config(format!(
            "eigenvalue helper supports 1x1 and 2x2 matrices, got {n}x{n}"
        ))),
    }
}

/// Parse a model selection string: `advection:c=<real>`, `burgers`,
/// `swe:g=<real>`.
pub fn parse_model(spec: &str) -> Result<Box<dyn ConservationLaw>> {
    let (head, rest) = match spec.split_once(':') {
        Some((h, r)) => (h, Some(r)),
        None => (spec, None),
    };
    let param = |rest: Option<&str>, key: &str| -> Result<f64> {
        let body = rest.ok_or_else(|| {
            AfError::Config(format!("model '{head}' needs a parameter '{key}=<real>'"))
        })?;
        let (k, v) = body.split_once('=').ok_or_else(|| {
            AfError::Config(format!("malformed model parameter '{body}' (expected '{key}=<real>')"))
        })?;
        if k != key {
            return Err(AfError::Config(format!(
                "unknown parameter '{k}' for model '{head}' (expected '{key}')"
            )));
        }
        v.parse::<f64>()
            .map_err(|_| AfError::Config(format!("cannot parse '{v}' as a real number")))
    };
    match head {
        "advection" => Ok(Box::new(LinearAdvection::new(param(rest, "c")?)?)),
        "burgers" => {
            if rest.is_some() {
                return Err(AfError::Config("model 'burgers' takes no parameters".into()));
            }
            Ok(Box::new(Burgers))
        }
        "swe" => Ok(Box::new(ShallowWater::new(param(rest, "g")?)?)),
        other => Err(AfError::Config(format!(
            "unknown model '{other}' (expected advection:c=<real>, burgers, or swe:g=<real>)"
        ))),
    }
}
