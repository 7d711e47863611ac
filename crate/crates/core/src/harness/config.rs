//! Run configuration.
//!
//! A run is described by the same set of keys whether they arrive as CLI
//! flags or as `key=value` lines in a config file; explicit flags win over
//! file entries. Validation happens once, after merging.

use std::path::{Path, PathBuf};

use crate::error::{AfError, Result};
use crate::evolution::OperatorChoice;
use crate::grid::Boundary;
use crate::models::parse_model;

use super::ic::parse_ic;

/// A fully merged, validated run description.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Model specification, e.g. `advection:c=1`, `burgers`, `swe:g=9.81`.
    pub model: String,
    /// Initial-condition specification (see [`super::ic::parse_ic`]).
    pub ic: String,
    /// Number of cells for a single run (ignored during sweeps).
    pub n_cells: usize,
    /// CFL target in (0, 1].
    pub cfl: f64,
    /// End time of the run.
    pub t_end: f64,
    /// Operator specification (see [`OperatorChoice::parse`]); `auto` picks
    /// exact for advection, fixedpoint:k=2 for scalars, midpoint for systems.
    pub operator: String,
    pub boundary: Boundary,
    /// CSV output path; single runs skip writing when absent, convergence
    /// sweeps fall back to `convergence.csv`.
    pub output_path: Option<PathBuf>,
    /// Resolutions of a convergence sweep; absent for single runs.
    pub convergence_resolutions: Option<Vec<usize>>,
    /// Seed for the `random:` initial condition.
    pub seed: u64,
}

impl RunConfig {
    /// Check ranges and that every sub-specification parses.
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl.is_finite() && self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(AfError::Config(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(AfError::Config(format!("t-end must be finite and ≥ 0, got {}", self.t_end)));
        }
        parse_model(&self.model)?;
        parse_ic(&self.ic)?;
        if self.operator != "auto" {
            OperatorChoice::parse(&self.operator)?;
        }
        if let Some(res) = &self.convergence_resolutions {
            if res.len() < 2 {
                return Err(AfError::Config(
                    "a convergence sweep needs at least 2 resolutions".into(),
                ));
            }
            if res.windows(2).any(|w| w[1] <= w[0]) {
                return Err(AfError::Config(
                    "convergence resolutions must be strictly increasing".into(),
                ));
            }
            if res[0] < 3 {
                return Err(AfError::Config("resolutions must be at least 3 cells".into()));
            }
        } else if self.n_cells < 3 {
            return Err(AfError::Config(format!("N must be at least 3, got {}", self.n_cells)));
        }
        Ok(())
    }

    /// Resolve the `auto` operator against the model.
    pub fn resolved_operator(&self) -> Result<OperatorChoice> {
        if self.operator != "auto" {
            return OperatorChoice::parse(&self.operator);
        }
        let model = parse_model(&self.model)?;
        Ok(if model.advection_speed().is_some() {
            OperatorChoice::ExactLinear
        } else if model.n_comp() == 1 {
            OperatorChoice::FixedPoint { iterations: 2 }
        } else {
            OperatorChoice::SystemMidpoint
        })
    }
}

/// Parse a comma-separated resolution list like `25,50,100,200`.
pub fn parse_resolutions(spec: &str) -> Result<Vec<usize>> {
    spec.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| AfError::Config(format!("bad resolution '{p}' in '{spec}'")))
        })
        .collect()
}

/// Read a config file: one `key=value` per line, blank lines and `#`
/// comments ignored. Keys mirror the long CLI flags (`model`, `ic`, `N`,
/// `cfl`, `t-end`, `operator`, `boundary`, `out`, `convergence`, `seed`,
/// `k-iters`).
pub fn read_config_file(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AfError::Io(format!("{}: {e}", path.display())))?;
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            AfError::Config(format!(
                "{} line {}: expected key=value, got '{line}'",
                path.display(),
                lineno + 1
            ))
        })?;
        entries.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> RunConfig {
        RunConfig {
            model: "advection:c=1".into(),
            ic: "sine:1,0".into(),
            n_cells: 64,
            cfl: 0.9,
            t_end: 1.0,
            operator: "auto".into(),
            boundary: Boundary::Periodic,
            output_path: None,
            convergence_resolutions: None,
            seed: 0,
        }
    }

    #[test]
    fn validation_catches_bad_fields() {
        assert!(base().validate().is_ok());
        let mut c = base();
        c.cfl = 0.0;
        assert!(c.validate().is_err());
        let mut c = base();
        c.cfl = 1.5;
        assert!(c.validate().is_err());
        let mut c = base();
        c.t_end = f64::NAN;
        assert!(c.validate().is_err());
        let mut c = base();
        c.model = "kdv".into();
        assert!(c.validate().is_err());
        let mut c = base();
        c.ic = "sine:1".into();
        assert!(c.validate().is_err());
        let mut c = base();
        c.operator = "upwind".into();
        assert!(c.validate().is_err());
        let mut c = base();
        c.convergence_resolutions = Some(vec![50]);
        assert!(c.validate().is_err());
        let mut c = base();
        c.convergence_resolutions = Some(vec![100, 50]);
        assert!(c.validate().is_err());
        let mut c = base();
        c.n_cells = 2;
        assert!(c.validate().is_err());
    }

    #[test]
    fn auto_operator_resolution() {
        let c = base();
        assert_eq!(c.resolved_operator().unwrap(), OperatorChoice::ExactLinear);
        let mut c = base();
        c.model = "burgers".into();
        assert_eq!(c.resolved_operator().unwrap(), OperatorChoice::FixedPoint { iterations: 2 });
        let mut c = base();
        c.model = "swe:g=1".into();
        assert_eq!(c.resolved_operator().unwrap(), OperatorChoice::SystemMidpoint);
        let mut c = base();
        c.operator = "naive".into();
        assert_eq!(c.resolved_operator().unwrap(), OperatorChoice::SystemNaive);
    }

    #[test]
    fn resolution_list_parsing() {
        assert_eq!(parse_resolutions("25,50,100").unwrap(), vec![25, 50, 100]);
        assert_eq!(parse_resolutions(" 25 , 50 ").unwrap(), vec![25, 50]);
        assert!(parse_resolutions("25,fifty").is_err());
        assert!(parse_resolutions("").is_err());
    }

    #[test]
    fn config_file_parsing() {
        let dir = std::env::temp_dir().join("af-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(&path, "# a comment\nmodel=burgers\n\nN = 100\nt-end=0.05\n").unwrap();
        let entries = read_config_file(&path).unwrap();
        assert_eq!(
            entries,
            vec![
                ("model".to_string(), "burgers".to_string()),
                ("N".to_string(), "100".to_string()),
                ("t-end".to_string(), "0.05".to_string()),
            ]
        );
        std::fs::write(&path, "model burgers\n").unwrap();
        assert!(read_config_file(&path).is_err());
        std::fs::remove_file(&path).unwrap();
    }
}
