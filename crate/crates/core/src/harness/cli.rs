//! Command-line driver.
//!
//! Two modes: a single run (writes a state CSV when `--out` is given) and a
//! convergence sweep over `--convergence N1,N2,…` (writes an EOC table CSV).
//! Exit codes: 0 on success, 1 for runtime solver or I/O failures, 2 for
//! unusable flags or configuration.

use std::collections::HashMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::Parser;

use crate::error::{AfError, Result};
use crate::grid::{Boundary, Grid1D};
use crate::models::{parse_model, ConservationLaw};
use crate::state::AfState;
use crate::update::run_until;

use super::config::{parse_resolutions, read_config_file, RunConfig};
use super::csvio::{write_convergence_csv, write_state_csv};
use super::ic::{initial_condition, parse_ic, IcSpec};
use super::norms::{eoc, error_norms, ErrorReport};
use super::reference::{exact_reference, self_reference};

#[derive(Parser, Debug)]
#[command(
    name = "active-flux",
    version,
    about = "1-D Active Flux solver for hyperbolic conservation laws",
    after_help = "Config file: --config <path> reads one key=value per line with the same \
                  keys as the long flags; explicit flags override file entries."
)]
struct Cli {
    /// Conservation law: advection:c=<real>, burgers, or swe:g=<real>
    #[arg(long)]
    model: Option<String>,

    /// Initial condition: const:v | sine:amp,mean | cosine:amp,mean |
    /// gaussian:center,width,amp,floor | step:left,right,x0 |
    /// random:amp,mean | swe:h=<profile>;u=<profile>
    #[arg(long)]
    ic: Option<String>,

    /// Number of cells on the domain [0, 1]
    #[arg(long = "N")]
    n_cells: Option<usize>,

    /// CFL target in (0, 1]
    #[arg(long)]
    cfl: Option<f64>,

    /// Simulation end time
    #[arg(long = "t-end")]
    t_end: Option<f64>,

    /// Point-value operator: exact | fixedpoint[:k=<int>] | midpoint | naive
    /// (default auto: exact for advection, fixedpoint for scalars, midpoint
    /// for systems)
    #[arg(long)]
    operator: Option<String>,

    /// Boundary treatment: periodic | outflow
    #[arg(long)]
    boundary: Option<String>,

    /// Output CSV path
    #[arg(long)]
    out: Option<PathBuf>,

    /// Convergence sweep over these resolutions, e.g. 25,50,100,200
    #[arg(long)]
    convergence: Option<String>,

    /// Seed for the random: initial condition
    #[arg(long)]
    seed: Option<u64>,

    /// Iteration count for the fixedpoint operator
    #[arg(long = "k-iters")]
    k_iters: Option<usize>,

    /// Config file with one key=value per line
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Merge flags over config-file entries into a validated [`RunConfig`].
fn build_config(cli: Cli) -> Result<RunConfig> {
    let mut file: HashMap<String, String> = HashMap::new();
    if let Some(path) = &cli.config {
        for (key, value) in read_config_file(path)? {
            match key.as_str() {
                "model" | "ic" | "N" | "cfl" | "t-end" | "operator" | "boundary" | "out"
                | "convergence" | "seed" | "k-iters" => {
                    file.insert(key, value);
                }
                other => {
                    return Err(AfError::Config(format!(
                        "{}: unknown config key '{other}'",
                        path.display()
                    )))
                }
            }
        }
    }
    fn parsed<T: std::str::FromStr>(file: &HashMap<String, String>, key: &str) -> Result<Option<T>> {
        file.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| AfError::Config(format!("config key {key}: bad value '{v}'")))
            })
            .transpose()
    }

    let model = cli
        .model
        .or_else(|| file.get("model").cloned())
        .ok_or_else(|| AfError::Config("missing --model".into()))?;
    let ic = cli
        .ic
        .or_else(|| file.get("ic").cloned())
        .ok_or_else(|| AfError::Config("missing --ic".into()))?;
    let t_end = match cli.t_end {
        Some(v) => v,
        None => parsed::<f64>(&file, "t-end")?
            .ok_or_else(|| AfError::Config("missing --t-end".into()))?,
    };
    let convergence = match cli.convergence.or_else(|| file.get("convergence").cloned()) {
        Some(spec) => Some(parse_resolutions(&spec)?),
        None => None,
    };
    let n_cells = match cli.n_cells {
        Some(n) => Some(n),
        None => parsed::<usize>(&file, "N")?,
    };
    let n_cells = match (&convergence, n_cells) {
        (_, Some(n)) => n,
        (Some(res), None) => *res.last().unwrap(), // unused during sweeps
        (None, None) => return Err(AfError::Config("missing --N".into())),
    };
    let cfl = cli.cfl.or(parsed::<f64>(&file, "cfl")?).unwrap_or(0.9);
    let mut operator = cli
        .operator
        .or_else(|| file.get("operator").cloned())
        .unwrap_or_else(|| "auto".to_string());
    if let Some(k) = cli.k_iters.or(parsed::<usize>(&file, "k-iters")?) {
        if operator == "auto" || operator.starts_with("fixedpoint") {
            operator = format!("fixedpoint:k={k}");
        } else {
            return Err(AfError::Config(format!(
                "--k-iters applies to the fixedpoint operator, not '{operator}'"
            )));
        }
    }
    let boundary = match cli.boundary.or_else(|| file.get("boundary").cloned()) {
        Some(b) => b.parse::<Boundary>()?,
        None => Boundary::Periodic,
    };
    let output_path = cli.out.or_else(|| file.get("out").map(PathBuf::from));
    let seed = cli.seed.or(parsed::<u64>(&file, "seed")?).unwrap_or(0);

    let config = RunConfig {
        model,
        ic,
        n_cells,
        cfl,
        t_end,
        operator,
        boundary,
        output_path,
        convergence_resolutions: convergence,
        seed,
    };
    config.validate()?;
    Ok(config)
}

fn single_run(config: &RunConfig, model: &dyn ConservationLaw) -> Result<()> {
    let grid = Grid1D::new(0.0, 1.0, config.n_cells, config.boundary)?;
    let state0 = initial_condition(&config.ic, &grid, config.seed)?;
    if state0.m != model.n_comp() {
        return Err(AfError::Config(format!(
            "initial condition has {} component(s), model '{}' expects {}",
            state0.m,
            model.name(),
            model.n_comp()
        )));
    }
    let op = config.resolved_operator()?;
    op.validate_for(model)?;
    let (state, reports) = run_until(&state0, &grid, model, op, config.t_end, config.cfl)?;
    let mass0 = state0.total_mass(&grid);
    let mass1 = state.total_mass(&grid);
    let drift = mass0
        .iter()
        .zip(&mass1)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    let guards: usize = reports.iter().map(|r| r.shock_guard_activations).sum();
    println!(
        "model={} operator={op} N={} t={:.6} steps={} guard_activations={guards} mass_drift={drift:.3e}",
        config.model,
        config.n_cells,
        state.time,
        reports.len(),
    );
    if let Some(out) = &config.output_path {
        write_state_csv(out, &state, &grid, &config.model)?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

/// One sweep resolution: run to t_end and return the final state.
fn sweep_run(
    config: &RunConfig,
    model: &dyn ConservationLaw,
    n: usize,
) -> Result<(AfState, Grid1D)> {
    let grid = Grid1D::new(0.0, 1.0, n, config.boundary)?;
    let state0 = initial_condition(&config.ic, &grid, config.seed)?;
    if state0.m != model.n_comp() {
        return Err(AfError::Config(format!(
            "initial condition has {} component(s), model '{}' expects {}",
            state0.m,
            model.name(),
            model.n_comp()
        )));
    }
    let op = config.resolved_operator()?;
    op.validate_for(model)?;
    let (state, _) = run_until(&state0, &grid, model, op, config.t_end, config.cfl)?;
    Ok((state, grid))
}

fn convergence_sweep(
    config: &RunConfig,
    model: &dyn ConservationLaw,
    resolutions: &[usize],
) -> Result<()> {
    // pick the reference: closed form where one exists, otherwise a fine-grid
    // run of the same scheme at 8 times the finest requested resolution
    let ic_spec = parse_ic(&config.ic)?;
    let scalar_profile = match &ic_spec {
        IcSpec::Scalar(p) if model.n_comp() == 1 => Some(p.clone()),
        IcSpec::Random { .. } => {
            return Err(AfError::Config(
                "a convergence sweep needs a deterministic initial profile".into(),
            ))
        }
        _ => None,
    };
    let fine = if scalar_profile.is_none() {
        let n_ref = 8 * resolutions.last().unwrap();
        Some(sweep_run(config, model, n_ref)?)
    } else {
        None
    };

    let mut reports: Vec<ErrorReport> = Vec::new();
    for &n in resolutions {
        let (state, grid) = sweep_run(config, model, n)?;
        let report = match (&scalar_profile, &fine) {
            (Some(profile), _) => error_norms(&state, &grid, |x| {
                exact_reference(model, profile, &grid, config.t_end, x)
            })?,
            (None, Some((fine_state, fine_grid))) => {
                error_norms(&state, &grid, self_reference(fine_state, fine_grid))?
            }
            (None, None) => unreachable!("fine reference built above"),
        };
        reports.push(report);
    }

    let m = model.n_comp();
    let mut orders_l1: Vec<Vec<f64>> = Vec::with_capacity(m);
    for c in 0..m {
        let errs: Vec<f64> = reports.iter().map(|r| r.l1[c]).collect();
        orders_l1.push(eoc(&errs, resolutions)?);
    }

    let op = config.resolved_operator()?;
    println!("# convergence: model={} operator={op} t_end={}", config.model, config.t_end);
    println!("{:>8} {:>10} {:>14} {:>8}", "N", "dofs", "L1(max comp)", "EOC");
    for (k, (n, rep)) in resolutions.iter().zip(&reports).enumerate() {
        let l1_max = rep.l1.iter().cloned().fold(0.0_f64, f64::max);
        let order = if k == 0 {
            "-".to_string()
        } else {
            // the slowest component is the honest headline number
            let o = (0..m).map(|c| orders_l1[c][k - 1]).fold(f64::INFINITY, f64::min);
            format!("{o:.3}")
        };
        println!("{n:>8} {:>10} {l1_max:>14.6e} {order:>8}", rep.dofs);
    }

    let out = config
        .output_path
        .clone()
        .unwrap_or_else(|| PathBuf::from("convergence.csv"));
    write_convergence_csv(
        &out,
        &config.model,
        &op.to_string(),
        config.t_end,
        resolutions,
        &reports,
        &orders_l1,
    )?;
    println!("wrote {}", out.display());
    Ok(())
}

fn execute(config: &RunConfig) -> Result<()> {
    let model = parse_model(&config.model)?;
    match &config.convergence_resolutions {
        Some(res) => convergence_sweep(config, model.as_ref(), res),
        None => single_run(config, model.as_ref()),
    }
}

/// Run the CLI on the given argument vector (the first element is the
/// program name) and return the process exit code: 0 success, 1 runtime
/// failure, 2 unusable flags or configuration.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let benign = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if benign { 0 } else { 2 };
        }
    };
    let config = match build_config(cli) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("run with --help for usage");
            return 2;
        }
    };
    match execute(&config) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
