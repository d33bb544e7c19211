//! Command execution: build the physics objects from a validated config,
//! sweep the grids (in parallel where it pays), and write the CSV/metadata
//! pair.
//!
//! Output discipline: CSV bodies are deterministic byte-for-byte — rows are
//! assembled in grid order after the parallel map, and every number is
//! printed with 15 significant digits.  The metadata sidecar additionally
//! records wall-clock and timestamps, so only the CSV is byte-reproducible.

use crate::config::{Command, RunConfig, Spacing, DEFAULT_N_TAU};
use rayon::prelude::*;
use roton_core::correlations::{
    envelopes, g2_low_t_expansion, g2_post_quench, g2_stationary_thermal, thermal_occupation,
    Detection,
};
use roton_core::dispersion::{critical_a, interaction_kernel, spectrum, Frame, PhysicsParams};
use roton_core::quench::{integrate_mode_sampled, QuenchProtocol};
use serde_json::json;
use std::fmt::Write as _;
use std::path::Path;
use std::time::{Instant, SystemTime};

/// Failure modes of a run, each with its process exit code.
#[derive(Debug)]
pub enum RunError {
    /// Configuration was structurally valid but physically inconsistent
    /// (bad domain, failed bracket, out-of-window time).  Exit 1.
    Invalid(String),
    /// Dynamically unstable spectrum on the requested grid.  Exit 2.
    Instability(String),
    /// A numerical tolerance could not be met.  Exit 3.
    Tolerance(String),
    /// Filesystem failure.  Exit 4.
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Invalid(_) => 1,
            RunError::Instability(_) => 2,
            RunError::Tolerance(_) => 3,
            RunError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Invalid(m) => write!(f, "validation error: {m}"),
            RunError::Instability(m) => write!(f, "instability error: {m}"),
            RunError::Tolerance(m) => write!(f, "tolerance error: {m}"),
            RunError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl From<roton_core::Error> for RunError {
    fn from(e: roton_core::Error) -> Self {
        match &e {
            roton_core::Error::Instability { .. } => RunError::Instability(e.to_string()),
            roton_core::Error::Tolerance { .. } => RunError::Tolerance(e.to_string()),
            _ => RunError::Invalid(e.to_string()),
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e.to_string())
    }
}

/// One number, 15 significant digits, locale-free.
fn fmt(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.14e}")
    }
}

/// Quench-family setup derived from the config: final-frame parameters, the
/// protocol, and a JSON record of every conversion performed.
struct QuenchSetup {
    params: PhysicsParams,
    protocol: QuenchProtocol,
    derived: serde_json::Value,
}

fn quench_setup(cfg: &RunConfig, a_initial: Option<f64>) -> Result<QuenchSetup, RunError> {
    let ratio = cfg.ratio.expect("validated");
    let r = cfg.r.expect("validated");
    // Density parameter: final frame directly, or converted from initial.
    let a_final = match (a_initial, cfg.atilde) {
        (Some(a), None) => a / ratio,
        (None, Some(at)) => at,
        _ => unreachable!("validation enforces exactly one of A/Atilde"),
    };
    let t_final = cfg.temperature() * ratio;
    let params = PhysicsParams::new(r, a_final, t_final, Frame::Final)?;
    let (rate, omega_i_ref) = match (cfg.rate, cfg.rate_over_omega_i) {
        (Some(rate), None) => (rate, None),
        (None, Some(rel)) => {
            let k_ref = cfg.rate_ref_k();
            let omega_i = spectrum(k_ref, &params, ratio)?.omega;
            (rel * omega_i, Some(omega_i))
        }
        _ => unreachable!("validation enforces exactly one rate option"),
    };
    let protocol = QuenchProtocol::with_end(ratio, rate, cfg.tau_m.unwrap_or(0.0))?;
    let derived = json!({
        "frame": "final",
        "a_final": a_final,
        "t_final": t_final,
        "rate": rate,
        "rate_ref_k": omega_i_ref.map(|_| cfg.rate_ref_k()),
        "omega_i_at_ref_k": omega_i_ref,
        "tau0": protocol.tau0(),
        "tau_end": protocol.tau_end(),
    });
    Ok(QuenchSetup { params, protocol, derived })
}

/// Initial-state thermal occupation of a mode (evaluated at the pre-quench
/// frequency, final-frame units).
fn n_in(k: f64, setup: &QuenchSetup) -> Result<f64, RunError> {
    let t = setup.params.temperature;
    if t == 0.0 {
        return Ok(0.0);
    }
    let omega_i = spectrum(k, &setup.params, setup.protocol.ratio())?.omega;
    Ok(thermal_occupation(omega_i, t)?)
}

/// Envelope-scan row shared by the envelope and sweep commands.
fn envelope_row(k: f64, setup: &QuenchSetup, tau_m: f64, tol: f64) -> Result<String, RunError> {
    let mode = integrate_mode_sampled(k, &setup.params, &setup.protocol, tol, &[tau_m])?;
    let occ = n_in(k, setup)?;
    let (_, g2n) = g2_post_quench(&mode, tau_m, occ, &setup.params, &setup.protocol)?;
    let (lower, upper) = envelopes(&mode, occ)?;
    let class = Detection::from_lower(lower);
    Ok(format!(
        "{},{},{},{},{class}",
        fmt(k),
        fmt(g2n),
        fmt(lower),
        fmt(upper)
    ))
}

/// Run a fallible row builder over a grid in parallel, preserving order and
/// surfacing the first error in grid order.
fn par_rows<T: Sync>(
    grid: &[T],
    f: impl Fn(&T) -> Result<String, RunError> + Sync,
) -> Result<Vec<String>, RunError> {
    let results: Vec<Result<String, RunError>> = grid.par_iter().map(&f).collect();
    let mut rows = Vec::with_capacity(results.len());
    for r in results {
        rows.push(r?);
    }
    Ok(rows)
}

/// Execute a validated config end to end.
pub fn execute(cfg: &RunConfig) -> Result<(), RunError> {
    let started = Instant::now();
    let (header, rows, derived, stdout_line) = match cfg.command {
        Command::Dispersion => run_dispersion(cfg)?,
        Command::Stationary => run_stationary(cfg)?,
        Command::Quench => run_quench(cfg)?,
        Command::Envelope => run_envelope(cfg)?,
        Command::Critical => run_critical(cfg)?,
        Command::Sweep => run_sweep(cfg)?,
    };
    if let Some(line) = &stdout_line {
        println!("{line}");
    }
    if let Some(prefix) = &cfg.output {
        write_outputs(cfg, prefix, &header, &rows, derived, started)?;
    }
    Ok(())
}

type CommandOutput = (String, Vec<String>, serde_json::Value, Option<String>);

fn stationary_params(cfg: &RunConfig) -> Result<PhysicsParams, RunError> {
    Ok(PhysicsParams::new(
        cfg.r.expect("validated"),
        cfg.a.expect("validated"),
        cfg.temperature(),
        Frame::Initial,
    )?)
}

fn run_dispersion(cfg: &RunConfig) -> Result<CommandOutput, RunError> {
    let params = stationary_params(cfg)?;
    let rows = par_rows(&cfg.k_grid(), |&k| {
        let m = spectrum(k, &params, 1.0)?;
        Ok(format!(
            "{},{},{},{},{},{}",
            fmt(k),
            fmt(m.omega),
            fmt(m.u),
            fmt(m.v),
            fmt((m.u + m.v).powi(2)),
            fmt(m.kernel)
        ))
    })?;
    Ok((
        "k,omega,u,v,g2vac,kernel".into(),
        rows,
        json!({"frame": "initial"}),
        None,
    ))
}

fn run_stationary(cfg: &RunConfig) -> Result<CommandOutput, RunError> {
    let params = stationary_params(cfg)?;
    let rows = par_rows(&cfg.k_grid(), |&k| {
        let g2 = g2_stationary_thermal(k, &params)?;
        // The low-temperature check column is undefined at T = 0.
        let check = if params.temperature > 0.0 {
            g2_low_t_expansion(k, &params)?
        } else {
            f64::NAN
        };
        Ok(format!("{},{},{}", fmt(k), fmt(g2), fmt(check)))
    })?;
    Ok((
        "k,g2,g2_lowT_check".into(),
        rows,
        json!({"frame": "initial"}),
        None,
    ))
}

fn run_quench(cfg: &RunConfig) -> Result<CommandOutput, RunError> {
    let setup = quench_setup(cfg, cfg.a)?;
    let k = cfg.k.expect("validated");
    let (tau0, tau_end) = (setup.protocol.tau0(), setup.protocol.tau_end());
    let n_tau = cfg.n_tau.unwrap_or(DEFAULT_N_TAU);
    let taus: Vec<f64> = (0..n_tau)
        .map(|i| tau0 + (tau_end - tau0) * i as f64 / (n_tau - 1) as f64)
        .collect();
    let mode = integrate_mode_sampled(k, &setup.params, &setup.protocol, cfg.tol(), &taus)?;
    let occ = n_in(k, &setup)?;
    let kern = interaction_kernel(k, &setup.params)?;
    let h = 0.5 * k * k;
    let mut rows = Vec::with_capacity(n_tau);
    for s in &mode.trace {
        let c2 = setup.protocol.c2_of_tau(s.tau);
        let omega = (h * (h + 2.0 * c2 * kern)).sqrt();
        let (g2, g2n) = g2_post_quench(&mode, s.tau, occ, &setup.params, &setup.protocol)?;
        rows.push(format!(
            "{},{},{},{},{},{},{}",
            fmt(s.tau),
            fmt(c2),
            fmt(omega),
            fmt(s.alpha_abs2()),
            fmt(s.beta_abs2()),
            fmt(g2),
            fmt(g2n)
        ));
    }
    let mut derived = setup.derived;
    derived["omega_i"] = json!(mode.omega_i);
    derived["omega_f"] = json!(mode.omega_f);
    derived["beta_abs2_final"] = json!(mode.beta_abs2());
    Ok((
        "tau,c2_over_cf2,omega,alpha_abs2,beta_abs2,g2,g2_normalized".into(),
        rows,
        derived,
        None,
    ))
}

fn run_envelope(cfg: &RunConfig) -> Result<CommandOutput, RunError> {
    let setup = quench_setup(cfg, cfg.a)?;
    let tau_m = cfg.tau_m.expect("validated");
    let rows = par_rows(&cfg.k_grid(), |&k| envelope_row(k, &setup, tau_m, cfg.tol()))?;
    Ok((
        "k,g2norm_at_tau_m,lower,upper,class".into(),
        rows,
        setup.derived,
        None,
    ))
}

fn run_critical(cfg: &RunConfig) -> Result<CommandOutput, RunError> {
    let r = cfg.r.expect("validated");
    let ac = critical_a(r)?;
    let line = match ac {
        Some(a) => format!("A_c = {a:.10}"),
        None => "A_c = none (spectrum stable for every A)".to_string(),
    };
    let rows = vec![format!("{},{}", fmt(r), fmt(ac.unwrap_or(f64::NAN)))];
    Ok((
        "R,A_c".into(),
        rows,
        json!({"frame": "initial"}),
        Some(line),
    ))
}

fn run_sweep(cfg: &RunConfig) -> Result<CommandOutput, RunError> {
    let tau_m = cfg.tau_m.expect("validated");
    let a_list = cfg.a_list.as_ref().expect("validated");
    let grid = cfg.k_grid();
    let mut rows = Vec::with_capacity(a_list.len() * grid.len());
    let mut conversions = Vec::with_capacity(a_list.len());
    for &a in a_list {
        // Each density gets its own rate conversion (omega_i depends on A).
        let setup = quench_setup(cfg, Some(a))?;
        conversions.push(json!({"A": a, "derived": setup.derived}));
        let block = par_rows(&grid, |&k| {
            let row = envelope_row(k, &setup, tau_m, cfg.tol())?;
            Ok(format!("{},{row}", fmt(a)))
        })?;
        rows.extend(block);
    }
    Ok((
        "A,k,g2norm_at_tau_m,lower,upper,class".into(),
        rows,
        json!({"frame": "final", "per_A": conversions}),
        None,
    ))
}

/// Resolved copy of the config with every defaultable field filled, for the
/// metadata sidecar (so re-feeding it reproduces the run exactly).
fn resolved(cfg: &RunConfig) -> RunConfig {
    let mut out = cfg.clone();
    out.tol = Some(cfg.tol());
    if cfg.temperature.is_none() && cfg.command != Command::Critical {
        out.temperature = Some(0.0);
    }
    if cfg.rate_over_omega_i.is_some() && cfg.rate_ref_k.is_none() {
        out.rate_ref_k = Some(cfg.rate_ref_k());
    }
    if cfg.k_min.is_some() && cfg.spacing.is_none() {
        out.spacing = Some(Spacing::default());
    }
    if cfg.command == Command::Quench && cfg.n_tau.is_none() {
        out.n_tau = Some(DEFAULT_N_TAU);
    }
    out
}

fn write_outputs(
    cfg: &RunConfig,
    prefix: &str,
    header: &str,
    rows: &[String],
    derived: serde_json::Value,
    started: Instant,
) -> Result<(), RunError> {
    let csv_path = format!("{prefix}.csv");
    let meta_path = format!("{prefix}.meta.json");
    if let Some(parent) = Path::new(&csv_path).parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut body = String::with_capacity(rows.len() * 64 + header.len() + 1);
    writeln!(body, "{header}").expect("string write");
    for row in rows {
        writeln!(body, "{row}").expect("string write");
    }
    std::fs::write(&csv_path, body)?;

    let meta = json!({
        "config": resolved(cfg),
        "derived": derived,
        "rows": rows.len(),
        "version": env!("CARGO_PKG_VERSION"),
        "wall_clock_seconds": started.elapsed().as_secs_f64(),
        "generated_at_unix": SystemTime::now()
            .duration_since(SystemTime::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    });
    let mut text = serde_json::to_string_pretty(&meta).expect("meta serialization");
    text.push('\n');
    std::fs::write(&meta_path, text)?;
    Ok(())
}
