//! Run configuration: one flat, serializable struct shared by the flag and
//! JSON entry points, plus the validation that turns it into a run plan.
//!
//! Frame conventions: `R`, `A`, `T` describe the condensate before the
//! quench (initial frame); `Atilde` is the density parameter in post-quench
//! units and may be given instead of `A` when a quench ratio is present.
//! Momenta (`k`, `k_min`, `k_max`, `rate_ref_k`) are in final-frame units
//! `k xi_f` for the quench-family commands and in the single stationary
//! frame otherwise.

use serde::{Deserialize, Serialize};

/// What the run computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Command {
    /// Bogoliubov spectrum over a momentum grid.
    Dispersion,
    /// Stationary thermal correlation over a momentum grid.
    Stationary,
    /// Time series of one mode through the quench.
    Quench,
    /// Post-quench correlation envelopes over a momentum grid.
    Envelope,
    /// Critical density parameter for the configured dipolar ratio.
    Critical,
    /// Envelope scan over a list of density parameters.
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Dispersion => "dispersion",
            Command::Stationary => "stationary",
            Command::Quench => "quench",
            Command::Envelope => "envelope",
            Command::Critical => "critical",
            Command::Sweep => "sweep",
        }
    }
}

/// Momentum grid spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// Default integrator/root-finder tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default reference momentum (final-frame units) for relative rates.
pub const DEFAULT_RATE_REF_K: f64 = 3.0;
/// Default number of time samples for the quench time series.
pub const DEFAULT_N_TAU: usize = 501;

/// Flat, fully serializable run configuration.
///
/// Optional fields absent from the input stay `None`; validation decides,
/// per command, which ones are required.  Unknown JSON keys are rejected so
/// a typo cannot silently fall back to a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    /// Dipolar-to-contact ratio (frame invariant).
    #[serde(rename = "R", skip_serializing_if = "Option::is_none", default)]
    pub r: Option<f64>,
    /// Density parameter in initial-frame units.
    #[serde(rename = "A", skip_serializing_if = "Option::is_none", default)]
    pub a: Option<f64>,
    /// Density parameter in final-frame units (alternative to `A`).
    #[serde(rename = "Atilde", skip_serializing_if = "Option::is_none", default)]
    pub atilde: Option<f64>,
    /// Temperature of the pre-quench state, initial-frame units.
    #[serde(rename = "T", skip_serializing_if = "Option::is_none", default)]
    pub temperature: Option<f64>,
    /// Quench ratio `c_i^2 / c_f^2`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ratio: Option<f64>,
    /// Absolute quench rate in `m c_f^2` units.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rate: Option<f64>,
    /// Quench rate as a multiple of `omega_i` at `rate_ref_k`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rate_over_omega_i: Option<f64>,
    /// Reference momentum (final-frame units) for `rate_over_omega_i`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rate_ref_k: Option<f64>,
    /// Single momentum for the time-series command.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<f64>,
    /// Momentum grid lower edge.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k_min: Option<f64>,
    /// Momentum grid upper edge.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k_max: Option<f64>,
    /// Momentum grid size.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n_k: Option<usize>,
    /// Momentum grid spacing.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub spacing: Option<Spacing>,
    /// Number of time samples for the time-series command.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n_tau: Option<usize>,
    /// Measurement proper time (final-frame units).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tau_m: Option<f64>,
    /// Density-parameter list for the sweep command (initial frame, like `A`,
    /// unless paired with `atilde_list`).
    #[serde(rename = "A_list", skip_serializing_if = "Option::is_none", default)]
    pub a_list: Option<Vec<f64>>,
    /// Output path prefix for `<prefix>.csv` and `<prefix>.meta.json`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub output: Option<String>,
    /// Integrator / root-finder tolerance.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tol: Option<f64>,
}

impl RunConfig {
    pub fn empty(command: Command) -> Self {
        Self {
            command,
            r: None,
            a: None,
            atilde: None,
            temperature: None,
            ratio: None,
            rate: None,
            rate_over_omega_i: None,
            rate_ref_k: None,
            k: None,
            k_min: None,
            k_max: None,
            n_k: None,
            spacing: None,
            n_tau: None,
            tau_m: None,
            a_list: None,
            output: None,
            tol: None,
        }
    }

    /// Effective tolerance after defaulting.
    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOL)
    }

    /// Effective reference momentum after defaulting.
    pub fn rate_ref_k(&self) -> f64 {
        self.rate_ref_k.unwrap_or(DEFAULT_RATE_REF_K)
    }

    /// Effective temperature after defaulting (commands that do not require
    /// `T` treat a missing value as zero).
    pub fn temperature(&self) -> f64 {
        self.temperature.unwrap_or(0.0)
    }

    /// Check every invariant and collect all violations.
    pub fn validate(&self) -> Result<(), Vec<String>> {
        let mut errs = Vec::new();
        let cmd = self.command;
        let quenchy = matches!(cmd, Command::Quench | Command::Envelope | Command::Sweep);

        let require = |errs: &mut Vec<String>, present: bool, what: &str| {
            if !present {
                errs.push(format!("{} requires {}", cmd.name(), what));
            }
        };

        // --- presence ------------------------------------------------------
        require(&mut errs, self.r.is_some(), "R");
        match cmd {
            Command::Critical => {}
            Command::Sweep => require(&mut errs, self.a_list.is_some(), "A_list"),
            _ => require(
                &mut errs,
                self.a.is_some() || (self.atilde.is_some() && quenchy),
                if quenchy { "A or Atilde" } else { "A" },
            ),
        }
        if cmd == Command::Stationary {
            require(&mut errs, self.temperature.is_some(), "an explicit T");
        }
        if quenchy {
            require(&mut errs, self.ratio.is_some(), "ratio");
            require(
                &mut errs,
                self.rate.is_some() || self.rate_over_omega_i.is_some(),
                "rate or rate_over_omega_i",
            );
        }
        if matches!(cmd, Command::Envelope | Command::Sweep) {
            require(&mut errs, self.tau_m.is_some(), "tau_m");
        }
        if cmd == Command::Quench {
            require(&mut errs, self.k.is_some(), "k");
        }
        let needs_grid = matches!(
            cmd,
            Command::Dispersion | Command::Stationary | Command::Envelope | Command::Sweep
        );
        if needs_grid {
            require(
                &mut errs,
                self.k_min.is_some() && self.k_max.is_some() && self.n_k.is_some(),
                "a momentum grid (k_min, k_max, n_k)",
            );
        }
        if cmd != Command::Critical {
            require(&mut errs, self.output.is_some(), "output");
        }

        // --- mutual exclusion ----------------------------------------------
        if self.a.is_some() && self.atilde.is_some() {
            errs.push("give A or Atilde, not both".into());
        }
        if self.rate.is_some() && self.rate_over_omega_i.is_some() {
            errs.push("give rate or rate_over_omega_i, not both".into());
        }
        if self.atilde.is_some() && !quenchy {
            errs.push(format!(
                "Atilde is a final-frame quantity; {} has no quench frame (use A)",
                cmd.name()
            ));
        }

        // --- ranges ----------------------------------------------------------
        let positive = |errs: &mut Vec<String>, v: Option<f64>, what: &str| {
            if let Some(x) = v {
                if !x.is_finite() || x <= 0.0 {
                    errs.push(format!("{what} = {x} must be finite and > 0"));
                }
            }
        };
        if let Some(r) = self.r {
            if !r.is_finite() || !(0.0..=roton_core::R_MAX + 1e-12).contains(&r) {
                errs.push(format!("R = {r} outside [0, sqrt(pi/2) = {}]", roton_core::R_MAX));
            }
        }
        positive(&mut errs, self.a, "A");
        positive(&mut errs, self.atilde, "Atilde");
        positive(&mut errs, self.ratio, "ratio");
        positive(&mut errs, self.rate, "rate");
        positive(&mut errs, self.rate_over_omega_i, "rate_over_omega_i");
        positive(&mut errs, self.rate_ref_k, "rate_ref_k");
        positive(&mut errs, self.k, "k");
        positive(&mut errs, self.k_min, "k_min");
        positive(&mut errs, self.k_max, "k_max");
        positive(&mut errs, self.tol, "tol");
        if let Some(t) = self.temperature {
            if !t.is_finite() || t < 0.0 {
                errs.push(format!("T = {t} must be finite and >= 0"));
            }
        }
        if let Some(tau_m) = self.tau_m {
            if !tau_m.is_finite() {
                errs.push(format!("tau_m = {tau_m} must be finite"));
            }
        }
        if let (Some(lo), Some(hi)) = (self.k_min, self.k_max) {
            if lo.is_finite() && hi.is_finite() && lo > 0.0 && hi <= lo {
                errs.push(format!("k_max = {hi} must exceed k_min = {lo}"));
            }
        }
        if let Some(n) = self.n_k {
            if n < 2 {
                errs.push(format!("n_k = {n} must be >= 2"));
            }
        }
        if let Some(n) = self.n_tau {
            if n < 2 {
                errs.push(format!("n_tau = {n} must be >= 2"));
            }
        }
        if let Some(list) = &self.a_list {
            if list.is_empty() {
                errs.push("A_list must not be empty".into());
            }
            for &a in list {
                if !a.is_finite() || a <= 0.0 {
                    errs.push(format!("A_list entry {a} must be finite and > 0"));
                }
            }
        }
        if let Some(tol) = self.tol {
            if tol.is_finite() && !(1e-14..=1e-2).contains(&tol) {
                errs.push(format!("tol = {tol} outside [1e-14, 1e-2]"));
            }
        }

        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }

    /// The momentum grid implied by `k_min`, `k_max`, `n_k`, `spacing`.
    pub fn k_grid(&self) -> Vec<f64> {
        let (lo, hi, n) = (
            self.k_min.expect("validated"),
            self.k_max.expect("validated"),
            self.n_k.expect("validated"),
        );
        match self.spacing.unwrap_or_default() {
            Spacing::Linear => (0..n)
                .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                .collect(),
            Spacing::Log => {
                let ll = lo.ln();
                let step = (hi / lo).ln() / (n - 1) as f64;
                (0..n).map(|i| (ll + step * i as f64).exp()).collect()
            }
        }
    }
}

/// Parse a JSON document into a config.  Accepts either a bare [`RunConfig`]
/// or a metadata sidecar (object with a `config` key), so a previous run's
/// `.meta.json` can be re-fed directly.
pub fn from_json(text: &str) -> Result<RunConfig, String> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| format!("malformed JSON: {e}"))?;
    let config_value = match &value {
        serde_json::Value::Object(map) if map.contains_key("config") => map["config"].clone(),
        _ => value,
    };
    serde_json::from_value(config_value).map_err(|e| format!("bad config: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_the_reference_envelope_document() {
        let text = r#"{"command":"Envelope","R":1.2533,"Atilde":3.4454,"ratio":0.5,
            "rate_ref_k":3,"rate_over_omega_i":1,"T":0,"tau_m":5,
            "k_min":0.1,"k_max":5.0,"n_k":100,"output":"out"}"#;
        let cfg = from_json(text).unwrap();
        assert_eq!(cfg.command, Command::Envelope);
        assert_eq!(cfg.atilde, Some(3.4454));
        cfg.validate().unwrap();
    }

    #[test]
    fn rejects_unknown_keys() {
        let text = r#"{"command":"Critical","R":1.0,"bogus":3}"#;
        let err = from_json(text).unwrap_err();
        assert!(err.contains("bogus"), "{err}");
    }

    #[test]
    fn lists_every_violation() {
        let mut cfg = RunConfig::empty(Command::Envelope);
        cfg.r = Some(5.0); // out of range too
        let errs = cfg.validate().unwrap_err();
        let joined = errs.join("\n");
        for needle in ["ratio", "rate", "tau_m", "momentum grid", "output", "outside"] {
            assert!(joined.contains(needle), "missing {needle:?} in:\n{joined}");
        }
    }

    #[test]
    fn meta_documents_round_trip() {
        let meta = r#"{"config":{"command":"Critical","R":1.2},"version":"x","wall":1}"#;
        let cfg = from_json(meta).unwrap();
        assert_eq!(cfg.command, Command::Critical);
        assert_eq!(cfg.r, Some(1.2));
        cfg.validate().unwrap();
    }

    #[test]
    fn grids_are_inclusive_and_ordered() {
        let mut cfg = RunConfig::empty(Command::Dispersion);
        cfg.k_min = Some(0.5);
        cfg.k_max = Some(2.0);
        cfg.n_k = Some(4);
        let lin = cfg.k_grid();
        assert_eq!(lin.len(), 4);
        assert!((lin[0] - 0.5).abs() < 1e-15 && (lin[3] - 2.0).abs() < 1e-15);
        cfg.spacing = Some(Spacing::Log);
        let log = cfg.k_grid();
        assert!((log[0] - 0.5).abs() < 1e-15 && (log[3] - 2.0).abs() < 1e-12);
        assert!((log[1] / log[0] - log[2] / log[1]).abs() < 1e-12);
    }
}
