//! `roton`: dispersion, quench, and correlation scans of a quenched
//! quasi-2D dipolar condensate, written as CSV plus a metadata sidecar.
//!
//! Two entry styles share one configuration schema: subcommands with flags
//! (`roton envelope --R 1.2533 ...`) and JSON documents
//! (`roton run figures/some_run.json`), where a previous run's
//! `.meta.json` is itself a valid document (round-trip).
//!
//! Exit codes: 0 success, 1 usage/validation, 2 instability, 3 tolerance,
//! 4 I/O.

mod config;
mod run;

use clap::{Args, Parser, Subcommand};
use config::{Command, RunConfig, Spacing};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "roton",
    version,
    about = "Bogoliubov spectra, tanh quenches, and pair-correlation witnesses \
             for a quasi-2D dipolar condensate"
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Bogoliubov spectrum omega(k), amplitudes, and kernel over a k-grid
    Dispersion(Flags),
    /// Stationary thermal correlation g2(k) with its low-T check column
    Stationary(Flags),
    /// Time series of one mode (alpha, beta, g2) through the quench
    Quench(Flags),
    /// Post-quench correlation envelopes and witness classes over a k-grid
    Envelope(Flags),
    /// Critical density parameter A_c for the given dipolar ratio R
    Critical(Flags),
    /// Envelope scan over a list of density parameters
    Sweep(Flags),
    /// Execute a JSON config document (a .meta.json sidecar also works)
    Run {
        /// Path to the JSON document
        config: PathBuf,
    },
}

/// The full flag set; per-command requirements are enforced by validation,
/// which reports every violation at once.
#[derive(Args)]
struct Flags {
    /// Dipolar-to-contact ratio R in [0, sqrt(pi/2)]
    #[arg(long = "R")]
    r: Option<f64>,
    /// Density parameter A (initial-frame units)
    #[arg(long = "A")]
    a: Option<f64>,
    /// Density parameter in final-frame units (alternative to --A)
    #[arg(long = "Atilde")]
    atilde: Option<f64>,
    /// Temperature of the pre-quench state (initial-frame units)
    #[arg(long = "T")]
    temperature: Option<f64>,
    /// Quench ratio c_i^2/c_f^2 in (0, 1]
    #[arg(long)]
    ratio: Option<f64>,
    /// Quench rate, absolute (m c_f^2 units)
    #[arg(long)]
    rate: Option<f64>,
    /// Quench rate as a multiple of omega_i at the reference momentum
    #[arg(long = "rate-over-omega-i")]
    rate_over_omega_i: Option<f64>,
    /// Reference momentum k xi_f for --rate-over-omega-i [default: 3]
    #[arg(long = "rate-ref-k")]
    rate_ref_k: Option<f64>,
    /// Single momentum k xi_f for the quench time series
    #[arg(long)]
    k: Option<f64>,
    /// Momentum grid lower edge
    #[arg(long = "kmin")]
    k_min: Option<f64>,
    /// Momentum grid upper edge
    #[arg(long = "kmax")]
    k_max: Option<f64>,
    /// Momentum grid size
    #[arg(long = "nk")]
    n_k: Option<usize>,
    /// Momentum grid spacing: linear or log [default: linear]
    #[arg(long, value_parser = parse_spacing)]
    spacing: Option<Spacing>,
    /// Number of time samples for the quench time series [default: 501]
    #[arg(long = "ntau")]
    n_tau: Option<usize>,
    /// Measurement proper time tau_m (final-frame units)
    #[arg(long = "tau-m")]
    tau_m: Option<f64>,
    /// Comma-separated density parameters for the sweep command
    #[arg(long = "A-list", value_delimiter = ',')]
    a_list: Option<Vec<f64>>,
    /// Output path prefix for <prefix>.csv and <prefix>.meta.json
    #[arg(long)]
    output: Option<String>,
    /// Integrator / root-finder tolerance [default: 1e-10]
    #[arg(long)]
    tol: Option<f64>,
}

fn parse_spacing(s: &str) -> Result<Spacing, String> {
    match s {
        "linear" => Ok(Spacing::Linear),
        "log" => Ok(Spacing::Log),
        other => Err(format!("unknown spacing {other:?} (use linear or log)")),
    }
}

impl Flags {
    fn into_config(self, command: Command) -> RunConfig {
        let mut cfg = RunConfig::empty(command);
        cfg.r = self.r;
        cfg.a = self.a;
        cfg.atilde = self.atilde;
        cfg.temperature = self.temperature;
        cfg.ratio = self.ratio;
        cfg.rate = self.rate;
        cfg.rate_over_omega_i = self.rate_over_omega_i;
        cfg.rate_ref_k = self.rate_ref_k;
        cfg.k = self.k;
        cfg.k_min = self.k_min;
        cfg.k_max = self.k_max;
        cfg.n_k = self.n_k;
        cfg.spacing = self.spacing;
        cfg.n_tau = self.n_tau;
        cfg.tau_m = self.tau_m;
        cfg.a_list = self.a_list;
        cfg.output = self.output;
        cfg.tol = self.tol;
        cfg
    }
}

fn build_config(cli: Cli) -> Result<RunConfig, String> {
    Ok(match cli.command {
        CliCommand::Dispersion(f) => f.into_config(Command::Dispersion),
        CliCommand::Stationary(f) => f.into_config(Command::Stationary),
        CliCommand::Quench(f) => f.into_config(Command::Quench),
        CliCommand::Envelope(f) => f.into_config(Command::Envelope),
        CliCommand::Critical(f) => f.into_config(Command::Critical),
        CliCommand::Sweep(f) => f.into_config(Command::Sweep),
        CliCommand::Run { config } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| format!("cannot read {}: {e}", config.display()))?;
            config::from_json(&text)?
        }
    })
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match build_config(cli) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("usage error: {msg}");
            return 1;
        }
    };
    if let Err(violations) = cfg.validate() {
        eprintln!("validation error ({} violations):", violations.len());
        for v in &violations {
            eprintln!("  - {v}");
        }
        return 1;
    }
    match run::execute(&cfg) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn main() {
    std::process::exit(real_main());
}
