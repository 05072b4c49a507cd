//! Command-line front end for the weak-value amplification simulator.
//!
//! Four subcommands cover the experiment's workflows: `real-wv` (angular
//! amplification versus post-selection angle), `imag-wv` (photon-counting
//! OAM scans and the linearity of the OAM shift), `sweep` (cartesian
//! parameter scans), and `validate` (numerical invariant catalog).
//!
//! Configuration merges three layers, later ones winning: per-scenario
//! defaults, an optional TOML file (`--config`), then flags. Angles are
//! degrees at this boundary. Exit codes: 0 success, 2 configuration error,
//! 3 weak-regime violation, 4 numerical failure or invariant violation.

mod config;
mod error;
mod output;
mod pipeline;
mod report;
mod scenarios;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{ExperimentConfig, Mode};
use crate::error::Result;

#[derive(Parser)]
#[command(
    name = "wva",
    version,
    about = "Weak-value amplification of angular rotations: simulate a \
             polarization-tagged Sagnac interferometer, post-select, and \
             read the rotation off the angular and OAM pointers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the post-selection angle at zero arm phase and tabulate the
    /// angular amplification against the closed form
    RealWv(CommonArgs),
    /// Scan the OAM spectrum under photon counting, fit the histograms,
    /// and check the shift scales linearly with the imaginary weak value
    ImagWv(CommonArgs),
    /// Evaluate a cartesian product of operating points in parallel into
    /// one aggregate CSV
    Sweep(CommonArgs),
    /// Measure the numerical invariant catalog at one operating point
    Validate(CommonArgs),
}

impl Command {
    fn split(self) -> (Mode, CommonArgs) {
        match self {
            Command::RealWv(args) => (Mode::RealWv, args),
            Command::ImagWv(args) => (Mode::ImagWv, args),
            Command::Sweep(args) => (Mode::Sweep, args),
            Command::Validate(args) => (Mode::Validate, args),
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// TOML config file; flags override its values
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Directory the output files are written to (created if missing)
    #[arg(long, value_name = "DIR", default_value = ".")]
    out_dir: PathBuf,

    /// Base RNG seed for photon counting (required by imag-wv and sweep)
    #[arg(long)]
    seed: Option<u64>,

    /// Angular grid samples (power of two, at least 64)
    #[arg(long)]
    grid: Option<usize>,

    /// Pointer amplitude width in degrees
    #[arg(long)]
    eta_phi_deg: Option<f64>,

    /// True rotation between the arms in degrees
    #[arg(long)]
    delta_phi_deg: Option<f64>,

    /// Post-selection half-angle in degrees
    #[arg(long)]
    gamma_half_deg: Option<f64>,

    /// Arm-phase half-angle in degrees
    #[arg(long)]
    theta_half_deg: Option<f64>,

    /// Intensity fraction the polarizer leaks from the rejected state
    #[arg(long)]
    extinction_ratio: Option<f64>,

    /// Counting windows per scanned OAM index
    #[arg(long)]
    windows: Option<usize>,

    /// Duration of one counting window in seconds
    #[arg(long)]
    window_seconds: Option<f64>,

    /// Expected detected photons per second at unit coupling efficiency
    #[arg(long)]
    mean_flux: Option<f64>,
}

impl CommonArgs {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(grid) = self.grid {
            cfg.grid = grid;
        }
        if let Some(deg) = self.eta_phi_deg {
            cfg.eta_phi_deg = deg;
        }
        if let Some(deg) = self.delta_phi_deg {
            cfg.delta_phi_deg = deg;
        }
        if let Some(deg) = self.gamma_half_deg {
            cfg.gamma_half_deg = deg;
        }
        if let Some(deg) = self.theta_half_deg {
            cfg.theta_half_deg = deg;
        }
        if let Some(ratio) = self.extinction_ratio {
            cfg.extinction_ratio = ratio;
        }
        if let Some(windows) = self.windows {
            cfg.scan.windows = windows;
        }
        if let Some(seconds) = self.window_seconds {
            cfg.scan.window_seconds = seconds;
        }
        if let Some(flux) = self.mean_flux {
            cfg.scan.mean_flux = flux;
        }
        if let Some(seed) = self.seed {
            cfg.scan.seed = Some(seed);
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("{err}");
        std::process::exit(err.exit_code());
    }
}

fn run(cli: Cli) -> Result<()> {
    let (mode, args) = cli.command.split();
    let mut cfg = ExperimentConfig::defaults(mode);
    if let Some(path) = &args.config {
        let file = config::load_file(path)?;
        cfg.apply_file(&file)?;
    }
    args.apply(&mut cfg);
    cfg.validate()?;
    std::fs::create_dir_all(&args.out_dir)?;

    match mode {
        Mode::RealWv => scenarios::real_wv::run(&cfg, &args.out_dir),
        Mode::ImagWv => scenarios::imag_wv::run(&cfg, &args.out_dir),
        Mode::Sweep => scenarios::sweep::run(&cfg, &args.out_dir),
        Mode::Validate => scenarios::validate::run(&cfg, &args.out_dir),
    }
}
