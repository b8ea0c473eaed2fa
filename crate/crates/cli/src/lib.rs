//! Command-line front end for the Landau-polariton models.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use landau_core::optics::Polarization;

pub use config::Config;
pub use error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolArg {
    Active,
    Inactive,
}

#[derive(Debug, Parser)]
#[command(name = "landau", version, about = "Multimode Landau polaritons in a slot cavity")]
pub struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides output.dir).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Circular polarisation for transmission maps.
    #[arg(long, global = true, value_enum, default_value = "active")]
    pub pol: PolArg,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fields at which the CR and each MP mode meet the cavity frequency.
    Zerodetune,
    /// Bare cavity, CR and MP frequencies over the field sweep.
    Dispersion,
    /// Polariton branches and Hopfield coefficients over the field sweep.
    Polaritons,
    /// Transfer-matrix transmittance map of the cavity.
    Transmission {
        /// Also extract ridge peaks from the map.
        #[arg(long)]
        peaks: bool,
        /// Zero every coupling (empty cavity with a passive 2DEG layer).
        #[arg(long)]
        passive: bool,
    },
    /// Fit couplings to a peak list.
    Fit {
        /// Peak CSV with columns B_T,freq_THz[,weight][,label].
        peaks: Option<PathBuf>,
        /// Generate noisy peaks from the configured couplings with this seed.
        #[arg(long, value_name = "SEED")]
        synthetic: Option<u64>,
        /// Fit one MP coupling shared by every mode.
        #[arg(long)]
        shared_gn: bool,
    },
}

fn describe(cli: &Cli) -> String {
    let pol = match cli.pol {
        PolArg::Active => "active",
        PolArg::Inactive => "inactive",
    };
    let cmd = match &cli.command {
        Command::Zerodetune => "zerodetune".to_string(),
        Command::Dispersion => "dispersion".to_string(),
        Command::Polaritons => "polaritons".to_string(),
        Command::Transmission { peaks, passive } => {
            let mut s = "transmission".to_string();
            if *peaks {
                s.push_str(" --peaks");
            }
            if *passive {
                s.push_str(" --passive");
            }
            s
        }
        Command::Fit { peaks, synthetic, shared_gn } => {
            let mut s = "fit".to_string();
            if let Some(p) = peaks {
                s.push_str(&format!(" {}", p.display()));
            }
            if let Some(seed) = synthetic {
                s.push_str(&format!(" --synthetic {seed}"));
            }
            if *shared_gn {
                s.push_str(" --shared-gn");
            }
            s
        }
    };
    format!("{cmd} --pol {pol}")
}

/// Execute a parsed command line and return the text for standard output.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config <path> is required".into()))?;
    let config = Config::load(path)?;
    let ctx = commands::Context {
        out_dir: cli.out.clone().unwrap_or_else(|| PathBuf::from(&config.output.dir)),
        polarization: match cli.pol {
            PolArg::Active => Polarization::CrActive,
            PolArg::Inactive => Polarization::CrInactive,
        },
        command: describe(cli),
        config,
    };
    match &cli.command {
        Command::Zerodetune => commands::zerodetune(&ctx),
        Command::Dispersion => commands::dispersion(&ctx),
        Command::Polaritons => commands::polaritons(&ctx),
        Command::Transmission { peaks, passive } => commands::transmission(&ctx, *peaks, *passive),
        Command::Fit { peaks, synthetic, shared_gn } => commands::fit_command(&ctx, peaks.as_deref(), *synthetic, *shared_gn),
    }
}
