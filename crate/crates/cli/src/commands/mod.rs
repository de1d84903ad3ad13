//! Subcommand implementations.

pub mod archetypal;
pub mod bounds;
pub mod ensemble;
pub mod erase;
pub mod finite;

use crate::config::{CliError, FileConfig};
use crate::emit::Format;
use clap::Args;
use std::path::PathBuf;

/// Flags shared by every scenario subcommand.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Write the output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// JSON file supplying any flag by its long name; command-line flags
    /// override file values.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl CommonArgs {
    pub fn file(&self) -> Result<FileConfig, CliError> {
        FileConfig::load(self.config.as_deref())
    }

    /// Resolved format, defaulting per command.
    pub fn format_or(&self, file: &FileConfig, default: Format) -> Result<Format, CliError> {
        if let Some(f) = self.format {
            return Ok(f);
        }
        match file.string("format")?.as_deref() {
            None => Ok(default),
            Some("csv") => Ok(Format::Csv),
            Some("json") => Ok(Format::Json),
            Some(other) => Err(CliError::Usage(format!(
                "config format must be \"csv\" or \"json\", got {other:?}"
            ))),
        }
    }
}

/// Gap-ratio flags shared by the spin-reservoir subcommands.
#[derive(Debug, Args, Default)]
pub struct GapArgs {
    /// Dimensionless gap ratio (epsilon/kT or gamma*hbar).
    #[arg(long)]
    pub x: Option<f64>,

    /// Population parameter of the reservoir, in (0, 1).
    #[arg(long)]
    pub alpha: Option<f64>,

    /// Zeeman splitting; with --kT it fixes the gap ratio, alone it only
    /// scales the energy ledger.
    #[arg(long)]
    pub epsilon: Option<f64>,

    /// Reservoir temperature (energy units), paired with --epsilon.
    #[arg(long = "kT")]
    pub k_t: Option<f64>,

    /// Angular-momentum Lagrange multiplier (hbar = 1).
    #[arg(long)]
    pub gamma: Option<f64>,
}

impl GapArgs {
    pub fn inputs(&self) -> crate::config::GapInputs {
        crate::config::GapInputs {
            x: self.x,
            alpha: self.alpha,
            epsilon: self.epsilon,
            k_t: self.k_t,
            gamma: self.gamma,
        }
    }

    pub fn file_inputs(file: &FileConfig) -> Result<crate::config::GapInputs, CliError> {
        Ok(crate::config::GapInputs {
            x: file.f64("x")?,
            alpha: file.f64("alpha")?,
            epsilon: file.f64("epsilon")?,
            k_t: file.f64("kT")?,
            gamma: file.f64("gamma")?,
        })
    }

    pub fn resolve(&self, file: &FileConfig) -> Result<crate::config::ResolvedGap, CliError> {
        let merged = self.inputs().merged_with(Self::file_inputs(file)?);
        crate::config::resolve_gap(&merged)
    }
}
