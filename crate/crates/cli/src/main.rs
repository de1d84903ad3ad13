//! `erasure`: scenario runner for erasure-cost simulations.
//!
//! Exit codes: 0 success, 1 invariant/verification failure, 2 invalid or
//! infeasible arguments, 3 numerical non-convergence.

// Domain checks are written `!(x > 0.0)` so that NaN fails them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod emit;
mod verify;

use clap::Parser;
use commands::{archetypal, bounds, ensemble, erase, finite};

#[derive(Debug, Parser)]
#[command(
    name = "erasure",
    version,
    about = "Erasure costs against thermal and spin reservoirs: \
             work integrals, cost series and bounds, exact finite baths, \
             seeded Monte Carlo ensembles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Subcommand)]
enum Command {
    /// Quasi-static thermal erasure: work table and the kT ln 2 summary.
    Archetypal(archetypal::ArchetypalArgs),
    /// Cycle-based erasure ledger against a spin reservoir.
    Erase(erase::EraseArgs),
    /// Cost series, analytic bounds and combined cost over a sweep.
    Bounds(bounds::BoundsArgs),
    /// Exact small-bath audit: back-action and entropy ledger.
    Finite(finite::FiniteArgs),
    /// Seeded Monte Carlo ensembles (trajectory or residual field).
    Ensemble(ensemble::EnsembleArgs),
    /// Run the cross-module invariant suite.
    Verify(verify::VerifyArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Archetypal(args) => archetypal::run(args),
        Command::Erase(args) => erase::run(args),
        Command::Bounds(args) => bounds::run(args),
        Command::Finite(args) => finite::run(args),
        Command::Ensemble(args) => ensemble::run(args),
        Command::Verify(args) => verify::run(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
