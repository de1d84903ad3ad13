//! `erase`: cycle-based erasure ledger against a spin reservoir.

use super::{CommonArgs, GapArgs};
use crate::config::{merge, CliError};
use crate::emit::{csv_f64, document, write_output, Csv, Format, Json};
use clap::Args;
use erasure_core::protocol::{
    binary_entropy, run_erasure, ErasureLedger, ProtocolConfig, ProtocolMode, StopRule,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    /// Zeeman-split levels: spin and energy are both paid.
    Zeeman,
    /// Energy-degenerate levels: the ledger has no energy channel.
    Degenerate,
}

#[derive(Debug, Args)]
pub struct EraseArgs {
    /// Reservoir flavour.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,

    /// Run exactly this many cycles.
    #[arg(long)]
    pub cycles: Option<usize>,

    /// Cycle until the residual memory entropy (nats) drops to here.
    #[arg(long = "target-entropy")]
    pub target_entropy: Option<f64>,

    /// Include the initial memory spin (hbar/2 and epsilon/2) in totals.
    #[arg(long = "include-initial")]
    pub include_initial: bool,

    #[command(flatten)]
    pub gap: GapArgs,

    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn run(args: &EraseArgs) -> Result<(), CliError> {
    let file = args.common.file()?;
    let mode = match (args.mode, file.string("mode")?.as_deref()) {
        (Some(m), _) => m,
        (None, Some("zeeman")) => Mode::Zeeman,
        (None, Some("degenerate")) => Mode::Degenerate,
        (None, Some(other)) => {
            return Err(CliError::Usage(format!(
                "config mode must be \"zeeman\" or \"degenerate\", got {other:?}"
            )))
        }
        (None, None) => {
            return Err(CliError::Usage(
                "erase requires --mode zeeman|degenerate".into(),
            ))
        }
    };
    let gap = args.gap.resolve(&file)?;
    let cycles = merge(args.cycles, file.usize("cycles")?);
    let target_entropy = merge(args.target_entropy, file.f64("target-entropy")?);
    let include_initial = args.include_initial || file.bool("include-initial")?.unwrap_or(false);
    let format = args.common.format_or(&file, Format::Csv)?;

    let stop = match (cycles, target_entropy) {
        (Some(m), None) => StopRule::MaxCycles(m),
        (None, Some(s)) => StopRule::ResidualEntropy(s),
        (None, None) => {
            return Err(CliError::Usage(
                "erase requires a stop rule: --cycles or --target-entropy".into(),
            ))
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "give exactly one stop rule, not both --cycles and --target-entropy".into(),
            ))
        }
    };
    let protocol_mode = match mode {
        Mode::Zeeman => ProtocolMode::Zeeman {
            epsilon: gap.epsilon.unwrap_or(1.0),
        },
        Mode::Degenerate => {
            if gap.epsilon.is_some() {
                return Err(CliError::Usage(
                    "--epsilon has no meaning for a degenerate reservoir".into(),
                ));
            }
            ProtocolMode::Degenerate
        }
    };

    let config = ProtocolConfig {
        x: gap.x,
        mode: protocol_mode,
        stop,
        include_initial,
        hbar: 1.0,
    };
    let ledger = run_erasure(&config)?;

    let output = match format {
        Format::Csv => render_csv(&config, &ledger),
        Format::Json => render_json(&config, &ledger, mode)?,
    };
    write_output(args.common.out.as_deref(), &output)
}

fn render_csv(config: &ProtocolConfig, ledger: &ErasureLedger) -> String {
    let zeeman = matches!(config.mode, ProtocolMode::Zeeman { .. });
    let mut csv = if zeeman {
        Csv::new(&[
            "cycle",
            "p1",
            "spin_cost",
            "energy_cost",
            "cum_spin",
            "cum_energy",
            "residual_entropy",
        ])
    } else {
        Csv::new(&["cycle", "p1", "spin_cost", "cum_spin", "residual_entropy"])
    };

    let initial_spin = if config.include_initial {
        config.hbar / 2.0
    } else {
        0.0
    };
    let initial_energy = match config.mode {
        ProtocolMode::Zeeman { epsilon } if config.include_initial => epsilon / 2.0,
        _ => 0.0,
    };
    let mut cum_spin = initial_spin;
    let mut cum_energy = initial_energy;
    for record in &ledger.records {
        cum_spin += record.spin_cost;
        let residual = binary_entropy(record.p1);
        if zeeman {
            let energy = record.energy_cost.expect("zeeman record has energy");
            cum_energy += energy;
            csv.row(&[
                record.m.to_string(),
                csv_f64(record.p1),
                csv_f64(record.spin_cost),
                csv_f64(energy),
                csv_f64(cum_spin),
                csv_f64(cum_energy),
                csv_f64(residual),
            ]);
        } else {
            csv.row(&[
                record.m.to_string(),
                csv_f64(record.p1),
                csv_f64(record.spin_cost),
                csv_f64(cum_spin),
                csv_f64(residual),
            ]);
        }
    }
    csv.finish()
}

fn render_json(
    config: &ProtocolConfig,
    ledger: &ErasureLedger,
    mode: Mode,
) -> Result<String, CliError> {
    let mut cfg = Json::object();
    cfg.push("command", Json::Str("erase".into()));
    cfg.push(
        "mode",
        Json::Str(match mode {
            Mode::Zeeman => "zeeman".into(),
            Mode::Degenerate => "degenerate".into(),
        }),
    );
    cfg.push("x", Json::Float(config.x));
    if let ProtocolMode::Zeeman { epsilon } = config.mode {
        cfg.push("epsilon", Json::Float(epsilon));
    }
    match config.stop {
        StopRule::MaxCycles(m) => cfg.push("cycles", Json::UInt(m as u64)),
        StopRule::ResidualEntropy(s) => cfg.push("target_entropy", Json::Float(s)),
    };
    cfg.push("include_initial", Json::Bool(config.include_initial));
    cfg.push("hbar", Json::Float(config.hbar));

    let records = ledger
        .records
        .iter()
        .map(|r| {
            let mut row = Json::object();
            row.push("cycle", Json::UInt(r.m as u64));
            row.push("p1", Json::Float(r.p1));
            row.push("spin_cost", Json::Float(r.spin_cost));
            if let Some(e) = r.energy_cost {
                row.push("energy_cost", Json::Float(e));
            }
            row
        })
        .collect();

    let mut totals = Json::object();
    totals.push("delta_jz", Json::Float(ledger.delta_jz));
    if let Some(primed) = ledger.delta_jz_prime {
        totals.push("delta_jz_prime", Json::Float(primed));
    }
    if let Some(delta_e) = ledger.delta_e {
        totals.push("delta_e", Json::Float(delta_e));
    }
    totals.push("residual_entropy", Json::Float(ledger.residual_entropy));
    totals.push("residual_p1", Json::Float(ledger.residual_p1));
    totals.push("series_tail_bound", Json::Float(ledger.series_tail_bound));

    let mut results = Json::object();
    results.push("records", Json::Array(records));
    results.push("totals", totals);
    document(cfg, results, None).render()
}
