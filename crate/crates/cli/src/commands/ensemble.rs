//! `ensemble`: seeded Monte Carlo statistics, JSON only.

use super::{CommonArgs, GapArgs};
use crate::config::{merge, CliError};
use crate::emit::{document, write_output, Format, Json};
use clap::Args;
use erasure_core::ensemble::{
    residual_field_ensemble, trajectory_ensemble, EnsembleStats, FieldModel, RngSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    /// Bernoulli spin-cost trajectories; the mean estimates the cost series.
    Trajectory,
    /// Residual-field energy totals under a stochastic Zeeman splitting.
    Residual,
}

#[derive(Debug, Args)]
pub struct EnsembleArgs {
    /// Which ensemble to run.
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,

    /// Number of independent trials.
    #[arg(long)]
    pub trials: Option<usize>,

    /// Master seed; each trial draws from the (seed, trial-index) stream.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Cycles per trial.
    #[arg(long)]
    pub cycles: Option<usize>,

    /// Residual-field law: none | uniform:W | gaussian:S | constant:V.
    #[arg(long)]
    pub field: Option<String>,

    #[command(flatten)]
    pub gap: GapArgs,

    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn run(args: &EnsembleArgs) -> Result<(), CliError> {
    let file = args.common.file()?;
    let kind = match (args.kind, file.string("kind")?.as_deref()) {
        (Some(k), _) => k,
        (None, Some("trajectory")) => Kind::Trajectory,
        (None, Some("residual")) => Kind::Residual,
        (None, Some(other)) => {
            return Err(CliError::Usage(format!(
                "config kind must be \"trajectory\" or \"residual\", got {other:?}"
            )))
        }
        (None, None) => {
            return Err(CliError::Usage(
                "ensemble requires --kind trajectory|residual".into(),
            ))
        }
    };
    if args.common.format_or(&file, Format::Json)? != Format::Json {
        return Err(CliError::Usage("ensemble statistics are JSON only".into()));
    }
    let gap = args.gap.resolve(&file)?;
    let trials = merge(args.trials, file.usize("trials")?).unwrap_or(10_000);
    let seed = merge(args.seed, file.u64("seed")?)
        .ok_or_else(|| CliError::Usage("stochastic runs require --seed".into()))?;
    let cycles = merge(args.cycles, file.usize("cycles")?).unwrap_or(60);
    let field_spec = merge(args.field.clone(), file.string("field")?);

    let spec = RngSpec::new(seed);
    let mut cfg = Json::object();
    cfg.push("command", Json::Str("ensemble".into()));
    cfg.push(
        "kind",
        Json::Str(match kind {
            Kind::Trajectory => "trajectory".into(),
            Kind::Residual => "residual".into(),
        }),
    );
    cfg.push("x", Json::Float(gap.x));
    cfg.push("trials", Json::UInt(trials as u64));
    cfg.push("cycles", Json::UInt(cycles as u64));

    let stats = match kind {
        Kind::Trajectory => {
            if field_spec.is_some() {
                return Err(CliError::Usage(
                    "--field applies to the residual ensemble only".into(),
                ));
            }
            trajectory_ensemble(&spec, gap.x, cycles, trials)?
        }
        Kind::Residual => {
            let field = parse_field(field_spec.as_deref().unwrap_or("none"))?;
            cfg.push(
                "field",
                Json::Str(field_spec.unwrap_or_else(|| "none".into())),
            );
            // gamma in natural units: x = gamma * hbar with hbar = 1.
            residual_field_ensemble(&spec, gap.x, 1.0, &field, trials, cycles)?
        }
    };

    let output = document(cfg, stats_json(&stats), Some(seed)).render()?;
    write_output(args.common.out.as_deref(), &output)
}

fn stats_json(stats: &EnsembleStats) -> Json {
    let mut results = Json::object();
    results.push("n_trials", Json::UInt(stats.n_trials as u64));
    results.push("mean", Json::Float(stats.mean));
    results.push("variance", Json::Float(stats.variance));
    results.push("std_error", Json::Float(stats.std_error));
    results.push("ci99_low", Json::Float(stats.ci99.0));
    results.push("ci99_high", Json::Float(stats.ci99.1));
    results
}

/// Parses `none`, `uniform:W`, `gaussian:S` or `constant:V`.
pub fn parse_field(spec: &str) -> Result<FieldModel, CliError> {
    let mut parts = spec.splitn(2, ':');
    let kind = parts.next().unwrap_or_default();
    let value = parts.next();
    let parse = |v: Option<&str>, what: &str| -> Result<f64, CliError> {
        v.ok_or_else(|| CliError::Usage(format!("field {kind} requires {what}, e.g. {kind}:0.1")))?
            .parse::<f64>()
            .map_err(|e| CliError::Usage(format!("bad field parameter in {spec:?}: {e}")))
    };
    let model = match kind {
        "none" => {
            if value.is_some() {
                return Err(CliError::Usage("field none takes no parameter".into()));
            }
            FieldModel::None
        }
        "uniform" => FieldModel::Uniform {
            half_width: parse(value, "a half-width")?,
        },
        "gaussian" => FieldModel::Gaussian {
            std_dev: parse(value, "a standard deviation")?,
        },
        "constant" => FieldModel::Constant {
            value: parse(value, "a value")?,
        },
        other => {
            return Err(CliError::Usage(format!(
                "unknown field kind {other:?}: expected none|uniform:W|gaussian:S|constant:V"
            )))
        }
    };
    model.validate()?;
    Ok(model)
}
