//! `archetypal`: quasi-static one-bit erasure against a thermal reservoir.

use super::CommonArgs;
use crate::config::{merge, CliError};
use crate::emit::{csv_f64, document, write_output, Csv, Format, Json};
use clap::Args;
use erasure_core::reservoir::{landauer_work, memory_equilibrium};
use std::f64::consts::LN_2;

/// Rows in the work table (plus the E = 0 row).
const GRID_STEPS: usize = 50;

#[derive(Debug, Args)]
pub struct ArchetypalArgs {
    /// Reservoir temperature in energy units.
    #[arg(long = "kT")]
    pub k_t: Option<f64>,

    /// Final level splitting; the work integral runs from 0 to here.
    #[arg(long = "e-max")]
    pub e_max: Option<f64>,

    /// Relative tolerance of the adaptive quadrature.
    #[arg(long)]
    pub tol: Option<f64>,

    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn run(args: &ArchetypalArgs) -> Result<(), CliError> {
    let file = args.common.file()?;
    let k_t = merge(args.k_t, file.f64("kT")?)
        .ok_or_else(|| CliError::Usage("archetypal requires --kT".into()))?;
    let e_max = merge(args.e_max, file.f64("e-max")?)
        .ok_or_else(|| CliError::Usage("archetypal requires --e-max".into()))?;
    let tol = merge(args.tol, file.f64("tol")?).unwrap_or(1e-9);
    let format = args.common.format_or(&file, Format::Csv)?;

    let grid: Vec<f64> = if e_max == 0.0 {
        vec![0.0]
    } else {
        (0..=GRID_STEPS)
            .map(|i| e_max * i as f64 / GRID_STEPS as f64)
            .collect()
    };
    let mut rows = Vec::with_capacity(grid.len());
    for &e in &grid {
        let (_, p1) = memory_equilibrium(e, k_t)?;
        let w = landauer_work(k_t, e, tol)?;
        rows.push((e, p1, w));
    }
    let work = rows.last().expect("grid nonempty").2;
    let landauer = k_t * LN_2;

    let output = match format {
        Format::Csv => {
            let mut csv = Csv::new(&["E", "p1", "cumulative_W"]);
            for (e, p1, w) in &rows {
                csv.row(&[csv_f64(*e), csv_f64(*p1), csv_f64(*w)]);
            }
            csv.finish()
        }
        Format::Json => {
            let mut config = Json::object();
            config.push("command", Json::Str("archetypal".into()));
            config.push("kT", Json::Float(k_t));
            config.push("E_max", Json::Float(e_max));
            config.push("tol", Json::Float(tol));

            let mut results = Json::object();
            results.push(
                "rows",
                Json::Array(
                    rows.iter()
                        .map(|(e, p1, w)| {
                            let mut row = Json::object();
                            row.push("E", Json::Float(*e));
                            row.push("p1", Json::Float(*p1));
                            row.push("cumulative_W", Json::Float(*w));
                            row
                        })
                        .collect(),
                ),
            );
            let mut summary = Json::object();
            summary.push("W", Json::Float(work));
            summary.push("kT_ln2", Json::Float(landauer));
            summary.push("shortfall", Json::Float(landauer - work));
            results.push("summary", summary);

            document(config, results, None).render()?
        }
    };
    write_output(args.common.out.as_deref(), &output)
}
