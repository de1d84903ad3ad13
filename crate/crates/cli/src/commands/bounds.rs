//! `bounds`: cost series, analytic sandwich, combined cost and the Hamming
//! bound over a sweep of gap ratios.

use super::CommonArgs;
use crate::config::{alpha_of, CliError};
use crate::emit::{csv_f64, document, write_output, Csv, Format, Json};
use clap::Args;
use erasure_core::bounds::hamming_cost_bound;
use erasure_core::protocol::{combined_scaled_cost, cost_bounds, cost_series};
use erasure_core::reservoir::gamma_from_alpha;
use std::f64::consts::LN_2;

const DEFAULT_TAIL_TOL: f64 = 1e-12;

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Gap ratios to sweep (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub x: Option<Vec<f64>>,

    /// Population parameters to sweep instead (comma separated, each in
    /// (0, 1/2)).
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,

    /// Tail tolerance for truncating the cost series.
    #[arg(long)]
    pub tol: Option<f64>,

    #[command(flatten)]
    pub common: CommonArgs,
}

struct Row {
    x: f64,
    alpha: f64,
    series: f64,
    lower: f64,
    upper: f64,
    primed_lower: f64,
    primed_upper: f64,
    combined: f64,
    hamming_bound: f64,
}

pub fn run(args: &BoundsArgs) -> Result<(), CliError> {
    let file = args.common.file()?;
    let cli_x = args.x.clone();
    let cli_alpha = args.alpha.clone();
    let (xs, alphas) = if cli_x.is_some() || cli_alpha.is_some() {
        (cli_x, cli_alpha)
    } else {
        (file.f64_list("x")?, file.f64_list("alpha")?)
    };
    let format = args.common.format_or(&file, Format::Csv)?;
    let tail_tol = crate::config::merge(args.tol, file.f64("tol")?).unwrap_or(DEFAULT_TAIL_TOL);

    let gap_ratios: Vec<f64> = match (xs, alphas) {
        (Some(xs), None) => xs,
        (None, Some(alphas)) => alphas
            .iter()
            .map(|&a| gamma_from_alpha(a, 1.0).map_err(CliError::from))
            .collect::<Result<_, _>>()?,
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "give the sweep as --x or --alpha, not both".into(),
            ))
        }
        (None, None) => return Err(CliError::Usage("bounds requires --x or --alpha".into())),
    };
    if gap_ratios.is_empty() {
        return Err(CliError::Usage("empty sweep".into()));
    }

    let mut rows = Vec::with_capacity(gap_ratios.len());
    for &x in &gap_ratios {
        let series = cost_series(x, tail_tol)?;
        let sandwich = cost_bounds(x)?;
        let alpha = alpha_of(x);
        let row = Row {
            x,
            alpha,
            series,
            lower: sandwich.unprimed.0,
            upper: sandwich.unprimed.1,
            primed_lower: sandwich.primed.0,
            primed_upper: sandwich.primed.1,
            combined: combined_scaled_cost(x)?,
            hamming_bound: hamming_cost_bound(alpha)?,
        };
        assert_row(&row)?;
        rows.push(row);
    }

    let output = match format {
        Format::Csv => {
            let mut csv = Csv::new(&[
                "x",
                "alpha",
                "series",
                "lower",
                "upper",
                "primed_lower",
                "primed_upper",
                "combined",
                "hamming_bound",
            ]);
            for r in &rows {
                csv.row(&[
                    csv_f64(r.x),
                    csv_f64(r.alpha),
                    csv_f64(r.series),
                    csv_f64(r.lower),
                    csv_f64(r.upper),
                    csv_f64(r.primed_lower),
                    csv_f64(r.primed_upper),
                    csv_f64(r.combined),
                    csv_f64(r.hamming_bound),
                ]);
            }
            csv.finish()
        }
        Format::Json => {
            let mut cfg = Json::object();
            cfg.push("command", Json::Str("bounds".into()));
            cfg.push(
                "x",
                Json::Array(gap_ratios.iter().map(|&x| Json::Float(x)).collect()),
            );
            cfg.push("tail_tol", Json::Float(tail_tol));
            let mut results = Json::object();
            results.push(
                "rows",
                Json::Array(
                    rows.iter()
                        .map(|r| {
                            let mut row = Json::object();
                            row.push("x", Json::Float(r.x));
                            row.push("alpha", Json::Float(r.alpha));
                            row.push("series", Json::Float(r.series));
                            row.push("lower", Json::Float(r.lower));
                            row.push("upper", Json::Float(r.upper));
                            row.push("primed_lower", Json::Float(r.primed_lower));
                            row.push("primed_upper", Json::Float(r.primed_upper));
                            row.push("combined", Json::Float(r.combined));
                            row.push("hamming_bound", Json::Float(r.hamming_bound));
                            row
                        })
                        .collect(),
                ),
            );
            document(cfg, results, None).render()?
        }
    };
    write_output(args.common.out.as_deref(), &output)
}

/// Re-asserts the module invariants on every row as it is serialized.
fn assert_row(row: &Row) -> Result<(), CliError> {
    if !(row.lower < row.series && row.series < row.upper) {
        return Err(CliError::Verification(format!(
            "series {} escaped its bounds ({}, {}) at x = {}",
            row.series, row.lower, row.upper, row.x
        )));
    }
    let primed = row.series + 0.5;
    if !(row.primed_lower < primed && primed < row.primed_upper) {
        return Err(CliError::Verification(format!(
            "primed series {primed} escaped its bounds ({}, {}) at x = {}",
            row.primed_lower, row.primed_upper, row.x
        )));
    }
    if !(row.combined > 2.0 * LN_2) {
        return Err(CliError::Verification(format!(
            "combined cost {} at or below 2 ln 2 at x = {}",
            row.combined, row.x
        )));
    }
    Ok(())
}
