//! Seeded Monte Carlo: per-trial erasure trajectories and the
//! residual-field energy ensemble.
//!
//! Trial `i` draws from a ChaCha stream keyed by `(master_seed, i)`, so a
//! trial's trajectory is a pure function of the seed and its index: runs
//! agree bit for bit whatever the execution order or thread count. The
//! reduction to summary statistics walks trials in index order.

use crate::error::{Error, Result};
use crate::reservoir::alpha_from_gap_ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

/// 99.5th percentile of the standard normal; two-sided 99% interval.
const Z_99: f64 = 2.575_829_303_548_900_4;

/// Counter-based per-trial stream derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSpec {
    pub master_seed: u64,
}

impl RngSpec {
    pub fn new(master_seed: u64) -> Self {
        Self { master_seed }
    }

    /// Independent stream for one trial; the same `(seed, trial)` pair
    /// always yields the same draws.
    pub fn stream(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(trial);
        rng
    }
}

/// Distribution of the residual Zeeman splitting at an ancilla site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldModel {
    /// No field at all: the energy channel is identically zero.
    None,
    /// Zero-mean uniform on `(-half_width, +half_width)`.
    Uniform { half_width: f64 },
    /// Zero-mean normal with standard deviation `std_dev`.
    Gaussian { std_dev: f64 },
    /// The deterministic control case.
    Constant { value: f64 },
}

impl FieldModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FieldModel::Uniform { half_width } if !(half_width >= 0.0) => Err(Error::Domain(
                format!("uniform half-width must be >= 0, got {half_width}"),
            )),
            FieldModel::Gaussian { std_dev } if !(std_dev >= 0.0) => Err(Error::Domain(format!(
                "gaussian std dev must be >= 0, got {std_dev}"
            ))),
            FieldModel::Constant { value } if !value.is_finite() => Err(Error::Domain(format!(
                "constant field must be finite, got {value}"
            ))),
            _ => Ok(()),
        }
    }

    /// One site draw.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            FieldModel::None => 0.0,
            FieldModel::Uniform { half_width } => half_width * (2.0 * rng.gen::<f64>() - 1.0),
            FieldModel::Gaussian { std_dev } => {
                std_dev * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng)
            }
            FieldModel::Constant { value } => value,
        }
    }
}

/// Order-insensitive summary of an ensemble. The 99% interval uses the
/// normal approximation; 30 or more trials recommended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleStats {
    pub n_trials: usize,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub std_error: f64,
    /// 99% normal-approximation interval around the mean.
    pub ci99: (f64, f64),
}

impl EnsembleStats {
    /// Two-pass reduction in trial-index order. Bit-identical samples get
    /// the exact answer (their value, zero variance) rather than summation
    /// rounding noise.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return Err(Error::Domain(format!("need at least 2 trials, got {n}")));
        }
        if values.iter().all(|v| v.to_bits() == values[0].to_bits()) {
            let mean = values[0];
            return Ok(Self {
                n_trials: n,
                mean,
                variance: 0.0,
                std_error: 0.0,
                ci99: (mean, mean),
            });
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let variance = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
        let std_error = (variance / n as f64).sqrt();
        Ok(Self {
            n_trials: n,
            mean,
            variance,
            std_error,
            ci99: (mean - Z_99 * std_error, mean + Z_99 * std_error),
        })
    }
}

/// One stochastic erasure trajectory: at cycle `n` the CNOT pays one unit
/// of `hbar` with probability `e^(-n x)/(1+e^(-n x))`. Returns the trial's
/// total spin cost in `hbar` units; its expectation is the cost series.
pub fn sample_erasure_trajectory(rng: &mut ChaCha8Rng, x: f64, max_cycles: usize) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "gap ratio must be positive and finite, got {x}"
        )));
    }
    let mut total = 0.0;
    for n in 1..=max_cycles {
        if rng.gen::<f64>() < alpha_from_gap_ratio(n as f64 * x) {
            total += 1.0;
        }
    }
    Ok(total)
}

/// Ensemble of trajectory totals; the mean estimates `cost_series(x)`.
pub fn trajectory_ensemble(
    spec: &RngSpec,
    x: f64,
    max_cycles: usize,
    trials: usize,
) -> Result<EnsembleStats> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "gap ratio must be positive and finite, got {x}"
        )));
    }
    let values = run_trials(spec, trials, move |rng| {
        sample_erasure_trajectory(rng, x, max_cycles).expect("x validated")
    })?;
    EnsembleStats::from_values(&values)
}

/// Energy cost of one trial under a residual field: the deterministic
/// per-cycle occupation weights times fresh i.i.d. field draws, summed over
/// sites `n = 1..=max_cycles`.
pub fn residual_field_trial(
    rng: &mut ChaCha8Rng,
    gamma: f64,
    hbar: f64,
    field: &FieldModel,
    max_cycles: usize,
) -> f64 {
    let mut delta_e = 0.0;
    for n in 1..=max_cycles {
        let weight = alpha_from_gap_ratio(n as f64 * gamma * hbar);
        delta_e += weight * field.sample(rng);
    }
    delta_e
}

/// Residual-field energy ensemble. A zero-mean field gives a zero-mean
/// `Delta E` whatever its distribution family; a constant field reproduces
/// the scaled cost series with zero variance.
pub fn residual_field_ensemble(
    spec: &RngSpec,
    gamma: f64,
    hbar: f64,
    field: &FieldModel,
    trials: usize,
    max_cycles: usize,
) -> Result<EnsembleStats> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    if !(hbar > 0.0) {
        return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
    }
    field.validate()?;
    let field = *field;
    let values = run_trials(spec, trials, move |rng| {
        residual_field_trial(rng, gamma, hbar, &field, max_cycles)
    })?;
    EnsembleStats::from_values(&values)
}

/// Evaluates independent trials in parallel, collected in index order so
/// the result is identical at any thread count.
fn run_trials<F>(spec: &RngSpec, trials: usize, trial_fn: F) -> Result<Vec<f64>>
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    if trials < 2 {
        return Err(Error::Domain(format!(
            "need at least 2 trials, got {trials}"
        )));
    }
    Ok((0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = spec.stream(trial);
            trial_fn(&mut rng)
        })
        .collect())
}
