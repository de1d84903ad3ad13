//! Thermal memory, spin-bath distributions and parameter conversions.
//!
//! Both reservoir flavours are governed by a single dimensionless gap ratio
//! `x`: the level splitting over `kT` for a Zeeman-coupled bath, or
//! `gamma * hbar` for an energy-degenerate bath. The population parameter
//! `alpha = e^(-x) / (1 + e^(-x))` is the probability that one reservoir
//! qubit sits in the logical-1 state, and the Hamming-weight law over `N`
//! qubits is binomial in `alpha`.

use crate::error::{Error, Result};
use std::f64::consts::LN_2;

/// `e^(-x) / (1 + e^(-x))`, evaluated on whichever side avoids overflow.
pub fn alpha_from_gap_ratio(x: f64) -> f64 {
    if x >= 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Two-level memory with gap `E` against a thermal reservoir at `kT`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalMemory {
    pub gap: f64,
    pub k_t: f64,
}

impl ThermalMemory {
    pub fn new(gap: f64, k_t: f64) -> Result<Self> {
        if !(k_t > 0.0) {
            return Err(Error::NonpositiveTemperature(k_t));
        }
        if gap < 0.0 || gap.is_nan() {
            return Err(Error::Domain(format!("gap must be >= 0, got {gap}")));
        }
        Ok(Self { gap, k_t })
    }

    pub fn equilibrium(&self) -> (f64, f64) {
        memory_equilibrium(self.gap, self.k_t).expect("validated at construction")
    }
}

/// Boltzmann occupations `(p0, p1)` of a two-level memory with splitting `e`
/// at temperature `k_t`. `e = +inf` is accepted as the frozen-ground-state
/// limit.
pub fn memory_equilibrium(e: f64, k_t: f64) -> Result<(f64, f64)> {
    if !(k_t > 0.0) {
        return Err(Error::NonpositiveTemperature(k_t));
    }
    if e < 0.0 || e.is_nan() {
        return Err(Error::Domain(format!("splitting must be >= 0, got {e}")));
    }
    if e.is_infinite() {
        return Ok((1.0, 0.0));
    }
    let p1 = alpha_from_gap_ratio(e / k_t);
    Ok((1.0 - p1, p1))
}

/// Quasi-static work to raise the memory splitting from 0 to `e_max` while
/// in thermal contact: the integral of the excited-state occupation.
///
/// The integrand is integrated by adaptive Simpson quadrature to `rel_tol`
/// and cross-checked against the closed antiderivative
/// `kT [ln 2 - ln(1 + e^(-E/kT))]`; disagreement beyond `rel_tol` is
/// reported as `ToleranceNotMet`. An infinite `e_max` takes the analytic
/// path and returns exactly `kT ln 2`.
pub fn landauer_work(k_t: f64, e_max: f64, rel_tol: f64) -> Result<f64> {
    if !(k_t > 0.0) {
        return Err(Error::NonpositiveTemperature(k_t));
    }
    if e_max < 0.0 || e_max.is_nan() {
        return Err(Error::Domain(format!("e_max must be >= 0, got {e_max}")));
    }
    if !(rel_tol > 0.0) {
        return Err(Error::Domain(format!(
            "rel_tol must be positive, got {rel_tol}"
        )));
    }
    if e_max == 0.0 {
        return Ok(0.0);
    }
    if e_max.is_infinite() {
        return Ok(k_t * LN_2);
    }
    let analytic = k_t * (LN_2 - (-e_max / k_t).exp().ln_1p());
    let occupation = |e: f64| alpha_from_gap_ratio(e / k_t);
    // The delta/15 acceptance estimate can undershoot the true error of the
    // extrapolated sum by a small factor; run the recursion well inside the
    // requested budget.
    let abs_tol = rel_tol * analytic.abs().max(f64::MIN_POSITIVE);
    let (value, err_est) = adaptive_simpson(&occupation, 0.0, e_max, abs_tol / 20.0, 48);
    let achieved = err_est.max((value - analytic).abs());
    if achieved > rel_tol * analytic.abs().max(1e-300) {
        return Err(Error::ToleranceNotMet {
            requested: rel_tol,
            achieved,
        });
    }
    Ok(value)
}

fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Recursive adaptive Simpson with Richardson extrapolation. Returns the
/// integral and an accumulated error estimate.
fn adaptive_simpson(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(a, fa, b, fb, fm);
    simpson_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> (f64, f64) {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, fa, m, fm, flm);
    let right = simpson(m, fm, b, fb, frm);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return (left + right + delta / 15.0, delta.abs() / 15.0);
    }
    let (lv, le) = simpson_step(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1);
    let (rv, re) = simpson_step(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
    (lv + rv, le + re)
}

/// How the bath's gap ratio is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BathMode {
    /// Spins Zeeman-shifted by `epsilon` in a bath at temperature `k_t`.
    Zeeman { epsilon: f64, k_t: f64 },
    /// Energy-degenerate spins constrained by the angular-momentum
    /// multiplier `gamma`.
    Degenerate { gamma: f64 },
}

/// Reservoir of `n_spins` two-level particles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinBathParams {
    pub n_spins: usize,
    pub mode: BathMode,
    pub hbar: f64,
}

impl SpinBathParams {
    pub fn new(n_spins: usize, mode: BathMode, hbar: f64) -> Result<Self> {
        if n_spins == 0 {
            return Err(Error::Domain("bath needs at least one spin".into()));
        }
        if !(hbar > 0.0) {
            return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
        }
        match mode {
            BathMode::Zeeman { epsilon, k_t } => {
                if !(k_t > 0.0) {
                    return Err(Error::NonpositiveTemperature(k_t));
                }
                if !(epsilon > 0.0) || !epsilon.is_finite() {
                    return Err(Error::Domain(format!(
                        "zeeman splitting must be positive and finite, got {epsilon}"
                    )));
                }
            }
            BathMode::Degenerate { gamma } => {
                if !gamma.is_finite() {
                    return Err(Error::Domain(format!("gamma must be finite, got {gamma}")));
                }
            }
        }
        Ok(Self {
            n_spins,
            mode,
            hbar,
        })
    }

    /// The dimensionless gap ratio `x`: `epsilon/kT` or `gamma*hbar`.
    pub fn gap_ratio(&self) -> f64 {
        match self.mode {
            BathMode::Zeeman { epsilon, k_t } => epsilon / k_t,
            BathMode::Degenerate { gamma } => gamma * self.hbar,
        }
    }

    /// Probability that a single reservoir spin is logical-1.
    pub fn alpha(&self) -> f64 {
        alpha_from_gap_ratio(self.gap_ratio())
    }
}

/// Hamming-weight probability law of an `n_spins` bath: `weights[n]` is the
/// multiplicity-summed probability `Q_n = C(N,n) P_n` and `per_microstate[n]`
/// the probability `P_n` of any single weight-`n` microstate.
#[derive(Debug, Clone, PartialEq)]
pub struct HammingDistribution {
    pub n_spins: usize,
    pub weights: Vec<f64>,
    pub per_microstate: Vec<f64>,
}

impl HammingDistribution {
    /// Builds the law for gap ratio `x`, switching to log-space arithmetic
    /// above 50 spins where binomial coefficients outgrow exact f64.
    pub fn from_gap_ratio(n_spins: usize, x: f64) -> Result<Self> {
        if n_spins == 0 {
            return Err(Error::Domain("bath needs at least one spin".into()));
        }
        if !x.is_finite() {
            return Err(Error::Domain(format!("gap ratio must be finite, got {x}")));
        }
        let weights = if n_spins <= 50 {
            bath_weights_direct(n_spins, x)
        } else {
            bath_weights_log_space(n_spins, x)
        };
        let per_microstate = (0..=n_spins)
            .map(|n| (ln_per_microstate(n_spins, n, x)).exp())
            .collect();
        Ok(Self {
            n_spins,
            weights,
            per_microstate,
        })
    }

    /// Mean Hamming weight, `alpha * N` for a binomial law.
    pub fn mean_weight(&self) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(n, q)| n as f64 * q)
            .sum()
    }

    /// Mean total `J_z`, `(alpha - 1/2) N hbar`.
    pub fn mean_jz(&self, hbar: f64) -> f64 {
        (self.mean_weight() - 0.5 * self.n_spins as f64) * hbar
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// `ln P_n = -n x - N ln(1 + e^(-x))`, arranged so either sign of `x` is
/// safe: `ln(1+e^(-x)) = max(0,-x) + ln(1+e^(-|x|))`.
fn ln_per_microstate(n_spins: usize, n: usize, x: f64) -> f64 {
    let ln_norm = (-x).max(0.0) + (-x.abs()).exp().ln_1p();
    -(n as f64) * x - n_spins as f64 * ln_norm
}

/// `Q_n` via exact binomial coefficients and the binomial pmf in `alpha`.
/// Intended for `N <= 50`, where `C(N,n)` is exact in f64.
pub fn bath_weights_direct(n_spins: usize, x: f64) -> Vec<f64> {
    let alpha = alpha_from_gap_ratio(x);
    (0..=n_spins)
        .map(|n| {
            binomial(n_spins, n) * alpha.powi(n as i32) * (1.0 - alpha).powi((n_spins - n) as i32)
        })
        .collect()
}

/// `Q_n` via `exp(ln C(N,n) + ln P_n)`; the overflow-safe path for large `N`.
pub fn bath_weights_log_space(n_spins: usize, x: f64) -> Vec<f64> {
    (0..=n_spins)
        .map(|n| (ln_binomial(n_spins, n) + ln_per_microstate(n_spins, n, x)).exp())
        .collect()
}

/// Exact binomial coefficient as f64; exact up to `n = 50`.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

/// `ln C(n, k)` from summed logarithms of factorials.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// Hamming-weight law of a bath described by `params`.
pub fn bath_distribution(params: &SpinBathParams) -> Result<HammingDistribution> {
    HammingDistribution::from_gap_ratio(params.n_spins, params.gap_ratio())
}

/// `gamma = ln((1-alpha)/alpha) / hbar`, the multiplier conjugate to `J_z`.
pub fn gamma_from_alpha(alpha: f64, hbar: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!(
            "alpha must be in (0,1), got {alpha}"
        )));
    }
    if !(hbar > 0.0) {
        return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
    }
    Ok(((1.0 - alpha) / alpha).ln() / hbar)
}

/// Inverse of [`gamma_from_alpha`].
pub fn alpha_from_gamma(gamma: f64, hbar: f64) -> Result<f64> {
    if !(hbar > 0.0) {
        return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
    }
    if !gamma.is_finite() {
        return Err(Error::Domain(format!("gamma must be finite, got {gamma}")));
    }
    Ok(alpha_from_gap_ratio(gamma * hbar))
}

/// Temperature that realises population `alpha` at splitting `epsilon`:
/// `kT = epsilon / ln((1-alpha)/alpha)`. Requires `alpha < 1/2`, else the
/// temperature would be infinite or negative.
pub fn kt_from_alpha(epsilon: f64, alpha: f64) -> Result<f64> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Domain(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::Domain(format!(
            "alpha must be in (0, 1/2), got {alpha}"
        )));
    }
    Ok(epsilon / ((1.0 - alpha) / alpha).ln())
}

/// Largest pointwise difference between the Zeeman-mode law at
/// `epsilon/kT` and the degenerate-mode law at `gamma*hbar` over the same
/// `n_spins` bath. Zero (to 1e-12) exactly when the gap ratios match; the
/// law depends on its parameters only through that single ratio.
pub fn distribution_equivalence(
    n_spins: usize,
    epsilon: f64,
    k_t: f64,
    gamma: f64,
    hbar: f64,
) -> Result<f64> {
    let zeeman = SpinBathParams::new(n_spins, BathMode::Zeeman { epsilon, k_t }, hbar)?;
    let degenerate = SpinBathParams::new(n_spins, BathMode::Degenerate { gamma }, hbar)?;
    let qa = bath_distribution(&zeeman)?;
    let qb = bath_distribution(&degenerate)?;
    Ok(qa
        .weights
        .iter()
        .zip(&qb.weights)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}
