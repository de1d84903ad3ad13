//! General erasure bounds for a reservoir of qubits at population `alpha`.
//!
//! Absorbing one bit raises the reservoir entropy by at least `ln 2`; to
//! first order that entropy change is `(dS/dn) * Delta_n`, which turns the
//! entropy bound into a Hamming-cost bound and, through the eigenvalue of
//! whichever physical variable separates the logic states, into a cost
//! bound per variable.

use crate::error::{Error, Result};
use std::f64::consts::LN_2;

/// A physical variable whose logical-0 eigenvalue is 0 and logical-1
/// eigenvalue is `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableSpec {
    pub label: String,
    pub v: f64,
}

impl VariableSpec {
    pub fn new(label: impl Into<String>, v: f64) -> Result<Self> {
        if v == 0.0 || !v.is_finite() {
            return Err(Error::Domain(format!(
                "logical-1 eigenvalue must be nonzero and finite, got {v}"
            )));
        }
        Ok(Self {
            label: label.into(),
            v,
        })
    }
}

/// Reservoir entropy `S = -N[(1-alpha) ln(1-alpha) + alpha ln alpha]` in
/// nats, with `0 ln 0 = 0`.
pub fn reservoir_entropy(n_qubits: usize, alpha: f64) -> Result<f64> {
    if n_qubits == 0 {
        return Err(Error::Domain("reservoir needs at least one qubit".into()));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Domain(format!(
            "alpha must be in [0,1], got {alpha}"
        )));
    }
    let mut s = 0.0;
    if alpha > 0.0 {
        s -= alpha * alpha.ln();
    }
    if alpha < 1.0 {
        s -= (1.0 - alpha) * (1.0 - alpha).ln();
    }
    Ok(n_qubits as f64 * s)
}

fn log_odds(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::Domain(format!(
            "alpha must be in (0, 1/2) for a bath that absorbs entropy, got {alpha}"
        )));
    }
    Ok(((1.0 - alpha) / alpha).ln())
}

/// Lower bound on the Hamming cost of erasing one bit:
/// `Delta_n > ln 2 / ln((1-alpha)/alpha)`.
pub fn hamming_cost_bound(alpha: f64) -> Result<f64> {
    Ok(LN_2 / log_odds(alpha)?)
}

/// Lower bound on the cost in variable `var`:
/// `Delta<V_k> > v_k ln 2 / ln((1-alpha)/alpha)`.
pub fn variable_cost_bound(alpha: f64, var: &VariableSpec) -> Result<f64> {
    Ok(var.v * LN_2 / log_odds(alpha)?)
}

/// Weighted total `ln((1-alpha)/alpha) * sum_k Delta_V_k / v_k` over `M`
/// variables, and whether it meets the `M ln 2` floor.
pub fn multi_cost_total(alpha: f64, costs: &[(f64, f64)]) -> Result<(f64, bool)> {
    if costs.is_empty() {
        return Err(Error::Domain("at least one variable is required".into()));
    }
    let odds = log_odds(alpha)?;
    let mut weighted = 0.0;
    for &(delta_v, v) in costs {
        if v == 0.0 || !v.is_finite() {
            return Err(Error::Domain(format!(
                "eigenvalue must be nonzero, got {v}"
            )));
        }
        weighted += delta_v / v;
    }
    let total = odds * weighted;
    Ok((total, total >= costs.len() as f64 * LN_2))
}

/// `|hbar * hamming_cost_bound(alpha) - ln2 / gamma|` with `gamma` from the
/// population: algebraically zero, so the protocol's optimal rate and the
/// Hamming bound are the same statement.
pub fn optimality_identity(alpha: f64, hbar: f64) -> Result<f64> {
    let gamma = crate::reservoir::gamma_from_alpha(alpha, hbar)?;
    let hamming = hamming_cost_bound(alpha)?;
    Ok((hbar * hamming - LN_2 / gamma).abs())
}
