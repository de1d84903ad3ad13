//! Maximum-entropy states over finite bases with expectation constraints.
//!
//! Given commuting observables (a shared eigenbasis, so each observable is
//! just a vector of eigenvalues) and target expectation values, the
//! least-biased state is the Gibbs form
//!
//! ```text
//! p_i = exp(-(lambda_0 + sum_k lambda_k * v_k[i]))
//! ```
//!
//! The multipliers are found by minimizing the convex dual
//! `psi(lambda) = ln Z(lambda) + lambda . targets` with a damped Newton
//! iteration; its gradient is `targets - <v>` and its Hessian is the
//! covariance matrix of the observables, so the iteration is globally
//! convergent once damped.

use crate::error::{Error, Result};

/// Maximum Newton iterations before reporting `NoConvergence`.
const MAX_ITER: usize = 200;

/// Once `sum_k |lambda_k| * spread_k` exceeds this, some basis state has
/// probability below the smallest positive f64: the target is numerically
/// on the hull boundary.
const MULTIPLIER_LIMIT: f64 = 1500.0;

/// A set of `K >= 1` commuting observables over a `dim`-state basis, stored
/// as eigenvalue vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableTable {
    dim: usize,
    observables: Vec<Vec<f64>>,
    labels: Vec<String>,
}

impl ObservableTable {
    /// Validates lengths, finiteness and label uniqueness.
    pub fn new(dim: usize, observables: Vec<Vec<f64>>, labels: Vec<String>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("dim must be >= 1".into()));
        }
        if observables.is_empty() {
            return Err(Error::Domain("at least one observable is required".into()));
        }
        if labels.len() != observables.len() {
            return Err(Error::Domain(format!(
                "{} observables but {} labels",
                observables.len(),
                labels.len()
            )));
        }
        for (k, v) in observables.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::Domain(format!(
                    "observable {k} has length {}, expected {dim}",
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Domain(format!(
                    "observable {k} has non-finite entries"
                )));
            }
        }
        for i in 0..labels.len() {
            for j in i + 1..labels.len() {
                if labels[i] == labels[j] {
                    return Err(Error::Domain(format!("duplicate label {:?}", labels[i])));
                }
            }
        }
        Ok(Self {
            dim,
            observables,
            labels,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of observables `K`.
    pub fn len(&self) -> usize {
        self.observables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observables.is_empty()
    }

    pub fn eigenvalues(&self, k: usize) -> &[f64] {
        &self.observables[k]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Expectation values of every observable under `probs`.
    pub fn expectations(&self, probs: &[f64]) -> Vec<f64> {
        self.observables
            .iter()
            .map(|v| v.iter().zip(probs).map(|(x, p)| x * p).sum())
            .collect()
    }
}

/// A Gibbs-form state `p_i = exp(-(lambda_0 + sum_k lambda_k v_k[i]))`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxEntState {
    probs: Vec<f64>,
    multipliers: Vec<f64>,
    log_normalizer: f64,
}

impl MaxEntState {
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn multipliers(&self) -> &[f64] {
        &self.multipliers
    }

    /// `lambda_0 = ln Z`, the normalizing multiplier.
    pub fn log_normalizer(&self) -> f64 {
        self.log_normalizer
    }

    pub fn expectations(&self, table: &ObservableTable) -> Vec<f64> {
        table.expectations(&self.probs)
    }

    /// Checks the Gibbs-form invariants: normalization to 1e-12, the
    /// exponential form to 1e-10 relative, and the entropy identity
    /// `S = lambda_0 + sum_k lambda_k <V_k>` to 1e-10.
    pub fn validate(&self, table: &ObservableTable) -> Result<()> {
        let sum: f64 = self.probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 || self.probs.iter().any(|&p| p < 0.0) {
            return Err(Error::Domain(format!(
                "probabilities not normalized: sum {sum}"
            )));
        }
        for (i, &p) in self.probs.iter().enumerate() {
            let mut exponent = self.log_normalizer;
            for (lambda, v) in self.multipliers.iter().zip(&table.observables) {
                exponent += lambda * v[i];
            }
            let gibbs = (-exponent).exp();
            if (p - gibbs).abs() > 1e-10 * gibbs.max(1e-300) {
                return Err(Error::Domain(format!(
                    "state {i} deviates from Gibbs form: p = {p}, expected {gibbs}"
                )));
            }
        }
        let s = state_entropy(self);
        let identity: f64 = self.log_normalizer
            + self
                .multipliers
                .iter()
                .zip(self.expectations(table))
                .map(|(l, m)| l * m)
                .sum::<f64>();
        if (s - identity).abs() > 1e-10 {
            return Err(Error::Domain(format!(
                "entropy identity violated: S = {s}, lambda_0 + lambda.<V> = {identity}"
            )));
        }
        Ok(())
    }
}

/// Shannon entropy `-sum p ln p` in nats, with the `0 ln 0 = 0` convention.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum()
}

/// Entropy of a solved state in nats.
pub fn state_entropy(state: &MaxEntState) -> f64 {
    shannon_entropy(&state.probs)
}

/// Entropy change `sum_k lambda_k (delta<V_k> - <delta V_k>)` for small,
/// independent changes of expectation values and of the operators
/// themselves.
pub fn entropy_differential(
    multipliers: &[f64],
    delta_expectations: &[f64],
    delta_operator_means: &[f64],
) -> f64 {
    multipliers
        .iter()
        .zip(delta_expectations)
        .zip(delta_operator_means)
        .map(|((l, de), do_)| l * (de - do_))
        .sum()
}

/// Residual of the one-bit erasure balance: `sum_k lambda_k delta<V_k> - ln 2`.
/// Zero means the listed expectation changes exactly pay for erasing one bit.
pub fn erasure_balance(multipliers: &[f64], delta_expectations: &[f64]) -> f64 {
    let paid: f64 = multipliers
        .iter()
        .zip(delta_expectations)
        .map(|(l, de)| l * de)
        .sum();
    paid - std::f64::consts::LN_2
}

/// Gibbs probabilities and `ln Z` for given multipliers, computed with a
/// log-sum-exp shift so large multipliers cannot overflow.
fn gibbs_probs(table: &ObservableTable, multipliers: &[f64]) -> (Vec<f64>, f64) {
    let mut exponents = vec![0.0; table.dim];
    for (lambda, v) in multipliers.iter().zip(&table.observables) {
        for (e, x) in exponents.iter_mut().zip(v) {
            *e -= lambda * x;
        }
    }
    let m = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = exponents.iter().map(|e| (e - m).exp()).collect();
    let z_shifted: f64 = weights.iter().sum();
    let probs = weights.iter().map(|w| w / z_shifted).collect();
    (probs, m + z_shifted.ln())
}

/// Dual objective `psi(lambda) = ln Z + lambda . targets`.
fn dual_value(table: &ObservableTable, multipliers: &[f64], targets: &[f64]) -> f64 {
    let (_, ln_z) = gibbs_probs(table, multipliers);
    ln_z + multipliers
        .iter()
        .zip(targets)
        .map(|(l, t)| l * t)
        .sum::<f64>()
}

/// Cyclic Jacobi eigendecomposition of a small symmetric matrix. Returns
/// eigenvalues and the matrix whose columns are the eigenvectors.
fn sym_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut vectors = vec![vec![0.0; n]; n];
    for (i, row) in vectors.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let scale = a
        .iter()
        .flatten()
        .fold(0.0f64, |m, &x| m.max(x.abs()))
        .max(1e-300);
    for _sweep in 0..64 {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum();
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() <= 1e-18 * scale {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                let (head, tail) = a.split_at_mut(q);
                for (apk, aqk) in head[p].iter_mut().zip(tail[0].iter_mut()) {
                    let (x, y) = (*apk, *aqk);
                    *apk = c * x - s * y;
                    *aqk = s * x + c * y;
                }
                for row in vectors.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), vectors)
}

/// Newton direction through the spectral pseudo-inverse of the (possibly
/// rank-deficient) covariance Hessian. Returns the direction together with
/// the size of the gradient component outside the Hessian's range: for a
/// full-support Gibbs state that range is exactly the space of reachable
/// moment changes, so a persistent outside component means the targets are
/// not jointly reachable.
fn pseudo_newton_direction(hess: &[Vec<f64>], grad: &[f64]) -> (Vec<f64>, f64) {
    let n = grad.len();
    let (eigvals, vectors) = sym_eigen(hess.to_vec());
    let lam_max = eigvals.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
    let cutoff = 1e-12 * lam_max.max(1e-300);
    let mut direction = vec![0.0; n];
    let mut reachable = vec![0.0; n];
    for j in 0..n {
        if eigvals[j] <= cutoff {
            continue;
        }
        let proj: f64 = (0..n).map(|i| vectors[i][j] * grad[i]).sum();
        for i in 0..n {
            direction[i] += proj / eigvals[j] * vectors[i][j];
            reachable[i] += proj * vectors[i][j];
        }
    }
    let unreachable = grad
        .iter()
        .zip(&reachable)
        .fold(0.0f64, |m, (g, r)| m.max((g - r).abs()));
    (direction, unreachable)
}

/// Per-observable eigenvalue spreads, used for the boundary pre-check and
/// the multiplier watchdog.
fn spreads(table: &ObservableTable) -> Vec<(f64, f64)> {
    table
        .observables
        .iter()
        .map(|v| {
            let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            (lo, hi)
        })
        .collect()
}

/// Finds the multipliers whose Gibbs state reproduces `targets`.
///
/// Each target must lie strictly inside the convex hull of the eigenvalue
/// tuples; boundary targets would need infinite multipliers and are
/// rejected as `InfeasibleTarget`. The returned state satisfies
/// `|<V_k> - targets[k]| <= tol` for every `k`.
pub fn solve_multipliers(
    table: &ObservableTable,
    targets: &[f64],
    tol: f64,
) -> Result<MaxEntState> {
    if targets.len() != table.len() {
        return Err(Error::Domain(format!(
            "{} targets for {} observables",
            targets.len(),
            table.len()
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    if targets.iter().any(|t| !t.is_finite()) {
        return Err(Error::Domain("targets must be finite".into()));
    }

    // Coordinate-wise necessary condition. A constant observable is feasible
    // only at its constant value; otherwise the target must be strictly
    // interior to [min, max].
    let ranges = spreads(table);
    for (k, (&t, &(lo, hi))) in targets.iter().zip(&ranges).enumerate() {
        let scale = lo.abs().max(hi.abs()).max(1.0);
        if lo == hi {
            if (t - lo).abs() > 1e-12 * scale {
                return Err(Error::InfeasibleTarget(format!(
                    "observable {k} is constant at {lo}, target {t} unreachable"
                )));
            }
        } else if t <= lo || t >= hi {
            return Err(Error::InfeasibleTarget(format!(
                "target {t} for observable {k} not strictly inside ({lo}, {hi})"
            )));
        }
    }

    let k_dim = table.len();
    let mut multipliers = vec![0.0; k_dim];
    let mut residual = f64::INFINITY;

    for _ in 0..MAX_ITER {
        let (probs, _) = gibbs_probs(table, &multipliers);
        let moments = table.expectations(&probs);
        let grad: Vec<f64> = targets.iter().zip(&moments).map(|(t, m)| t - m).collect();
        residual = grad.iter().fold(0.0f64, |acc, g| acc.max(g.abs()));
        if residual <= tol {
            let (probs, ln_z) = gibbs_probs(table, &multipliers);
            return Ok(MaxEntState {
                probs,
                multipliers,
                log_normalizer: ln_z,
            });
        }

        // Hessian of the dual: covariance matrix of the observables.
        let mut hess = vec![vec![0.0; k_dim]; k_dim];
        for j in 0..k_dim {
            for k in j..k_dim {
                let mut cov = 0.0;
                for ((p, vj), vk) in probs
                    .iter()
                    .zip(&table.observables[j])
                    .zip(&table.observables[k])
                {
                    cov += p * vj * vk;
                }
                cov -= moments[j] * moments[k];
                hess[j][k] = cov;
                hess[k][j] = cov;
            }
        }

        let (direction, unreachable) = pseudo_newton_direction(&hess, &grad);
        let spread_scale = ranges
            .iter()
            .fold(0.0f64, |m, &(lo, hi)| m.max(hi - lo))
            .max(1e-300);
        // A gradient component outside the covariance range cannot be
        // removed by any multiplier motion. Flag it once it dominates.
        if unreachable > (1e-9 * spread_scale).max(10.0 * tol) && unreachable >= 0.5 * residual {
            return Err(Error::InfeasibleTarget(format!(
                "gradient component {unreachable:e} lies outside the reachable \
                 moment space: targets not jointly reachable"
            )));
        }

        // Backtracking line search on the dual (Armijo, c = 1e-4), with a
        // rounding-level slack: near the minimum the true decrease per step
        // sinks below f64 resolution of psi, and the gradient criterion
        // above is what actually decides convergence.
        let psi = dual_value(table, &multipliers, targets);
        let slack = 1e-14 * (1.0 + psi.abs());
        let slope: f64 = grad.iter().zip(&direction).map(|(g, d)| g * d).sum();
        let mut step = 1.0;
        loop {
            let trial: Vec<f64> = multipliers
                .iter()
                .zip(&direction)
                .map(|(l, d)| l - step * d)
                .collect();
            if dual_value(table, &trial, targets) <= psi - 1e-4 * step * slope + slack {
                multipliers = trial;
                break;
            }
            step *= 0.5;
            if step < 1e-14 {
                return Err(Error::InfeasibleTarget(format!(
                    "dual minimum reached with residual {residual:e}: \
                     targets not jointly reachable"
                )));
            }
        }

        let stretch: f64 = multipliers
            .iter()
            .zip(&ranges)
            .map(|(l, (lo, hi))| l.abs() * (hi - lo))
            .sum();
        if stretch > MULTIPLIER_LIMIT {
            return Err(Error::InfeasibleTarget(format!(
                "multipliers diverging (|lambda|.spread = {stretch:.1}): \
                 target on or outside the feasible hull"
            )));
        }
    }

    Err(Error::NoConvergence {
        residual,
        iterations: MAX_ITER,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn two_level(v: Vec<f64>) -> ObservableTable {
        ObservableTable::new(2, vec![v], vec!["v1".into()]).unwrap()
    }

    #[test]
    fn uniform_target_gives_zero_multiplier() {
        let table = two_level(vec![0.0, 1.0]);
        let state = solve_multipliers(&table, &[0.5], 1e-12).unwrap();
        assert!((state.probs()[0] - 0.5).abs() < 1e-12);
        assert!((state.probs()[1] - 0.5).abs() < 1e-12);
        assert!(state.multipliers()[0].abs() < 1e-10);
    }

    #[test]
    fn one_third_target_gives_ln2_multiplier() {
        // Closed form: p1/p0 = e^(-lambda), so p1 = 1/3 means lambda = ln 2.
        let table = two_level(vec![0.0, 1.0]);
        let state = solve_multipliers(&table, &[1.0 / 3.0], 1e-12).unwrap();
        assert!((state.multipliers()[0] - LN_2).abs() < 1e-10);
        assert!((state.probs()[0] - 2.0 / 3.0).abs() < 1e-11);
        assert!((state.probs()[1] - 1.0 / 3.0).abs() < 1e-11);
        state.validate(&table).unwrap();
    }

    #[test]
    fn spin_half_target_recovers_gamma() {
        // J_z eigenvalues -hbar/2, +hbar/2; target (alpha - 1/2) hbar with
        // alpha = 1/3 must give lambda = ln 2 / hbar.
        for hbar in [1.0, 2.5] {
            let table = two_level(vec![-hbar / 2.0, hbar / 2.0]);
            let alpha = 1.0 / 3.0;
            let state = solve_multipliers(&table, &[(alpha - 0.5) * hbar], 1e-13).unwrap();
            assert!((state.multipliers()[0] - LN_2 / hbar).abs() < 1e-10);
        }
    }

    #[test]
    fn entropy_examples() {
        let table = two_level(vec![0.0, 1.0]);
        let uniform = solve_multipliers(&table, &[0.5], 1e-13).unwrap();
        assert!((state_entropy(&uniform) - LN_2).abs() < 1e-12);

        assert_eq!(shannon_entropy(&[1.0, 0.0]), 0.0);

        // ln 3 - (2/3) ln 2, evaluated directly from the formula.
        let third = solve_multipliers(&table, &[1.0 / 3.0], 1e-13).unwrap();
        let expected = 3f64.ln() - (2.0 / 3.0) * LN_2;
        assert!((state_entropy(&third) - expected).abs() < 1e-10);
        assert!((expected - 0.636_514_168_294_813).abs() < 1e-12);
    }

    #[test]
    fn entropy_differential_examples() {
        // Equal operator and expectation changes cancel.
        assert_eq!(
            entropy_differential(&[2.0, -1.0], &[0.3, 0.7], &[0.3, 0.7]),
            0.0
        );
        // Thermal single-variable case: lambda = 1/kT, delta<H> = ln 2.
        let ds = entropy_differential(&[1.0], &[LN_2], &[0.0]);
        assert!((ds - LN_2).abs() < 1e-15);
        // Linearity over two variables.
        let ds2 = entropy_differential(&[1.0, 1.0], &[LN_2 / 2.0, LN_2 / 2.0], &[0.0, 0.0]);
        assert!((ds2 - LN_2).abs() < 1e-15);
    }

    #[test]
    fn erasure_balance_examples() {
        // Single variable paying exactly ln2 / lambda.
        let lambda = 3.7;
        assert!(erasure_balance(&[lambda], &[LN_2 / lambda]).abs() < 1e-15);
        // No payment at all leaves the full bit unpaid.
        assert!((erasure_balance(&[1.0, 2.0], &[0.0, 0.0]) + LN_2).abs() < 1e-15);
        // Two variables each paying the full rate: one bit of overpayment.
        assert!((erasure_balance(&[1.0, 1.0], &[LN_2, LN_2]) - LN_2).abs() < 1e-15);
    }

    #[test]
    fn boundary_and_outside_targets_rejected() {
        let table = two_level(vec![0.0, 1.0]);
        assert!(matches!(
            solve_multipliers(&table, &[0.0], 1e-10),
            Err(Error::InfeasibleTarget(_))
        ));
        assert!(matches!(
            solve_multipliers(&table, &[1.0], 1e-10),
            Err(Error::InfeasibleTarget(_))
        ));
        assert!(matches!(
            solve_multipliers(&table, &[1.5], 1e-10),
            Err(Error::InfeasibleTarget(_))
        ));
    }

    #[test]
    fn jointly_unreachable_targets_rejected() {
        // Two copies of the same observable cannot hold different means.
        let table = ObservableTable::new(
            2,
            vec![vec![0.0, 1.0], vec![0.0, 1.0]],
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        assert!(matches!(
            solve_multipliers(&table, &[0.3, 0.6], 1e-10),
            Err(Error::InfeasibleTarget(_))
        ));
    }

    #[test]
    fn constant_observable_feasible_at_its_value() {
        let table = ObservableTable::new(
            3,
            vec![vec![2.0, 2.0, 2.0], vec![0.0, 1.0, 2.0]],
            vec!["const".into(), "ramp".into()],
        )
        .unwrap();
        let state = solve_multipliers(&table, &[2.0, 0.8], 1e-11).unwrap();
        let moments = state.expectations(&table);
        assert!((moments[0] - 2.0).abs() < 1e-10);
        assert!((moments[1] - 0.8).abs() < 1e-10);
    }

    #[test]
    fn table_validation() {
        assert!(ObservableTable::new(0, vec![vec![]], vec!["a".into()]).is_err());
        assert!(ObservableTable::new(2, vec![], vec![]).is_err());
        assert!(ObservableTable::new(2, vec![vec![0.0]], vec!["a".into()]).is_err());
        assert!(ObservableTable::new(2, vec![vec![0.0, f64::NAN]], vec!["a".into()]).is_err());
        assert!(ObservableTable::new(
            2,
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            vec!["a".into(), "a".into()]
        )
        .is_err());
    }
}
