//! Exact joint enumeration of a small bath and the memory-ancilla chain.
//!
//! The chain only ever occupies two configurations, all-zeros and all-ones
//! (the CNOT acts branch by branch), so the joint state is a table over
//! (bath Hamming weight, chain branch) with the `C(N,n)` bath multiplicity
//! folded into class sizes. Angular momentum is measured from the all-zeros
//! level in units of `hbar`, so a weight-`n` bath carries `n` and an
//! `m`-long all-ones chain carries `m`.
//!
//! Equilibration against the bath couples the equal-momentum classes
//! `(n+m, zeros)` and `(n, ones)` and spreads their probability uniformly
//! over the combined microstates: the maximum-entropy fixed point of any
//! exchange that respects the conservation law. Everything else stays put.

use crate::error::{Error, Result};
use crate::protocol::binary_entropy;
use crate::reservoir::{alpha_from_gap_ratio, bath_weights_direct, binomial};

/// Largest bath size enumerated exactly; keeps `C(N,n)` exact in f64 with
/// room to spare.
pub const MAX_BATH: usize = 20;

/// Joint distribution of bath Hamming weight and chain branch.
#[derive(Debug, Clone, PartialEq)]
pub struct JointFiniteState {
    n_spins: usize,
    chain_len: usize,
    /// P(bath weight n, chain all-zeros), multiplicity-summed over the bath.
    zeros: Vec<f64>,
    /// P(bath weight n, chain all-ones).
    ones: Vec<f64>,
}

impl JointFiniteState {
    /// Bath at gap ratio `x`, memory spin maximally mixed and independent.
    pub fn new(n_spins: usize, x: f64) -> Result<Self> {
        if n_spins == 0 || n_spins > MAX_BATH {
            return Err(Error::Domain(format!(
                "bath size must be in 1..={MAX_BATH}, got {n_spins}"
            )));
        }
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!(
                "gap ratio must be positive and finite, got {x}"
            )));
        }
        let bath = bath_weights_direct(n_spins, x);
        let zeros: Vec<f64> = bath.iter().map(|q| q / 2.0).collect();
        let ones = zeros.clone();
        Ok(Self {
            n_spins,
            chain_len: 1,
            zeros,
            ones,
        })
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn chain_len(&self) -> usize {
        self.chain_len
    }

    /// Probability of the all-ones chain branch.
    pub fn p1(&self) -> f64 {
        self.ones.iter().sum()
    }

    /// Bath marginal over Hamming weights.
    pub fn bath_marginal(&self) -> Vec<f64> {
        self.zeros
            .iter()
            .zip(&self.ones)
            .map(|(a, b)| a + b)
            .collect()
    }

    /// Expected total `J_z` (bath + chain) in `hbar` units, measured from
    /// the all-zeros level.
    pub fn conserved_total(&self) -> f64 {
        let bath: f64 = self
            .bath_marginal()
            .iter()
            .enumerate()
            .map(|(n, q)| n as f64 * q)
            .sum();
        bath + self.chain_len as f64 * self.p1()
    }

    /// Entropy of the bath marginal over microstates, in nats.
    pub fn bath_entropy(&self) -> f64 {
        self.bath_marginal()
            .iter()
            .enumerate()
            .filter(|(_, &q)| q > 0.0)
            .map(|(n, &q)| -q * (q / binomial(self.n_spins, n)).ln())
            .sum()
    }

    /// Entropy of the two-branch chain marginal, in nats.
    pub fn chain_entropy(&self) -> f64 {
        binary_entropy(self.p1())
    }

    /// Joint entropy over microstates, in nats. The chain contributes no
    /// multiplicity: each branch is a single configuration.
    pub fn total_entropy(&self) -> f64 {
        let mut s = 0.0;
        for (n, &p) in self
            .zeros
            .iter()
            .enumerate()
            .chain(self.ones.iter().enumerate())
        {
            if p > 0.0 {
                s -= p * (p / binomial(self.n_spins, n)).ln();
            }
        }
        s
    }

    pub fn total_probability(&self) -> f64 {
        self.zeros.iter().sum::<f64>() + self.ones.iter().sum::<f64>()
    }

    /// Equilibrates chain and bath: couples `(n+m, zeros)` with `(n, ones)`
    /// for every feasible `n` and redistributes probability uniformly over
    /// the microstates of each coupled class. Conserves total `J_z` and
    /// total probability; never decreases the joint entropy.
    pub fn exchange_step(&mut self) -> Result<()> {
        let m = self.chain_len;
        if m > self.n_spins {
            return Err(Error::ChainTooLong {
                chain: m,
                bath: self.n_spins,
            });
        }
        for n in 0..=(self.n_spins - m) {
            let size_zeros = binomial(self.n_spins, n + m);
            let size_ones = binomial(self.n_spins, n);
            let pooled = self.zeros[n + m] + self.ones[n];
            let per_microstate = pooled / (size_zeros + size_ones);
            self.zeros[n + m] = per_microstate * size_zeros;
            self.ones[n] = per_microstate * size_ones;
        }
        Ok(())
    }

    /// The CNOT: extends the all-ones branch by one fresh ancilla flipped to
    /// logical 1. Branch probabilities are untouched; returns the expected
    /// spin cost `P(ones)` in `hbar` units, injected from outside the
    /// bath-chain system.
    pub fn append_ancilla(&mut self) -> f64 {
        self.chain_len += 1;
        self.p1()
    }

    /// Checks normalization; probabilities are nonnegative by construction
    /// but rounding is policed here too.
    pub fn validate(&self) -> Result<()> {
        if self.zeros.iter().chain(&self.ones).any(|&p| p < 0.0) {
            return Err(Error::Domain("negative probability in joint table".into()));
        }
        let total = self.total_probability();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("joint table sums to {total}")));
        }
        Ok(())
    }
}

/// Per-cycle comparison of the exact finite-bath run against the
/// large-bath ideal, plus the entropy ledger across the equilibration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleAudit {
    pub cycle: usize,
    pub p1_exact: f64,
    pub p1_ideal: f64,
    pub deviation: f64,
    pub ds_bath: f64,
    pub ds_chain: f64,
    pub ds_total: f64,
}

/// Full audit of a finite run.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteReport {
    pub n_spins: usize,
    pub x: f64,
    pub cycles: Vec<CycleAudit>,
    /// Chain entropy left after the last equilibration.
    pub residual_chain_entropy: f64,
    /// Total CNOT spin cost over the run, `hbar` units.
    pub spin_cost: f64,
}

impl FiniteReport {
    /// Cumulative bath entropy gain; approaches `ln 2` for large baths.
    pub fn bath_entropy_gain(&self) -> f64 {
        self.cycles.iter().map(|c| c.ds_bath).sum()
    }
}

/// Runs `cycles` equilibrate-then-CNOT rounds exactly. Each round `c`
/// equilibrates the chain at length `c`, so `cycles` may not exceed the
/// bath size.
pub fn simulate_finite(n_spins: usize, x: f64, cycles: usize) -> Result<FiniteReport> {
    if cycles == 0 {
        return Err(Error::Domain("at least one cycle is required".into()));
    }
    if cycles > n_spins {
        return Err(Error::ChainTooLong {
            chain: cycles,
            bath: n_spins,
        });
    }
    let mut state = JointFiniteState::new(n_spins, x)?;
    let mut audits = Vec::with_capacity(cycles);
    let mut spin_cost = 0.0;
    for cycle in 1..=cycles {
        let before = (
            state.bath_entropy(),
            state.chain_entropy(),
            state.total_entropy(),
        );
        state.exchange_step()?;
        let p1_exact = state.p1();
        let p1_ideal = alpha_from_gap_ratio(cycle as f64 * x);
        audits.push(CycleAudit {
            cycle,
            p1_exact,
            p1_ideal,
            deviation: (p1_exact - p1_ideal).abs(),
            ds_bath: state.bath_entropy() - before.0,
            ds_chain: state.chain_entropy() - before.1,
            ds_total: state.total_entropy() - before.2,
        });
        spin_cost += state.append_ancilla();
    }
    let residual = binary_entropy(audits.last().expect("cycles >= 1").p1_exact);
    Ok(FiniteReport {
        n_spins,
        x,
        cycles: audits,
        residual_chain_entropy: residual,
        spin_cost,
    })
}
