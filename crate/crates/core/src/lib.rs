//! Cost accounting for information erasure against generalized reservoirs.
//!
//! A thermal reservoir charges `kT ln 2` of energy to erase one bit; a
//! reservoir characterised by some other conserved quantity charges in that
//! quantity instead, at a rate set by the conjugate Lagrange multiplier.
//! This crate provides the pieces needed to compute and verify those costs
//! at desk scale:
//!
//! * [`maxent`] — maximum-entropy states over finite bases, the convex dual
//!   solver for Lagrange multipliers, entropies and the erasure balance.
//! * [`reservoir`] — the archetypal two-level thermal memory, spin-bath
//!   distributions (Zeeman and energy-degenerate), parameter conversions and
//!   the quasi-static work integral.
//! * [`protocol`] — the cycle-based erasure protocol in the large-bath
//!   limit: per-cycle equilibria, cost series, analytic bounds, ledgers.
//! * [`finite_bath`] — exact joint enumeration of a small bath plus the
//!   memory-ancilla chain, for quantifying finite-size back-action.
//! * [`ensemble`] — seeded Monte Carlo trajectories and the residual-field
//!   energy ensemble.
//! * [`bounds`] — reservoir entropy, Hamming-cost and per-variable bounds,
//!   multi-variable totals and the optimality identity.
//!
//! All entropies are in nats (`ln 2` nats = 1 bit) and internal units are
//! natural (`hbar = 1`, `k = 1`) unless a scale is passed explicitly.

// Domain checks are written `!(x > 0.0)` so that NaN fails them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod ensemble;
pub mod error;
pub mod finite_bath;
pub mod maxent;
pub mod protocol;
pub mod reservoir;

pub use bounds::VariableSpec;
pub use ensemble::{EnsembleStats, FieldModel, RngSpec};
pub use error::{Error, Result};
pub use finite_bath::{FiniteReport, JointFiniteState};
pub use maxent::{MaxEntState, ObservableTable};
pub use protocol::{CycleRecord, ErasureLedger, ProtocolConfig, ProtocolMode, StopRule};
pub use reservoir::{BathMode, HammingDistribution, SpinBathParams, ThermalMemory};
