//! Protocol invariants: the bounds sandwich, ledger bookkeeping, unit
//! scaling, small-gap asymptotics and consistency with the MaxEnt balance.

use erasure_core::maxent::erasure_balance;
use erasure_core::protocol::{
    combined_scaled_cost, cost_bounds, cost_series, run_erasure, ProtocolConfig, ProtocolMode,
    StopRule,
};
use erasure_core::reservoir::{alpha_from_gap_ratio, gamma_from_alpha};
use proptest::prelude::*;
use std::f64::consts::LN_2;

/// Logarithmic grid over [1e-3, 10].
fn log_grid(points: usize) -> Vec<f64> {
    let (lo, hi) = (1e-3f64.ln(), 10f64.ln());
    (0..points)
        .map(|i| (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

#[test]
fn series_strictly_inside_both_bound_pairs() {
    for x in log_grid(40) {
        let series = cost_series(x, 1e-12).unwrap();
        let bounds = cost_bounds(x).unwrap();
        assert!(
            bounds.unprimed.0 < series && series < bounds.unprimed.1,
            "x={x}: {series} outside {:?}",
            bounds.unprimed
        );
        let primed = series + 0.5;
        assert!(
            bounds.primed.0 < primed && primed < bounds.primed.1,
            "x={x}: {primed} outside {:?}",
            bounds.primed
        );
    }
}

#[test]
fn combined_cost_exceeds_two_bits_everywhere() {
    for x in log_grid(40) {
        let combined = combined_scaled_cost(x).unwrap();
        assert!(combined > 2.0 * LN_2, "x={x}: {combined}");
    }
}

#[test]
fn small_gap_protocol_saturates_the_spin_bound() {
    // x (series + 1/2) -> ln 2 as x -> 0+; within 1% at x = 1e-3.
    let x = 1e-3;
    let primed = cost_series(x, 1e-13).unwrap() + 0.5;
    assert!((x * primed / LN_2 - 1.0).abs() < 0.01);
    // And the approach is monotone from above on a coarser grid.
    let mut last = f64::INFINITY;
    for x in [1.0, 0.3, 0.1, 0.03, 0.01, 3e-3, 1e-3] {
        let scaled = x * (cost_series(x, 1e-13).unwrap() + 0.5);
        assert!(scaled > LN_2 && scaled < last, "x={x}");
        last = scaled;
    }
}

#[test]
fn protocol_consistent_with_the_maxent_balance() {
    for x in log_grid(20) {
        let alpha = alpha_from_gap_ratio(x);
        let gamma = gamma_from_alpha(alpha, 1.0).unwrap();
        // gamma recovers x in natural units.
        assert!((gamma - x).abs() < 1e-12 * x.max(1.0));
        // Paying ln2/gamma of J_z settles the one-bit balance exactly.
        assert!(erasure_balance(&[gamma], &[LN_2 / gamma]).abs() < 1e-15);
        // The protocol's primed cost strictly overpays that minimum.
        let primed = cost_series(x, 1e-13).unwrap() + 0.5;
        assert!(primed > LN_2 / gamma, "x={x}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ledger_bookkeeping_is_exact(
        x in 0.01f64..5.0,
        cycles in 1usize..200,
        include_initial in any::<bool>(),
        hbar in 0.1f64..5.0,
        epsilon in 0.1f64..5.0,
        zeeman in any::<bool>(),
    ) {
        let mode = if zeeman {
            ProtocolMode::Zeeman { epsilon }
        } else {
            ProtocolMode::Degenerate
        };
        let config = ProtocolConfig {
            x,
            mode,
            stop: StopRule::MaxCycles(cycles),
            include_initial,
            hbar,
        };
        let ledger = run_erasure(&config).unwrap();
        prop_assert_eq!(ledger.records.len(), cycles);

        let spin: f64 = ledger.records.iter().map(|r| r.spin_cost).sum();
        prop_assert_eq!(spin, ledger.delta_jz);
        match ledger.delta_jz_prime {
            Some(primed) => {
                prop_assert!(include_initial);
                prop_assert_eq!(primed, ledger.delta_jz + hbar / 2.0);
            }
            None => prop_assert!(!include_initial),
        }
        if zeeman {
            let energy: f64 = ledger.records.iter().map(|r| r.energy_cost.unwrap()).sum();
            let initial = if include_initial { epsilon / 2.0 } else { 0.0 };
            prop_assert_eq!(ledger.delta_e, Some(energy + initial));
        } else {
            prop_assert_eq!(ledger.delta_e, None);
            prop_assert!(ledger.records.iter().all(|r| r.energy_cost.is_none()));
        }

        for pair in ledger.records.windows(2) {
            // Strictly decreasing until p1 underflows to zero outright.
            prop_assert!(pair[1].p1 < pair[0].p1 || pair[0].p1 == 0.0);
        }
        prop_assert!(ledger.series_tail_bound >= 0.0);
    }

    #[test]
    fn costs_depend_only_on_the_gap_ratio(
        epsilon in 0.05f64..3.0,
        k_t in 0.05f64..3.0,
        cycles in 1usize..100,
        scale in 1.0f64..8.0,
    ) {
        let run = |eps: f64, kt: f64| {
            run_erasure(&ProtocolConfig {
                x: eps / kt,
                mode: ProtocolMode::Zeeman { epsilon: eps },
                stop: StopRule::MaxCycles(cycles),
                include_initial: true,
                hbar: 1.0,
            })
            .unwrap()
        };
        let base = run(epsilon, k_t);
        let scaled = run(epsilon * scale, k_t * scale);
        // Identical gap ratio: spin totals agree except for rounding in
        // computing x itself.
        prop_assert!(
            (base.delta_jz - scaled.delta_jz).abs() <= 1e-12 * base.delta_jz.max(1.0)
        );
        // Energy totals scale linearly with epsilon.
        let (e1, e2) = (base.delta_e.unwrap(), scaled.delta_e.unwrap());
        prop_assert!((e2 / scale - e1).abs() <= 1e-12 * e1.max(1.0));
    }
}
