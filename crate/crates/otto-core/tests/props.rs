//! Property tests for the structural invariants of the cycle machinery.

use proptest::prelude::*;

use otto_core::gslc::{gibbs_state, gslc_energy_flows, gslc_limit_cycle};
use otto_core::limit_cycle::solve_nelc;
use otto_core::lindblad::{global_spectrum, propagate, rate, BathSpec};
use otto_core::linalg::{c, cr, M2};
use otto_core::qubit::{
    eigenframe, from_eigenbasis, to_eigenbasis, BasisTag, CycleParams, DensityMatrix,
};
use otto_core::thermo::{classify, dead_band, flows_for_pair, Regime};

/// A valid cycle-parameter draw: omega_h >= omega_c, beta_h < beta_c.
fn cycle_params() -> impl Strategy<Value = CycleParams> {
    (
        0.5f64..3.0,   // omega_c
        0.0f64..4.0,   // omega_h - omega_c
        0.0f64..3.0,   // g_h
        0.0f64..3.0,   // g_c
        0.5f64..2.0,   // beta_c
        0.05f64..0.85, // beta_h / beta_c
        0.1f64..50.0,  // tau
    )
        .prop_map(|(omega_c, d_omega, g_h, g_c, beta_c, ratio, tau)| {
            CycleParams::new(
                omega_c + d_omega,
                omega_c,
                g_h,
                g_c,
                ratio * beta_c,
                beta_c,
                tau,
                tau,
            )
            .unwrap()
        })
}

/// A random valid qubit state from Bloch coordinates of length <= 1.
fn density_matrix() -> impl Strategy<Value = DensityMatrix> {
    (0.0f64..0.999, 0.0f64..std::f64::consts::PI, 0.0f64..std::f64::consts::TAU).prop_map(
        |(r, polar, azimuth)| {
            let (x, y, z) = (
                r * polar.sin() * azimuth.cos(),
                r * polar.sin() * azimuth.sin(),
                r * polar.cos(),
            );
            let m = M2([
                [cr(0.5 * (1.0 + z)), c(0.5 * x, -0.5 * y)],
                [c(0.5 * x, 0.5 * y), cr(0.5 * (1.0 - z))],
            ]);
            DensityMatrix::new(m, BasisTag::Original).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn basis_rotation_round_trips(rho in density_matrix(),
                                  omega in 0.5f64..5.0,
                                  g in 0.0f64..3.0) {
        let frame = eigenframe(omega, g, BasisTag::EigenH).unwrap();
        let back = from_eigenbasis(&to_eigenbasis(&rho, &frame).unwrap(), &frame).unwrap();
        prop_assert!(rho.trace_distance(&back) < 1e-12);
    }

    #[test]
    fn gslc_first_law_and_carnot(p in cycle_params()) {
        let (q_h, q_c, w) = gslc_energy_flows(&p);
        prop_assert!((q_h + q_c + w).abs() < 1e-12);
        let pair = gslc_limit_cycle(&p).unwrap();
        let flows = flows_for_pair(&p, &pair.rho_h, &pair.rho_c).unwrap();
        prop_assert!((flows.q_h - q_h).abs() < 1e-12);
        prop_assert!((flows.q_c - q_c).abs() < 1e-12);
        prop_assert!((flows.w - w).abs() < 1e-12);
        let report = classify(&flows, dead_band(&p));
        match report.regime {
            Regime::Engine => {
                prop_assert!(report.figure_of_merit.unwrap()
                    <= 1.0 - p.beta_h / p.beta_c + 1e-12);
            }
            Regime::Refrigerator => {
                prop_assert!(report.figure_of_merit.unwrap()
                    <= p.beta_h / (p.beta_c - p.beta_h) + 1e-12);
            }
            Regime::None => {}
        }
    }

    #[test]
    fn kms_detailed_balance(omega in 0.2f64..8.0, beta in 0.05f64..3.0) {
        let bath = BathSpec::default();
        let ratio = rate(omega, beta, &bath).unwrap() / rate(-omega, beta, &bath).unwrap();
        prop_assert!((ratio / (beta * omega).exp() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn propagation_is_a_state_map(rho in density_matrix(),
                                  omega in 0.5f64..5.0,
                                  g in 0.0f64..3.0,
                                  beta in 0.1f64..2.0,
                                  t in 0.0f64..500.0) {
        let bath = BathSpec::default();
        let frame = eigenframe(omega, g, BasisTag::EigenH).unwrap();
        let spec = global_spectrum(&frame, beta, &bath).unwrap();
        let start = to_eigenbasis(&rho, &frame).unwrap();
        let out = propagate(&start, &spec, t).unwrap();
        // DensityMatrix::new re-validates trace, Hermiticity and positivity,
        // so reaching here means the map stayed inside the state space
        let evs = out.entries().herm_eigvals();
        prop_assert!(evs[0] >= -1e-10);
        prop_assert!((out.entries().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn long_time_propagation_reaches_gibbs(rho in density_matrix(),
                                           omega in 0.5f64..5.0,
                                           g in 0.0f64..3.0,
                                           beta in 0.1f64..2.0) {
        let bath = BathSpec::default();
        let frame = eigenframe(omega, g, BasisTag::EigenH).unwrap();
        let spec = global_spectrum(&frame, beta, &bath).unwrap();
        let start = to_eigenbasis(&rho, &frame).unwrap();
        let out = propagate(&start, &spec, 1e8).unwrap();
        let gibbs = to_eigenbasis(&gibbs_state(omega, g, beta).unwrap(), &frame).unwrap();
        prop_assert!(out.trace_distance(&gibbs) < 1e-8);
    }

    #[test]
    fn nelc_fixed_point_is_cycle_invariant(p in cycle_params()) {
        let bath = BathSpec::default();
        let (sol, report) = solve_nelc(&p, &bath).unwrap();
        prop_assert!(report.final_residual < 1e-10);
        let flows = flows_for_pair(&p, &sol.rho_h, &sol.rho_c).unwrap();
        prop_assert!((flows.q_h + flows.q_c + flows.w).abs() < 1e-12);
    }
}
