//! Gibbs-state limit cycle: per-stroke thermal states in the original basis
//! and the closed-form energy flows.
//!
//! With Delta = sqrt(g^2 + omega^2/4) and h = H - (omega/2) I, the Gibbs
//! state of the coupled qubit is
//!
//! ```text
//!     rho = (1/2) (I - tanh(beta Delta) h / Delta),
//! ```
//!
//! whose off-diagonal entries are -(g / 2 Delta) tanh(beta Delta). The cycle
//! alternates two such states, and the resulting heat and work admit closed
//! forms in which the cross term K = g_c g_h + omega_c omega_h / 4 carries
//! all the inter-stroke geometry.

use crate::error::Result;
use crate::linalg::{cr, M2};
use crate::qubit::{build_hamiltonian, BasisTag, CycleParams, DensityMatrix};

/// The two thermal stroke states and their coherence sums.
#[derive(Debug, Clone, Copy)]
pub struct GibbsPair {
    pub rho_h: DensityMatrix,
    pub rho_c: DensityMatrix,
    /// f_h = rho_h,ge + rho_h,eg = -(g_h/Delta_h) tanh(beta_h Delta_h).
    pub f_h: f64,
    /// Cold-stroke coherence sum, same form.
    pub f_c: f64,
}

fn delta_of(omega: f64, g: f64) -> f64 {
    (g * g + omega * omega / 4.0).sqrt()
}

/// Thermal state e^{-beta H} / Z of the coupled Hamiltonian, closed form.
pub fn gibbs_state(omega: f64, g: f64, beta: f64) -> Result<DensityMatrix> {
    let h = build_hamiltonian(omega, g)?;
    let delta = delta_of(omega, g);
    let t = (beta * delta).tanh();
    // rho = (I - t * (H - (omega/2) I) / Delta) / 2
    let shifted = h - M2::identity().scale(cr(omega / 2.0));
    let rho = (M2::identity() - shifted.scale(cr(t / delta))).scale(cr(0.5));
    DensityMatrix::new(rho, BasisTag::Original)
}

/// Coherence sum f = rho_ge + rho_eg = -(g/Delta) tanh(beta Delta).
pub fn coherence_f(omega: f64, g: f64, beta: f64) -> f64 {
    let delta = delta_of(omega, g);
    -(g / delta) * (beta * delta).tanh()
}

/// Closed-form GSLC energy flows (Q_h, Q_c, W), all signed into the system.
///
/// The three expressions cancel identically, so W + Q_h + Q_c = 0 holds to
/// rounding without being enforced.
pub fn gslc_energy_flows(params: &CycleParams) -> (f64, f64, f64) {
    let dh = delta_of(params.omega_h, params.g_h);
    let dc = delta_of(params.omega_c, params.g_c);
    let th = (params.beta_h * dh).tanh();
    let tc = (params.beta_c * dc).tanh();
    let k = params.g_c * params.g_h + params.omega_c * params.omega_h / 4.0;
    let q_h = (k / dc) * tc - dh * th;
    let q_c = (k / dh) * th - dc * tc;
    let w = (dh - k / dh) * th + (dc - k / dc) * tc;
    (q_h, q_c, w)
}

/// The Gibbs-state limit cycle: thermal states for both strokes.
pub fn gslc_limit_cycle(params: &CycleParams) -> Result<GibbsPair> {
    let rho_h = gibbs_state(params.omega_h, params.g_h, params.beta_h)?;
    let rho_c = gibbs_state(params.omega_c, params.g_c, params.beta_c)?;
    Ok(GibbsPair {
        rho_h,
        rho_c,
        f_h: coherence_f(params.omega_h, params.g_h, params.beta_h),
        f_c: coherence_f(params.omega_c, params.g_c, params.beta_c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn infinite_temperature_is_maximally_mixed() {
        let rho = gibbs_state(3.0, 2.0, 1e-14).unwrap();
        let mm = M2::identity().scale(cr(0.5));
        assert!((*rho.entries() - mm).max_abs() < 1e-10);
    }

    #[test]
    fn uncoupled_boltzmann_factors() {
        // omega=5, g=0, beta=0.2: populations 1/(1+e^-1), e^-1/(1+e^-1)
        let rho = gibbs_state(5.0, 0.0, 0.2).unwrap();
        let z = 1.0 + (-1.0f64).exp();
        assert_abs_diff_eq!(rho.entries().0[0][0].re, 1.0 / z, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.entries().0[1][1].re, (-1.0f64).exp() / z, epsilon = 1e-14);
        assert!(rho.entries().0[0][1].norm() < 1e-15);
    }

    #[test]
    fn coupled_off_diagonals() {
        // frozen oracle: matrix exponential e^{-beta H}/Z at omega=3, g=2, beta=1
        let rho = gibbs_state(3.0, 2.0, 1.0).unwrap();
        assert_abs_diff_eq!(
            rho.entries().0[0][1].re,
            -0.3946457192605721,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(rho.entries().trace().re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn coherence_matches_state() {
        for (omega, g, beta) in [(3.0, 2.0, 1.0), (1.0, 0.3, 5.0), (5.0, 4.0, 0.2)] {
            let rho = gibbs_state(omega, g, beta).unwrap();
            let sum = (rho.entries().0[0][1] + rho.entries().0[1][0]).re;
            assert_abs_diff_eq!(sum, coherence_f(omega, g, beta), epsilon = 1e-12);
        }
        assert_eq!(coherence_f(3.0, 0.0, 1.0), 0.0);
        // frozen oracle values
        assert_abs_diff_eq!(
            coherence_f(3.0, 2.0, 1.0),
            -0.7892914385211443,
            epsilon = 1e-14
        );
        // tanh saturation: -g/Delta = -2/sqrt(5)
        assert_abs_diff_eq!(
            coherence_f(1.0, 1.0, 500.0),
            -0.8944271909999159,
            epsilon = 1e-14
        );
    }

    #[test]
    fn state_commutes_with_hamiltonian() {
        for (omega, g, beta) in [(3.0, 2.0, 1.0), (5.0, 4.0, 0.2), (2.0, 0.7, 3.0)] {
            let rho = gibbs_state(omega, g, beta).unwrap();
            let h = build_hamiltonian(omega, g).unwrap();
            let comm = h * *rho.entries() - *rho.entries() * h;
            assert!(comm.max_abs() < 1e-12);
        }
    }

    #[test]
    fn first_law_is_identity() {
        let p = CycleParams::new(5.0, 1.0, 4.0, 1.0, 0.2, 1.0, 1.0, 1.0).unwrap();
        let (q_h, q_c, w) = gslc_energy_flows(&p);
        assert!((w + q_h + q_c).abs() < 1e-12);
        assert!(q_h != 0.0 || q_c != 0.0);
    }

    #[test]
    fn zero_flow_boundary() {
        // beta_h omega_h = beta_c omega_c with g_h/omega_h = g_c/omega_c
        for i in 1..=20 {
            let s = i as f64 * 0.25;
            let omega_c = 1.0 * s;
            let omega_h = 5.0 * s;
            let beta_c = 1.0 / s;
            let beta_h = 0.2 / s;
            let g_c = 0.3 * omega_c;
            let g_h = 0.3 * omega_h;
            let p = CycleParams::new(omega_h, omega_c, g_h, g_c, beta_h, beta_c, 1.0, 1.0)
                .unwrap();
            let (q_h, q_c, w) = gslc_energy_flows(&p);
            assert!(q_h.abs() <= 1e-12 && q_c.abs() <= 1e-12 && w.abs() <= 1e-12);
        }
    }

    #[test]
    fn uncoupled_matched_ratio_is_flowless() {
        // omega_h/omega_c = beta_c/beta_h with g = 0: the Fig. 3 boundary point
        let p = CycleParams::new(5.0, 1.0, 0.0, 0.0, 0.2, 1.0, 1.0, 1.0).unwrap();
        let (q_h, q_c, w) = gslc_energy_flows(&p);
        assert!(q_h.abs() < 1e-15 && q_c.abs() < 1e-15 && w.abs() < 1e-15);
    }
}
