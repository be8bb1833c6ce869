//! Bath rates and the local and global GKSL Liouvillian superoperators,
//! their spectral decompositions, and finite-time propagation.
//!
//! The bath is Ohmic, J(w) = Gamma w exp(-w/w_ct), with Bose occupation
//! n(beta, w). Transition rates follow the KMS convention
//! gamma(+w) = J(w)(n+1), gamma(-w) = J(w) n, so that
//! gamma(w)/gamma(-w) = exp(beta w) and the thermal state is stationary.
//!
//! The *local* equation builds dissipators from the bare levels and its
//! steady state is not the Gibbs state of the coupled Hamiltonian; the
//! *global* equation dresses the jump operators with the mixing angle
//! (rates scaled by cos^2(2 theta)) and relaxes exactly to the Gibbs state.
//! Density matrices are flattened in the order (gg, ge, eg, ee).

use crate::error::{OttoError, Result};
use crate::linalg::{c, cr, v4_dot, C64, M2, M4, ONE, ZERO};
use crate::qubit::{DensityMatrix, EigenFrame};

/// Ohmic bath spectral settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    /// Rate prefactor Gamma (> 0).
    pub gamma_scale: f64,
    /// Exponential cutoff frequency (> 0); large enough to be inert by default.
    pub omega_cutoff: f64,
}

impl Default for BathSpec {
    fn default() -> Self {
        BathSpec {
            gamma_scale: 0.01,
            omega_cutoff: 1e6,
        }
    }
}

impl BathSpec {
    pub fn new(gamma_scale: f64, omega_cutoff: f64) -> Result<Self> {
        if !(gamma_scale > 0.0 && gamma_scale.is_finite()) {
            return Err(OttoError::InvalidParams(format!(
                "gamma_scale = {gamma_scale} must be finite and > 0"
            )));
        }
        if !(omega_cutoff > 0.0 && omega_cutoff.is_finite()) {
            return Err(OttoError::InvalidParams(format!(
                "omega_cutoff = {omega_cutoff} must be finite and > 0"
            )));
        }
        Ok(BathSpec {
            gamma_scale,
            omega_cutoff,
        })
    }
}

/// Bare emission/absorption rates at a transition frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSet {
    /// gamma(+w) = J(w)(n+1): emission.
    pub gamma_plus: f64,
    /// gamma(-w) = J(w) n: absorption.
    pub gamma_minus: f64,
    /// gamma(0); identically 0 for an Ohmic bath.
    pub gamma_zero: f64,
}

/// Global (dressed) rates for one stroke.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalRates {
    pub rates: RateSet,
    /// cos^2(2 theta) suppression factor from the dressed jump operators.
    pub cos2_2theta: f64,
    /// Gamma-tilde-plus = cos^2(2 theta) gamma(+omega_tilde).
    pub big_gamma_plus: f64,
    /// Gamma-tilde-minus = cos^2(2 theta) gamma(-omega_tilde).
    pub big_gamma_minus: f64,
}

/// Ohmic spectral density J(w) = Gamma w exp(-w / w_ct), for w > 0.
pub fn spectral_density(omega: f64, bath: &BathSpec) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(OttoError::InvalidParams(format!(
            "spectral density requires omega > 0, got {omega}"
        )));
    }
    Ok(bath.gamma_scale * omega * (-omega / bath.omega_cutoff).exp())
}

/// Bose-Einstein occupation n = 1 / (exp(beta w) - 1).
pub fn bose_occupation(beta: f64, omega: f64) -> Result<f64> {
    let x = beta * omega;
    if !(x > 0.0) {
        return Err(OttoError::InvalidParams(format!(
            "bose occupation requires beta*omega > 0, got {x}"
        )));
    }
    if x > 700.0 {
        // exp(x) overflows; n ~ exp(-x)
        return Ok((-x).exp());
    }
    Ok(1.0 / (x.exp() - 1.0))
}

/// KMS-consistent one-sided rate: gamma(+w) = J(w)(n+1), gamma(-w) = J(w) n.
pub fn rate(omega_signed: f64, beta: f64, bath: &BathSpec) -> Result<f64> {
    if omega_signed == 0.0 {
        return Err(OttoError::InvalidParams(
            "rate(0) is excluded; the Ohmic gamma(0) is 0".into(),
        ));
    }
    let w = omega_signed.abs();
    let j = spectral_density(w, bath)?;
    let n = bose_occupation(beta, w)?;
    Ok(if omega_signed > 0.0 { j * (n + 1.0) } else { j * n })
}

/// Dressed rates for a stroke frame: Gamma-tilde-pm = cos^2(2 theta) gamma(+-omega_tilde).
pub fn global_rates(frame: &EigenFrame, beta: f64, bath: &BathSpec) -> Result<GlobalRates> {
    let gp = rate(frame.omega_tilde, beta, bath)?;
    let gm = rate(-frame.omega_tilde, beta, bath)?;
    let c2 = (2.0 * frame.theta).cos().powi(2);
    Ok(GlobalRates {
        rates: RateSet {
            gamma_plus: gp,
            gamma_minus: gm,
            gamma_zero: 0.0,
        },
        cos2_2theta: c2,
        big_gamma_plus: c2 * gp,
        big_gamma_minus: c2 * gm,
    })
}

/// Global Liouvillian in the stroke eigenbasis, flattening order
/// (gg, ge, eg, ee). Populations and coherences decouple.
pub fn global_liouvillian(frame: &EigenFrame, beta: f64, bath: &BathSpec) -> Result<M4> {
    let gr = global_rates(frame, beta, bath)?;
    let (gp, gm) = (cr(gr.big_gamma_plus), cr(gr.big_gamma_minus));
    let half_sum = (gp + gm) * cr(0.5);
    let iw = c(0.0, frame.omega_tilde);
    let mut l = M4::zero();
    // population block: d/dt (gg, ee) = [[-Gm, Gp], [Gm, -Gp]]
    l.0[0][0] = -gm;
    l.0[0][3] = gp;
    l.0[3][0] = gm;
    l.0[3][3] = -gp;
    // coherences rotate at +-omega_tilde and decay at half the total rate
    l.0[1][1] = -half_sum + iw;
    l.0[2][2] = -half_sum - iw;
    Ok(l)
}

/// Four eigenvalue / left-matrix / right-matrix triples of a Liouvillian,
/// normalized so Tr[rho_i] = delta_i0 and Tr[sigma_i rho_j] = delta_ij
/// (plain trace, no conjugation).
#[derive(Debug, Clone, Copy)]
pub struct LiouvillianSpectrum {
    pub eigenvalues: [C64; 4],
    pub left_mats: [M2; 4],
    pub right_mats: [M2; 4],
}

impl LiouvillianSpectrum {
    /// Expansion coefficients c_i = Tr[sigma_i rho] of a state.
    pub fn coefficients(&self, rho: &M2) -> [C64; 4] {
        core::array::from_fn(|i| (self.left_mats[i] * *rho).trace())
    }
}

/// Analytic spectral decomposition of the global Liouvillian.
pub fn global_spectrum(frame: &EigenFrame, beta: f64, bath: &BathSpec) -> Result<LiouvillianSpectrum> {
    let gr = global_rates(frame, beta, bath)?;
    let (gp, gm) = (gr.big_gamma_plus, gr.big_gamma_minus);
    let sum = gp + gm;
    if sum <= 0.0 {
        return Err(OttoError::Degenerate(format!(
            "total dressed rate {sum} vanishes: no unique stationary state"
        )));
    }
    let iw = c(0.0, frame.omega_tilde);
    let eigenvalues = [
        ZERO,
        cr(-0.5 * sum) + iw,
        cr(-0.5 * sum) - iw,
        cr(-sum),
    ];
    let left_mats = [
        M2::identity(),
        M2([[ZERO, ZERO], [ONE, ZERO]]),
        M2([[ZERO, ONE], [ZERO, ZERO]]),
        M2::diag(cr(gm), cr(-gp)),
    ];
    let right_mats = [
        M2::diag(cr(gp / sum), cr(gm / sum)),
        M2([[ZERO, ONE], [ZERO, ZERO]]),
        M2([[ZERO, ZERO], [ONE, ZERO]]),
        M2::diag(cr(1.0 / sum), cr(-1.0 / sum)),
    ];
    Ok(LiouvillianSpectrum {
        eigenvalues,
        left_mats,
        right_mats,
    })
}

/// Local Liouvillian in the original basis, exactly the standard GKSL matrix
/// with bare rates gamma_pm = rate(+-omega) and coherent +-i g couplings.
pub fn local_liouvillian(omega: f64, g: f64, beta: f64, bath: &BathSpec) -> Result<M4> {
    crate::qubit::build_hamiltonian(omega, g)?;
    let gp = cr(rate(omega, beta, bath)?);
    let gm = cr(rate(-omega, beta, bath)?);
    let ig = c(0.0, g);
    let half = (gp + gm) * cr(0.5);
    let iw = c(0.0, omega);
    Ok(M4([
        [-gm, ig, -ig, gp],
        [ig, -half + iw, ZERO, -ig],
        [-ig, ZERO, -half - iw, ig],
        [gm, -ig, ig, -gp],
    ]))
}

/// Residual of the characteristic cubic for the local Liouvillian's nonzero
/// eigenvalues.
pub fn local_cubic_residual(lambda: C64, omega: f64, g: f64, gp: f64, gm: f64) -> f64 {
    let (gp, gm) = (cr(gp), cr(gm));
    let term1 = cr(8.0 * g * g) * (gm + gp + cr(2.0) * lambda);
    let term2 = (gm + gp + lambda)
        * (gm * gm
            + gp * gp
            + cr(4.0) * gp * lambda
            + cr(2.0) * gm * (gp + cr(2.0) * lambda)
            + cr(4.0) * (lambda * lambda + cr(omega * omega)));
    (term1 + term2).norm()
}

/// Numerical spectral decomposition of the local Liouvillian.
///
/// The eigenvalue with smallest modulus (the stationary mode, analytically
/// exactly 0) is listed first; the rest are ordered by descending real part.
pub fn local_spectrum(omega: f64, g: f64, beta: f64, bath: &BathSpec) -> Result<LiouvillianSpectrum> {
    let l = local_liouvillian(omega, g, beta, bath)?;
    let mut ev: Vec<C64> = l.eigenvalues().to_vec();
    ev.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let zero = ev.remove(0);
    if zero.norm() > 1e-10 * l.max_abs().max(1.0) {
        return Err(OttoError::Numerical(format!(
            "stationary eigenvalue not found (smallest |lambda| = {:.3e})",
            zero.norm()
        )));
    }
    ev.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    let eigenvalues = [ZERO, ev[0], ev[1], ev[2]];
    // near-degeneracy guard: inverse iteration cannot separate the modes
    for i in 0..4 {
        for j in (i + 1)..4 {
            if (eigenvalues[i] - eigenvalues[j]).norm() < 1e-10 {
                return Err(OttoError::Degenerate(format!(
                    "eigenvalue gap |{:?} - {:?}| < 1e-10",
                    eigenvalues[i], eigenvalues[j]
                )));
            }
        }
    }
    spectrum_from_eigenvalues(&l, &eigenvalues)
}

/// Build a normalized bi-orthogonal spectrum from a Liouvillian matrix and
/// its eigenvalues (the stationary mode first).
pub fn spectrum_from_eigenvalues(l: &M4, eigenvalues: &[C64; 4]) -> Result<LiouvillianSpectrum> {
    let mut rights = [crate::linalg::v4_zero(); 4];
    let mut lefts = [crate::linalg::v4_zero(); 4];
    for i in 0..4 {
        rights[i] = l.right_eigenvector(eigenvalues[i]);
        lefts[i] = l.left_eigenvector(eigenvalues[i]);
    }
    // stationary right mode carries unit trace
    let tr0 = rights[0][0] + rights[0][3];
    if tr0.norm() < 1e-12 {
        return Err(OttoError::Numerical(
            "stationary mode has vanishing trace".into(),
        ));
    }
    for e in rights[0].iter_mut() {
        *e /= tr0;
    }
    // decaying right modes are traceless; remove numerical trace leakage
    let stationary = rights[0];
    for v in rights.iter_mut().skip(1) {
        let tr = v[0] + v[3];
        for k in 0..4 {
            v[k] -= tr * stationary[k];
        }
    }
    // scale left modes so Tr[sigma_i rho_i] = 1
    for i in 0..4 {
        let ov = v4_dot(&lefts[i], &rights[i]);
        if ov.norm() < 1e-12 {
            return Err(OttoError::Numerical(format!(
                "defective eigenpair at eigenvalue {:?}",
                eigenvalues[i]
            )));
        }
        for e in lefts[i].iter_mut() {
            *e /= ov;
        }
    }
    Ok(LiouvillianSpectrum {
        eigenvalues: *eigenvalues,
        left_mats: core::array::from_fn(|i| M2::left_from_vec4(&lefts[i])),
        right_mats: core::array::from_fn(|i| M2::from_vec4(&rights[i])),
    })
}

/// Evolve a state for time t through the spectral expansion
/// rho(t) = sum_i Tr[sigma_i rho(0)] exp(lambda_i t) rho_i,
/// then re-Hermitize and renormalize the trace.
pub fn propagate(rho: &DensityMatrix, spectrum: &LiouvillianSpectrum, t: f64) -> Result<DensityMatrix> {
    if !(t >= 0.0) {
        return Err(OttoError::InvalidParams(format!("t = {t} must be >= 0")));
    }
    let coeffs = spectrum.coefficients(rho.entries());
    let mut out = M2::zero();
    for i in 0..4 {
        let phase = (spectrum.eigenvalues[i] * cr(t)).exp();
        out = out + spectrum.right_mats[i].scale(coeffs[i] * phase);
    }
    let out = out.hermitize();
    let tr = out.trace().re;
    if !(tr.is_finite() && tr.abs() > 1e-12) {
        return Err(OttoError::Numerical(format!(
            "propagated state trace {tr} is unusable"
        )));
    }
    DensityMatrix::new(out.scale(cr(1.0 / tr)), rho.basis_tag())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gslc::gibbs_state;
    use crate::qubit::{eigenframe, BasisTag};
    use approx::assert_abs_diff_eq;

    fn inert_bath() -> BathSpec {
        BathSpec::default()
    }

    #[test]
    fn spectral_density_values() {
        let b = inert_bath();
        // cutoff far away: J ~ Gamma * omega
        assert_abs_diff_eq!(spectral_density(1.0, &b).unwrap(), 0.01, epsilon = 1e-7);
        // at the cutoff: e^{-1}
        let b2 = BathSpec::new(1.0, 1.0).unwrap();
        assert_abs_diff_eq!(
            spectral_density(1.0, &b2).unwrap(),
            (-1.0f64).exp(),
            epsilon = 1e-15
        );
        // frozen oracle
        let b3 = BathSpec::new(0.01, 50.0).unwrap();
        assert_abs_diff_eq!(
            spectral_density(5.0, &b3).unwrap(),
            0.04524187090179798,
            epsilon = 1e-16
        );
        assert!(spectral_density(0.0, &b).is_err());
        assert!(spectral_density(-1.0, &b).is_err());
    }

    #[test]
    fn bose_occupation_values() {
        assert_abs_diff_eq!(
            bose_occupation(2.0f64.ln(), 1.0).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        // frozen oracle 1/(e-1)
        assert_abs_diff_eq!(
            bose_occupation(1.0, 1.0).unwrap(),
            0.5819767068693265,
            epsilon = 1e-16
        );
        assert!(bose_occupation(100.0, 1.0).unwrap() < 1e-40);
        // overflow guard path: finite (underflows to 0 at this extreme)
        let n = bose_occupation(800.0, 1.0).unwrap();
        assert!(n.is_finite() && n >= 0.0 && n < 1e-300);
    }

    #[test]
    fn rate_detailed_balance() {
        let b = inert_bath();
        // frozen oracle
        assert_abs_diff_eq!(
            rate(1.0, 1.0, &b).unwrap(),
            0.015819751248934106,
            epsilon = 1e-16
        );
        // KMS: rate(+5)/rate(-5) = e^{0.2*5}
        let ratio = rate(5.0, 0.2, &b).unwrap() / rate(-5.0, 0.2, &b).unwrap();
        assert_abs_diff_eq!(ratio, 1.0f64.exp(), epsilon = 1e-12);
        assert!(rate(0.0, 1.0, &b).is_err());
    }

    #[test]
    fn global_rates_limits() {
        let b = inert_bath();
        // g = 0: cos^2(2 theta) = 1, dressed rates are the bare ones
        let f = eigenframe(3.0, 0.0, BasisTag::EigenH).unwrap();
        let gr = global_rates(&f, 1.0, &b).unwrap();
        assert_abs_diff_eq!(gr.cos2_2theta, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(gr.big_gamma_plus, gr.rates.gamma_plus, epsilon = 1e-16);
        // omega -> 0 with g > 0: theta -> pi/4, dissipation decouples
        let f = eigenframe(1e-9, 1.0, BasisTag::EigenH).unwrap();
        let gr = global_rates(&f, 1.0, &b).unwrap();
        assert!(gr.cos2_2theta < 1e-17);
        // frozen oracle: omega=3, g=2 -> cos^2(2 theta) = 9/25
        let f = eigenframe(3.0, 2.0, BasisTag::EigenH).unwrap();
        let gr = global_rates(&f, 1.0, &b).unwrap();
        assert_abs_diff_eq!(gr.cos2_2theta, 0.36, epsilon = 1e-14);
        assert_abs_diff_eq!(gr.big_gamma_plus, 0.01812201517801106, epsilon = 1e-16);
    }

    #[test]
    fn global_liouvillian_stationary_state() {
        let b = inert_bath();
        let f = eigenframe(3.0, 2.0, BasisTag::EigenH).unwrap();
        let l = global_liouvillian(&f, 1.0, &b).unwrap();
        let gr = global_rates(&f, 1.0, &b).unwrap();
        let sum = gr.big_gamma_plus + gr.big_gamma_minus;
        let v = [
            cr(gr.big_gamma_plus / sum),
            ZERO,
            ZERO,
            cr(gr.big_gamma_minus / sum),
        ];
        let lv = l.matvec(&v);
        for e in lv {
            assert!(e.norm() < 1e-12);
        }
        // trace preservation: population columns sum to 0
        for col in [0usize, 3] {
            let s = l.0[0][col] + l.0[3][col];
            assert!(s.norm() < 1e-15);
        }
    }

    #[test]
    fn global_spectrum_matches_numerical_eigensolve() {
        let b = inert_bath();
        let f = eigenframe(5.0, 4.0, BasisTag::EigenC).unwrap();
        let spec = global_spectrum(&f, 0.2, &b).unwrap();
        let l = global_liouvillian(&f, 0.2, &b).unwrap();
        let mut numeric: Vec<C64> = l.eigenvalues().to_vec();
        for want in spec.eigenvalues {
            let (k, _) = numeric
                .iter()
                .enumerate()
                .min_by(|(_, x), (_, y)| (*x - want).norm().total_cmp(&(*y - want).norm()))
                .unwrap();
            assert!((numeric[k] - want).norm() < 1e-10);
            numeric.remove(k);
        }
        // bi-orthogonality
        for i in 0..4 {
            for j in 0..4 {
                let ov = (spec.left_mats[i] * spec.right_mats[j]).trace();
                let expect = if i == j { ONE } else { ZERO };
                assert!((ov - expect).norm() < 1e-10, "overlap ({i},{j}) = {ov:?}");
            }
        }
        // stationary populations obey detailed balance
        let p = spec.right_mats[0];
        let ratio = (p.0[0][0] / p.0[1][1]).re;
        assert_abs_diff_eq!(ratio, (0.2 * f.omega_tilde).exp(), epsilon = 1e-10);
    }

    #[test]
    fn local_uncoupled_block_structure() {
        let b = inert_bath();
        let l = local_liouvillian(3.0, 0.0, 1.0, &b).unwrap();
        // population and coherence sectors decouple at g = 0
        for (r, cix) in [(0, 1), (0, 2), (1, 0), (1, 3), (2, 0), (2, 3), (3, 1), (3, 2)] {
            assert!(l.0[r][cix].norm() < 1e-15);
        }
        let spec = local_spectrum(3.0, 0.0, 1.0, &b).unwrap();
        // steady populations (n+1, n)/(2n+1)
        let n = bose_occupation(1.0, 3.0).unwrap();
        let p = spec.right_mats[0];
        assert_abs_diff_eq!(p.0[0][0].re, (n + 1.0) / (2.0 * n + 1.0), epsilon = 1e-10);
        assert_abs_diff_eq!(p.0[1][1].re, n / (2.0 * n + 1.0), epsilon = 1e-10);
    }

    #[test]
    fn local_nonzero_eigenvalues_satisfy_cubic() {
        let b = inert_bath();
        let gp = rate(3.0, 1.0, &b).unwrap();
        let gm = rate(-3.0, 1.0, &b).unwrap();
        let spec = local_spectrum(3.0, 2.0, 1.0, &b).unwrap();
        for i in 1..4 {
            let res = local_cubic_residual(spec.eigenvalues[i], 3.0, 2.0, gp, gm);
            assert!(res < 1e-8, "cubic residual {res:.3e} at mode {i}");
        }
    }

    #[test]
    fn local_steady_state_is_not_gibbs() {
        let b = inert_bath();
        let spec = local_spectrum(3.0, 2.0, 1.0, &b).unwrap();
        let steady = DensityMatrix::new(spec.right_mats[0].hermitize(), BasisTag::Original).unwrap();
        let gibbs = gibbs_state(3.0, 2.0, 1.0).unwrap();
        assert!(steady.trace_distance(&gibbs) > 1e-3);
    }

    #[test]
    fn propagate_identity_and_longtime() {
        let b = inert_bath();
        let f = eigenframe(3.0, 2.0, BasisTag::EigenH).unwrap();
        let spec = global_spectrum(&f, 1.0, &b).unwrap();
        let rho = DensityMatrix::maximally_mixed(BasisTag::EigenH);
        let same = propagate(&rho, &spec, 0.0).unwrap();
        assert!((*same.entries() - *rho.entries()).max_abs() < 1e-12);
        let gr = global_rates(&f, 1.0, &b).unwrap();
        let t_inf = 1e4 / (gr.big_gamma_plus + gr.big_gamma_minus);
        let settled = propagate(&rho, &spec, t_inf).unwrap();
        assert!((*settled.entries() - spec.right_mats[0]).max_abs() < 1e-10);
    }

    #[test]
    fn propagate_composes() {
        let b = inert_bath();
        let f = eigenframe(3.0, 2.0, BasisTag::EigenH).unwrap();
        let spec = global_spectrum(&f, 1.0, &b).unwrap();
        let rho = DensityMatrix::ground_projector(BasisTag::EigenH);
        let one = propagate(&propagate(&rho, &spec, 7.0).unwrap(), &spec, 4.5).unwrap();
        let two = propagate(&rho, &spec, 11.5).unwrap();
        assert!((*one.entries() - *two.entries()).max_abs() < 1e-10);
    }

    #[test]
    fn global_stationary_rotates_to_gibbs() {
        let b = inert_bath();
        for (omega, g, beta) in [(3.0, 2.0, 1.0), (5.0, 4.0, 0.2), (2.0, 0.5, 2.0)] {
            let f = eigenframe(omega, g, BasisTag::EigenH).unwrap();
            let spec = global_spectrum(&f, beta, &b).unwrap();
            let steady =
                DensityMatrix::new(spec.right_mats[0].hermitize(), BasisTag::EigenH).unwrap();
            let rotated = crate::qubit::from_eigenbasis(&steady, &f).unwrap();
            let gibbs = gibbs_state(omega, g, beta).unwrap();
            assert!(
                (*rotated.entries() - *gibbs.entries()).max_abs() < 1e-10,
                "mismatch at ({omega}, {g}, {beta})"
            );
        }
    }
}
