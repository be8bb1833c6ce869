//! Stroboscopic one-cycle map and its fixed points: the NELC solver, the
//! ELC infinite-time limit, and the brute-force iteration oracle.
//!
//! Working in per-stroke Liouvillian eigen-coordinates, a state is a
//! coefficient vector c with c_0 = 1 (trace) and three decaying components.
//! An adiabatic quench re-expands the state in the other stroke's
//! eigenbasis through the overlap matrix
//!
//! ```text
//!     T(beta<-alpha)_{j,i} = Tr[ sigma_j^beta (U_beta^T U_alpha)
//!                                rho_i^alpha (U_alpha^T U_beta) ],
//! ```
//!
//! and an isochoric stroke multiplies by E^alpha = diag(exp(lambda_i t)).
//! One full cycle seen from the end of the cold stroke is
//! M^c = E^c T(c<-h) E^h T(h<-c); its row 0 is exactly (1, 0, 0, 0), so the
//! fixed point with c_0 = 1 reduces to a 3x3 linear solve.

use crate::error::{OttoError, Result};
use crate::linalg::{cr, C64, M2, M4, ONE, ZERO};
use crate::lindblad::{global_spectrum, propagate, BathSpec, LiouvillianSpectrum};
use crate::qubit::{
    eigenframe, from_eigenbasis, to_eigenbasis, BasisTag, CycleParams, DensityMatrix, EigenFrame,
};

/// Which limit cycle a solution describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitCycleKind {
    Nelc,
    Elc,
}

/// The one-cycle map in coefficient space, with its ingredients cached.
#[derive(Debug, Clone, Copy)]
pub struct CycleMapMatrices {
    /// Cycle map seen from the end of the hot stroke.
    pub m_h: M4,
    /// Cycle map seen from the end of the cold stroke.
    pub m_c: M4,
    /// Overlap matrix T(c<-h).
    pub t_ch: M4,
    /// Overlap matrix T(h<-c).
    pub t_hc: M4,
    pub frame_h: EigenFrame,
    pub frame_c: EigenFrame,
    pub spec_h: LiouvillianSpectrum,
    pub spec_c: LiouvillianSpectrum,
    /// exp(lambda_i^h t_h) factors.
    pub e_h: [C64; 4],
    /// exp(lambda_i^c t_c) factors.
    pub e_c: [C64; 4],
}

/// Per-stroke limit-cycle states and their expansion coefficients.
#[derive(Debug, Clone, Copy)]
pub struct LimitCycleSolution {
    pub rho_h: DensityMatrix,
    pub rho_c: DensityMatrix,
    pub coeffs_h: [C64; 4],
    pub coeffs_c: [C64; 4],
    pub kind: LimitCycleKind,
}

/// Diagnostics of fixed-point quality and approach rate.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub cycles_run: usize,
    /// Trace-norm distance between successive cycle states (or between the
    /// solved fixed point and its one-cycle image).
    pub final_residual: f64,
    /// Modulus of the largest non-peripheral eigenvalue of the cycle map.
    pub subdominant_modulus: f64,
    /// Per-cycle residual history (iteration paths only).
    pub residuals: Vec<f64>,
}

/// Overlap matrix T(to<-from)_{j,i} between two strokes' spectral frames.
fn overlap_matrix(
    to_spec: &LiouvillianSpectrum,
    to_frame: &EigenFrame,
    from_spec: &LiouvillianSpectrum,
    from_frame: &EigenFrame,
) -> M4 {
    // V = U_to^T U_from rotates from-eigenbasis matrices into the to-eigenbasis
    let v = to_frame.u_mat().transpose() * from_frame.u_mat();
    let vt = v.transpose();
    let mut t = M4::zero();
    for j in 0..4 {
        for i in 0..4 {
            let rotated = v * from_spec.right_mats[i] * vt;
            t.0[j][i] = (to_spec.left_mats[j] * rotated).trace();
        }
    }
    t
}

/// Build the one-cycle coefficient maps for both stroke endpoints.
pub fn build_cycle_map(params: &CycleParams, bath: &BathSpec) -> Result<CycleMapMatrices> {
    if params.t_h <= 0.0 || params.t_c <= 0.0 {
        return Err(OttoError::InvalidParams(format!(
            "stroke durations t_h = {}, t_c = {} must be > 0",
            params.t_h, params.t_c
        )));
    }
    let frame_h = eigenframe(params.omega_h, params.g_h, BasisTag::EigenH)?;
    let frame_c = eigenframe(params.omega_c, params.g_c, BasisTag::EigenC)?;
    let spec_h = global_spectrum(&frame_h, params.beta_h, bath)?;
    let spec_c = global_spectrum(&frame_c, params.beta_c, bath)?;
    let t_ch = overlap_matrix(&spec_c, &frame_c, &spec_h, &frame_h);
    let t_hc = overlap_matrix(&spec_h, &frame_h, &spec_c, &frame_c);
    let e_h: [C64; 4] = core::array::from_fn(|i| (spec_h.eigenvalues[i] * cr(params.t_h)).exp());
    let e_c: [C64; 4] = core::array::from_fn(|i| (spec_c.eigenvalues[i] * cr(params.t_c)).exp());
    let eh = M4::diag(&e_h);
    let ec = M4::diag(&e_c);
    let m_c = ec * t_ch * eh * t_hc;
    let m_h = eh * t_hc * ec * t_ch;
    Ok(CycleMapMatrices {
        m_h,
        m_c,
        t_ch,
        t_hc,
        frame_h,
        frame_c,
        spec_h,
        spec_c,
        e_h,
        e_c,
    })
}

/// Reconstruct the physical state sum_i c_i rho_i in the Original basis.
fn reconstruct(
    coeffs: &[C64; 4],
    spec: &LiouvillianSpectrum,
    frame: &EigenFrame,
) -> Result<DensityMatrix> {
    let mut m = M2::zero();
    for i in 0..4 {
        m = m + spec.right_mats[i].scale(coeffs[i]);
    }
    let m = m.hermitize();
    let min_ev = m.herm_eigvals()[0];
    if min_ev < -1e-9 {
        return Err(OttoError::Numerical(format!(
            "reconstructed limit-cycle state has eigenvalue {min_ev:.3e}"
        )));
    }
    // clip sub-tolerance negativity so downstream validation stays strict
    let tr = m.trace().re;
    let m = m.scale(cr(1.0 / tr));
    let tilde = DensityMatrix::new(clip_state(m), frame.tag)?;
    from_eigenbasis(&tilde, frame)
}

/// Remove eigenvalue negativity below the reconstruction tolerance.
fn clip_state(m: M2) -> M2 {
    let ev = m.herm_eigvals();
    if ev[0] >= 0.0 {
        return m;
    }
    // mix with the identity just enough to lift the negative eigenvalue
    let eps = -ev[0] / (0.5 - ev[0]);
    (m.scale(cr(1.0 - eps)) + M2::identity().scale(cr(0.5 * eps))).hermitize()
}

/// Solve the NELC fixed point from the kernel of (I - M^c) with c_0 = 1.
pub fn solve_nelc(
    params: &CycleParams,
    bath: &BathSpec,
) -> Result<(LimitCycleSolution, ConvergenceReport)> {
    let mats = build_cycle_map(params, bath)?;
    let (_, subdominant) = floquet_check(&mats);
    // row 0 of M^c is (1,0,0,0): with c_0 = 1 the decaying components solve
    // (I - M[1:,1:]) x = M[1:,0]
    let mut a = [[ZERO; 4]; 3];
    let mut b = [ZERO; 3];
    for r in 0..3 {
        for cix in 0..3 {
            a[r][cix] = -mats.m_c.0[r + 1][cix + 1];
        }
        a[r][r] += ONE;
        b[r] = mats.m_c.0[r + 1][0];
    }
    let x = crate::linalg::solve_n(&a, &b, 3)
        .ok_or_else(|| OttoError::Degenerate("(I - M) restricted block is singular".into()))?;
    let coeffs_c = [ONE, x[0], x[1], x[2]];
    // carry through the quench and hot stroke: c^h = E^h T(h<-c) c^c
    let mut coeffs_h = mats.t_hc.matvec(&coeffs_c);
    for i in 0..4 {
        coeffs_h[i] *= mats.e_h[i];
    }
    let rho_c = reconstruct(&coeffs_c, &mats.spec_c, &mats.frame_c)?;
    let rho_h = reconstruct(&coeffs_h, &mats.spec_h, &mats.frame_h)?;
    // residual: one full cycle applied to the solved state
    let cycled = apply_cycle(&rho_c, &mats, params)?;
    let report = ConvergenceReport {
        cycles_run: 0,
        final_residual: cycled.trace_distance(&rho_c),
        subdominant_modulus: subdominant,
        residuals: Vec::new(),
    };
    Ok((
        LimitCycleSolution {
            rho_h,
            rho_c,
            coeffs_h,
            coeffs_c,
            kind: LimitCycleKind::Nelc,
        },
        report,
    ))
}

/// The equilibrating limit cycle: each stroke fully relaxes to its
/// stationary state rho_0, so the coefficients are exactly (1, 0, 0, 0).
pub fn elc_state(params: &CycleParams, bath: &BathSpec) -> Result<LimitCycleSolution> {
    let frame_h = eigenframe(params.omega_h, params.g_h, BasisTag::EigenH)?;
    let frame_c = eigenframe(params.omega_c, params.g_c, BasisTag::EigenC)?;
    let spec_h = global_spectrum(&frame_h, params.beta_h, bath)?;
    let spec_c = global_spectrum(&frame_c, params.beta_c, bath)?;
    let unit = [ONE, ZERO, ZERO, ZERO];
    Ok(LimitCycleSolution {
        rho_h: reconstruct(&unit, &spec_h, &frame_h)?,
        rho_c: reconstruct(&unit, &spec_c, &frame_c)?,
        coeffs_h: unit,
        coeffs_c: unit,
        kind: LimitCycleKind::Elc,
    })
}

/// One full cycle applied to an end-of-cold-stroke state in the Original
/// basis: hot stroke first, then cold, per the cycle ordering.
pub fn apply_cycle(
    rho: &DensityMatrix,
    mats: &CycleMapMatrices,
    params: &CycleParams,
) -> Result<DensityMatrix> {
    let h_in = to_eigenbasis(rho, &mats.frame_h)?;
    let h_out = propagate(&h_in, &mats.spec_h, params.t_h)?;
    let mid = from_eigenbasis(&h_out, &mats.frame_h)?;
    let c_in = to_eigenbasis(&mid, &mats.frame_c)?;
    let c_out = propagate(&c_in, &mats.spec_c, params.t_c)?;
    from_eigenbasis(&c_out, &mats.frame_c)
}

/// Brute-force power iteration of the cycle map from an arbitrary state.
///
/// Returns the end-of-cycle trajectory and a convergence report whose decay
/// ratio estimates the subdominant Floquet modulus.
pub fn iterate_cycle(
    rho0: &DensityMatrix,
    params: &CycleParams,
    bath: &BathSpec,
    n_cycles: usize,
) -> Result<(Vec<DensityMatrix>, ConvergenceReport)> {
    if n_cycles == 0 {
        return Err(OttoError::InvalidParams("n_cycles must be >= 1".into()));
    }
    rho0.expect_tag(BasisTag::Original)?;
    let mats = build_cycle_map(params, bath)?;
    let (_, subdominant) = floquet_check(&mats);
    let mut trajectory = Vec::with_capacity(n_cycles);
    let mut residuals = Vec::with_capacity(n_cycles);
    let mut current = *rho0;
    for _ in 0..n_cycles {
        let next = apply_cycle(&current, &mats, params)?;
        residuals.push(next.trace_distance(&current));
        trajectory.push(next);
        current = next;
        if *residuals.last().unwrap() < 1e-15 {
            break;
        }
    }
    let report = ConvergenceReport {
        cycles_run: trajectory.len(),
        final_residual: *residuals.last().unwrap(),
        subdominant_modulus: subdominant,
        residuals,
    };
    Ok((trajectory, report))
}

/// Count peripheral eigenvalues (|lambda| within 1e-10 of 1) of the cycle
/// map and report the largest remaining modulus.
///
/// Root-finding resolves an m-fold eigenvalue only to ~eps^(1/m), so nearby
/// roots are first merged into clusters and judged by their centroid, which
/// recovers the full coefficient accuracy for degenerate maps (the tau -> 0
/// limit is exactly the identity map).
pub fn floquet_check(mats: &CycleMapMatrices) -> (usize, f64) {
    // row 0 of M is exactly (1,0,0,0): M is block lower-triangular with the
    // trivial unit eigenvalue on top. Deflate it exactly by zeroing its row
    // and column, leaving the decaying 3x3 block plus one padded zero mode.
    let mut deflated = mats.m_c;
    for k in 0..4 {
        deflated.0[0][k] = ZERO;
        deflated.0[k][0] = ZERO;
    }
    let mut ev = deflated.eigenvalues().to_vec();
    // drop the padded zero (any genuine mode that close to 0 is
    // interchangeable with it for both counts below)
    let k = (0..4)
        .min_by(|&i, &j| ev[i].norm().total_cmp(&ev[j].norm()))
        .unwrap();
    ev.remove(k);
    // greedy clustering with a radius well above the multiple-root blowup
    let mut clusters: Vec<Vec<C64>> = Vec::new();
    'next: for lam in ev {
        for cl in clusters.iter_mut() {
            let centroid = cl.iter().sum::<C64>() / cr(cl.len() as f64);
            if (lam - centroid).norm() < 1e-3 {
                cl.push(lam);
                continue 'next;
            }
        }
        clusters.push(vec![lam]);
    }
    // the deflated trivial eigenvalue is always peripheral
    let mut peripheral = 1;
    let mut subdominant: f64 = 0.0;
    for cl in &clusters {
        let centroid = if cl.len() == 3 {
            // all three decaying modes coalesced: their sum is the exact
            // matrix trace minus the deflated unit eigenvalue, so the
            // centroid is machine-precision accurate even though the
            // individual roots are only resolved to ~eps^(1/3)
            (mats.m_c.trace() - ONE) / cr(3.0)
        } else {
            cl.iter().sum::<C64>() / cr(cl.len() as f64)
        };
        if (centroid.norm() - 1.0).abs() < 1e-10 {
            peripheral += cl.len();
        } else {
            subdominant = subdominant.max(centroid.norm());
        }
    }
    (peripheral, subdominant)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gslc::gibbs_state;

    fn fig6_params(tau: f64) -> CycleParams {
        CycleParams::new(5.0, 1.0, 4.0, 1.0, 0.2, 1.0, tau, tau).unwrap()
    }

    #[test]
    fn identical_strokes_have_trivial_overlaps() {
        // g_h = g_c, omega_h = omega_c: U_h^T U_c = I, so the quench does
        // nothing in state space and the two overlap matrices are exact
        // inverses; the temperature-independent coherence block is delta_jk
        let p = CycleParams::new(2.0, 2.0, 1.0, 1.0, 0.2, 1.0, 5.0, 5.0).unwrap();
        let mats = build_cycle_map(&p, &BathSpec::default()).unwrap();
        let prod = mats.t_ch * mats.t_hc;
        for j in 0..4 {
            for i in 0..4 {
                let expect = if i == j { ONE } else { ZERO };
                assert!(
                    (prod.0[j][i] - expect).norm() < 1e-10,
                    "T(c<-h) T(h<-c) entry ({j},{i}) = {:?}",
                    prod.0[j][i]
                );
            }
        }
        for (j, i) in [(1, 1), (2, 2), (1, 2), (2, 1), (0, 1), (0, 2), (0, 3)] {
            let expect = if i == j { ONE } else { ZERO };
            assert!((mats.t_ch.0[j][i] - expect).norm() < 1e-10);
        }
    }

    #[test]
    fn cycle_map_row_zero_is_trace_row() {
        let mats = build_cycle_map(&fig6_params(10.0), &BathSpec::default()).unwrap();
        for (m, name) in [(&mats.m_c, "m_c"), (&mats.m_h, "m_h")] {
            assert!((m.0[0][0] - ONE).norm() < 1e-12, "{name}");
            for cix in 1..4 {
                assert!(m.0[0][cix].norm() < 1e-12, "{name} col {cix}");
            }
        }
    }

    #[test]
    fn cycle_map_is_primitive_at_reference_params() {
        let mats = build_cycle_map(&fig6_params(100.0), &BathSpec::default()).unwrap();
        let (peripheral, sub) = floquet_check(&mats);
        assert_eq!(peripheral, 1);
        assert!(sub > 0.0 && sub < 1.0);
    }

    #[test]
    fn zero_duration_map_is_unitary_and_flagged() {
        // vanishing stroke time: pure basis rotations, unimodular spectrum
        let mats = build_cycle_map(&fig6_params(1e-300), &BathSpec::default()).unwrap();
        let (peripheral, _) = floquet_check(&mats);
        assert_eq!(peripheral, 4);
        assert!(build_cycle_map(&fig6_params(0.0), &BathSpec::default()).is_err());
    }

    #[test]
    fn elc_equals_gibbs() {
        let p = fig6_params(1.0);
        let sol = elc_state(&p, &BathSpec::default()).unwrap();
        let gh = gibbs_state(p.omega_h, p.g_h, p.beta_h).unwrap();
        let gc = gibbs_state(p.omega_c, p.g_c, p.beta_c).unwrap();
        assert!((*sol.rho_h.entries() - *gh.entries()).max_abs() < 1e-10);
        assert!((*sol.rho_c.entries() - *gc.entries()).max_abs() < 1e-10);
        assert_eq!(sol.coeffs_c, [ONE, ZERO, ZERO, ZERO]);
    }

    #[test]
    fn nelc_fixed_point_is_periodic() {
        let p = fig6_params(100.0);
        let bath = BathSpec::default();
        let (sol, report) = solve_nelc(&p, &bath).unwrap();
        assert!(report.final_residual < 1e-9);
        // hot and cold states are genuinely distinct
        assert!(sol.rho_h.trace_distance(&sol.rho_c) > 1e-6);
        // half-cycle interchange: hot stroke maps rho_c to rho_h
        let mats = build_cycle_map(&p, &bath).unwrap();
        let h_in = to_eigenbasis(&sol.rho_c, &mats.frame_h).unwrap();
        let h_out = propagate(&h_in, &mats.spec_h, p.t_h).unwrap();
        let mid = from_eigenbasis(&h_out, &mats.frame_h).unwrap();
        assert!(mid.trace_distance(&sol.rho_h) < 1e-9);
    }

    #[test]
    fn nelc_matches_iteration_oracle() {
        let p = fig6_params(100.0);
        let bath = BathSpec::default();
        let (sol, _) = solve_nelc(&p, &bath).unwrap();
        for rho0 in [
            DensityMatrix::maximally_mixed(BasisTag::Original),
            DensityMatrix::ground_projector(BasisTag::Original),
        ] {
            let (traj, _) = iterate_cycle(&rho0, &p, &bath, 10_000).unwrap();
            let last = traj.last().unwrap();
            assert!(last.trace_distance(&sol.rho_c) < 1e-8);
        }
    }

    #[test]
    fn nelc_long_time_approaches_elc() {
        let p = fig6_params(1e6);
        let bath = BathSpec::default();
        let (sol, _) = solve_nelc(&p, &bath).unwrap();
        let elc = elc_state(&p, &bath).unwrap();
        assert!((*sol.rho_h.entries() - *elc.rho_h.entries()).max_abs() < 1e-8);
        assert!((*sol.rho_c.entries() - *elc.rho_c.entries()).max_abs() < 1e-8);
    }

    #[test]
    fn nelc_short_time_freezes_the_state() {
        let p = fig6_params(1e-6);
        let (sol, _) = solve_nelc(&p, &BathSpec::default()).unwrap();
        assert!(sol.rho_h.trace_distance(&sol.rho_c) < 1e-6);
    }

    #[test]
    fn iteration_from_fixed_point_is_stationary() {
        let p = fig6_params(10.0);
        let bath = BathSpec::default();
        let (sol, _) = solve_nelc(&p, &bath).unwrap();
        let (_, report) = iterate_cycle(&sol.rho_c, &p, &bath, 1).unwrap();
        assert!(report.final_residual < 1e-12);
    }
}
