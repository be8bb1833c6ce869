//! Physical parameterization, the coupled qubit Hamiltonian, its
//! diagonalization, and basis-change utilities.
//!
//! The working system is a single qubit with an internal coupling `g` between
//! its bare levels,
//!
//! ```text
//!     H = [ 0  g ]
//!         [ g  w ]
//! ```
//!
//! with eigenvalues e± = (w ± sqrt(4 g^2 + w^2)) / 2 and mixing angle
//! theta = arctan(e+ / g). States carry a basis tag so that eigenbasis
//! bookkeeping mistakes fail loudly instead of silently producing wrong
//! energy flows.

use crate::error::{OttoError, Result};
use crate::linalg::{cr, M2};

/// Which basis a density matrix is currently expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisTag {
    /// The common (bare) basis shared by both strokes.
    Original,
    /// Eigenbasis of the hot-stroke Hamiltonian.
    EigenH,
    /// Eigenbasis of the cold-stroke Hamiltonian.
    EigenC,
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(OttoError::InvalidParams(format!("{name} = {v} is not finite")))
    }
}

/// The six physical cycle parameters plus stroke durations.
///
/// Units: hbar = k_B = 1. Convention: the hot bath is hotter
/// (beta_h < beta_c) and omega_h >= omega_c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleParams {
    pub omega_h: f64,
    pub omega_c: f64,
    pub g_h: f64,
    pub g_c: f64,
    pub beta_h: f64,
    pub beta_c: f64,
    /// Hot-stroke duration; used only by the NELC paths.
    pub t_h: f64,
    /// Cold-stroke duration; used only by the NELC paths.
    pub t_c: f64,
}

impl CycleParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        omega_h: f64,
        omega_c: f64,
        g_h: f64,
        g_c: f64,
        beta_h: f64,
        beta_c: f64,
        t_h: f64,
        t_c: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("omega_h", omega_h),
            ("omega_c", omega_c),
            ("g_h", g_h),
            ("g_c", g_c),
            ("beta_h", beta_h),
            ("beta_c", beta_c),
            ("t_h", t_h),
            ("t_c", t_c),
        ] {
            check_finite(name, v)?;
        }
        if omega_h <= 0.0 || omega_c <= 0.0 {
            return Err(OttoError::InvalidParams(format!(
                "omega_h = {omega_h}, omega_c = {omega_c}: energies must be > 0"
            )));
        }
        if g_h < 0.0 || g_c < 0.0 {
            return Err(OttoError::InvalidParams(format!(
                "g_h = {g_h}, g_c = {g_c}: couplings must be >= 0"
            )));
        }
        if beta_h <= 0.0 || beta_c <= 0.0 {
            return Err(OttoError::InvalidParams(format!(
                "beta_h = {beta_h}, beta_c = {beta_c}: inverse temperatures must be > 0"
            )));
        }
        if beta_h >= beta_c {
            return Err(OttoError::InvalidParams(format!(
                "beta_h = {beta_h} must be < beta_c = {beta_c} (hot bath hotter)"
            )));
        }
        if omega_h < omega_c {
            return Err(OttoError::InvalidParams(format!(
                "omega_h = {omega_h} must be >= omega_c = {omega_c} by convention"
            )));
        }
        if t_h < 0.0 || t_c < 0.0 {
            return Err(OttoError::InvalidParams(format!(
                "t_h = {t_h}, t_c = {t_c}: durations must be >= 0"
            )));
        }
        Ok(CycleParams {
            omega_h,
            omega_c,
            g_h,
            g_c,
            beta_h,
            beta_c,
            t_h,
            t_c,
        })
    }

    /// (omega, g, beta) of the requested stroke.
    pub fn stroke(&self, tag: BasisTag) -> (f64, f64, f64) {
        match tag {
            BasisTag::EigenH => (self.omega_h, self.g_h, self.beta_h),
            BasisTag::EigenC => (self.omega_c, self.g_c, self.beta_c),
            BasisTag::Original => unreachable!("Original is not a stroke"),
        }
    }
}

/// 2x2 complex Hermitian unit-trace state tagged with its basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    entries: M2,
    basis_tag: BasisTag,
}

/// Hermiticity / trace tolerance for state validation.
pub const STATE_TOL: f64 = 1e-12;
/// Smallest admissible state eigenvalue (absorbs floating-point noise).
pub const POSITIVITY_TOL: f64 = -1e-10;

impl DensityMatrix {
    /// Validating constructor.
    pub fn new(entries: M2, basis_tag: BasisTag) -> Result<Self> {
        if entries.herm_residual() > STATE_TOL {
            return Err(OttoError::Numerical(format!(
                "state is not Hermitian (residual {:.3e})",
                entries.herm_residual()
            )));
        }
        let tr = entries.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(OttoError::Numerical(format!(
                "state trace {} + {}i is not 1",
                tr.re, tr.im
            )));
        }
        let min_ev = entries.hermitize().herm_eigvals()[0];
        if min_ev < POSITIVITY_TOL {
            return Err(OttoError::Numerical(format!(
                "state has negative eigenvalue {min_ev:.3e}"
            )));
        }
        Ok(DensityMatrix { entries, basis_tag })
    }

    /// Maximally mixed state.
    pub fn maximally_mixed(basis_tag: BasisTag) -> Self {
        DensityMatrix {
            entries: M2::identity().scale(cr(0.5)),
            basis_tag,
        }
    }

    /// Projector onto the bare ground level.
    pub fn ground_projector(basis_tag: BasisTag) -> Self {
        DensityMatrix {
            entries: M2::from_real([[1.0, 0.0], [0.0, 0.0]]),
            basis_tag,
        }
    }

    pub fn entries(&self) -> &M2 {
        &self.entries
    }

    pub fn basis_tag(&self) -> BasisTag {
        self.basis_tag
    }

    pub fn expect_tag(&self, expected: BasisTag) -> Result<()> {
        if self.basis_tag == expected {
            Ok(())
        } else {
            Err(OttoError::BasisMismatch {
                expected,
                found: self.basis_tag,
            })
        }
    }

    /// Trace distance (1/2)||rho - sigma||_1, ignoring basis tags.
    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        self.entries.trace_distance(&other.entries)
    }
}

/// Per-stroke diagonalization data of the coupled Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenFrame {
    pub omega: f64,
    pub g: f64,
    pub eps_minus: f64,
    pub eps_plus: f64,
    /// Mixing angle theta = arctan(eps_plus / g), radians.
    pub theta: f64,
    /// Delta = sqrt(g^2 + omega^2/4).
    pub delta: f64,
    /// omega_tilde = eps_plus - eps_minus = 2 Delta.
    pub omega_tilde: f64,
    /// Real orthogonal matrix with columns (P-, P+); identity when g = 0.
    pub u: [[f64; 2]; 2],
    /// Which stroke's eigenbasis this frame maps into.
    pub tag: BasisTag,
}

/// The coupled qubit Hamiltonian [[0, g], [g, omega]].
pub fn build_hamiltonian(omega: f64, g: f64) -> Result<M2> {
    check_finite("omega", omega)?;
    check_finite("g", g)?;
    if omega <= 0.0 {
        return Err(OttoError::InvalidParams(format!("omega = {omega} must be > 0")));
    }
    if g < 0.0 {
        return Err(OttoError::InvalidParams(format!("g = {g} must be >= 0")));
    }
    Ok(M2::from_real([[0.0, g], [g, omega]]))
}

/// Diagonalize H(omega, g) and package the per-stroke frame data.
///
/// `tag` records which stroke the eigenbasis belongs to (EigenH or EigenC).
/// At g = 0 exactly, the frame degenerates to the labeled identity
/// (P- = ground, P+ = excited), the continuous g -> 0+ limit of the
/// downstream physics even though theta itself jumps to pi/2.
pub fn eigenframe(omega: f64, g: f64, tag: BasisTag) -> Result<EigenFrame> {
    if tag == BasisTag::Original {
        return Err(OttoError::InvalidParams(
            "eigenframe tag must be EigenH or EigenC".into(),
        ));
    }
    build_hamiltonian(omega, g)?; // input validation
    let delta = (g * g + omega * omega / 4.0).sqrt();
    let eps_plus = omega / 2.0 + delta;
    let eps_minus = omega / 2.0 - delta;
    let omega_tilde = 2.0 * delta;
    let (theta, u) = if g == 0.0 {
        (std::f64::consts::FRAC_PI_2, [[1.0, 0.0], [0.0, 1.0]])
    } else {
        let theta = (eps_plus / g).atan();
        let (s, c) = theta.sin_cos();
        // columns: P- = (-sin, cos), P+ = (cos, sin)
        (theta, [[-s, c], [c, s]])
    };
    Ok(EigenFrame {
        omega,
        g,
        eps_minus,
        eps_plus,
        theta,
        delta,
        omega_tilde,
        u,
        tag,
    })
}

impl EigenFrame {
    pub fn u_mat(&self) -> M2 {
        M2::from_real(self.u)
    }
}

/// Rotate a state from the Original basis into the frame's eigenbasis:
/// rho_tilde = U^T rho U.
pub fn to_eigenbasis(rho: &DensityMatrix, frame: &EigenFrame) -> Result<DensityMatrix> {
    rho.expect_tag(BasisTag::Original)?;
    let u = frame.u_mat();
    let rotated = (u.transpose() * *rho.entries() * u).hermitize();
    DensityMatrix::new(rotated, frame.tag)
}

/// Rotate a state from the frame's eigenbasis back to the Original basis:
/// rho = U rho_tilde U^T.
pub fn from_eigenbasis(rho: &DensityMatrix, frame: &EigenFrame) -> Result<DensityMatrix> {
    rho.expect_tag(frame.tag)?;
    let u = frame.u_mat();
    let rotated = (u * *rho.entries() * u.transpose()).hermitize();
    DensityMatrix::new(rotated, BasisTag::Original)
}
