//! Energy flows, operating-regime classification, efficiency, COP, power,
//! and the coherence-ratio performance predicates.
//!
//! Sign convention: every flow is positive when energy enters the system.
//! The first law W + Q_h + Q_c = 0 then holds identically. An engine has
//! (W < 0, Q_h > 0, Q_c < 0) with efficiency eta = -W/Q_h; a refrigerator
//! has (W > 0, Q_h < 0, Q_c > 0) with COP xi = Q_c/W. All other sign
//! patterns cannot run as a thermal machine.

use std::cmp::Ordering;

use crate::error::{OttoError, Result};
use crate::gslc::coherence_f;
use crate::linalg::M2;
use crate::qubit::{BasisTag, CycleParams, DensityMatrix};

/// Heats and works of one full cycle, signed into the system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyFlows {
    pub q_h: f64,
    pub q_c: f64,
    /// Work of the hot-to-cold quench.
    pub w_1: f64,
    /// Work of the cold-to-hot quench.
    pub w_2: f64,
    /// Total work w_1 + w_2.
    pub w: f64,
}

/// Three-way machine taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Engine,
    Refrigerator,
    None,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Engine => "engine",
            Regime::Refrigerator => "refrigerator",
            Regime::None => "none",
        }
    }
}

/// Classification outcome with the applicable figure of merit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport {
    pub regime: Regime,
    /// eta for Engine, xi for Refrigerator, absent for None.
    pub figure_of_merit: Option<f64>,
    /// Output power, present only when durations were supplied (engines only).
    pub power: Option<f64>,
}

/// Dead-band below which a flow counts as zero, scaled to the problem's
/// energy: eps = 1e-12 max(omega_h, omega_c).
pub fn dead_band(params: &CycleParams) -> f64 {
    1e-12 * params.omega_h.max(params.omega_c)
}

/// Heats and works from a pair of stroke states and Hamiltonians.
pub fn energy_flows(
    rho_h: &DensityMatrix,
    rho_c: &DensityMatrix,
    h_h: &M2,
    h_c: &M2,
) -> Result<EnergyFlows> {
    rho_h.expect_tag(BasisTag::Original)?;
    rho_c.expect_tag(BasisTag::Original)?;
    let diff = *rho_h.entries() - *rho_c.entries();
    let q_h = (*h_h * diff).trace();
    let q_c = (*h_c * diff).trace() * crate::linalg::cr(-1.0);
    let w_1 = ((*h_c - *h_h) * *rho_h.entries()).trace();
    let w_2 = ((*h_h - *h_c) * *rho_c.entries()).trace();
    for (name, v) in [("Q_h", q_h), ("Q_c", q_c), ("W_1", w_1), ("W_2", w_2)] {
        if v.im.abs() > 1e-12 {
            return Err(OttoError::Numerical(format!(
                "{name} has imaginary residue {:.3e}",
                v.im
            )));
        }
    }
    Ok(EnergyFlows {
        q_h: q_h.re,
        q_c: q_c.re,
        w_1: w_1.re,
        w_2: w_2.re,
        w: w_1.re + w_2.re,
    })
}

/// Flows of a state pair under the cycle's own two Hamiltonians.
pub fn flows_for_pair(
    params: &CycleParams,
    rho_h: &DensityMatrix,
    rho_c: &DensityMatrix,
) -> Result<EnergyFlows> {
    let h_h = crate::qubit::build_hamiltonian(params.omega_h, params.g_h)?;
    let h_c = crate::qubit::build_hamiltonian(params.omega_c, params.g_c)?;
    energy_flows(rho_h, rho_c, &h_h, &h_c)
}

/// Classify the operating regime with a dead-band on each flow.
pub fn classify(flows: &EnergyFlows, eps_flow: f64) -> RegimeReport {
    let pos = |x: f64| x > eps_flow;
    let neg = |x: f64| x < -eps_flow;
    if neg(flows.w) && pos(flows.q_h) && neg(flows.q_c) {
        RegimeReport {
            regime: Regime::Engine,
            figure_of_merit: Some(-flows.w / flows.q_h),
            power: None,
        }
    } else if pos(flows.w) && neg(flows.q_h) && pos(flows.q_c) {
        RegimeReport {
            regime: Regime::Refrigerator,
            figure_of_merit: Some(flows.q_c / flows.w),
            power: None,
        }
    } else {
        RegimeReport {
            regime: Regime::None,
            figure_of_merit: None,
            power: None,
        }
    }
}

/// Engine efficiency eta = -W/Q_h; errors outside the engine regime.
pub fn efficiency(flows: &EnergyFlows, eps_flow: f64) -> Result<f64> {
    let report = classify(flows, eps_flow);
    match report.regime {
        Regime::Engine => Ok(report.figure_of_merit.unwrap()),
        other => Err(OttoError::WrongRegime {
            required: "engine",
            found: other.as_str().into(),
        }),
    }
}

/// Refrigerator COP xi = Q_c/W; errors outside the refrigerator regime.
pub fn cop(flows: &EnergyFlows, eps_flow: f64) -> Result<f64> {
    let report = classify(flows, eps_flow);
    match report.regime {
        Regime::Refrigerator => Ok(report.figure_of_merit.unwrap()),
        other => Err(OttoError::WrongRegime {
            required: "refrigerator",
            found: other.as_str().into(),
        }),
    }
}

/// Output power P = -W / (t_h + t_c), positive in the engine regime.
pub fn power(flows: &EnergyFlows, t_h: f64, t_c: f64, eps_flow: f64) -> Result<f64> {
    if t_h + t_c <= 0.0 {
        return Err(OttoError::InvalidParams(format!(
            "total duration {} must be > 0",
            t_h + t_c
        )));
    }
    efficiency(flows, eps_flow)?; // engine-regime gate
    Ok(-flows.w / (t_h + t_c))
}

/// Carnot efficiency bound 1 - beta_h/beta_c.
pub fn carnot_eta(params: &CycleParams) -> f64 {
    1.0 - params.beta_h / params.beta_c
}

/// Carnot COP bound beta_h / (beta_c - beta_h).
pub fn carnot_xi(params: &CycleParams) -> f64 {
    params.beta_h / (params.beta_c - params.beta_h)
}

/// Uncoupled Otto efficiency 1 - omega_c/omega_h.
pub fn eta_otto(params: &CycleParams) -> f64 {
    1.0 - params.omega_c / params.omega_h
}

/// Uncoupled Otto COP omega_c / (omega_h - omega_c); infinite at equal
/// frequencies.
pub fn xi_otto(params: &CycleParams) -> f64 {
    params.omega_c / (params.omega_h - params.omega_c)
}

/// Predicted orderings of the coupled figures of merit against their
/// uncoupled Otto counterparts, from the coupling ratios and the Gibbs
/// coherence sums alone.
#[derive(Debug, Clone, Copy)]
pub struct FRatioPredicates {
    pub f_h: f64,
    pub f_c: f64,
    /// g_h / omega_h.
    pub ratio_h: f64,
    /// g_c / omega_c.
    pub ratio_c: f64,
    /// (g_h - g_c) / (omega_h - omega_c); absent when omega_h = omega_c.
    pub slope_ratio: Option<f64>,
    /// Predicted eta_cp vs eta_Otto.
    pub eta_vs_otto: Ordering,
    /// Predicted xi_cp vs xi_Otto.
    pub xi_vs_otto: Ordering,
}

fn sign_band(x: f64, tol: f64) -> Ordering {
    if x > tol {
        Ordering::Greater
    } else if x < -tol {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

fn combine(a: Ordering, b: Ordering) -> Ordering {
    // ordering of the product of two signed quantities
    match (a, b) {
        (Ordering::Equal, _) | (_, Ordering::Equal) => Ordering::Equal,
        (x, y) if x == y => Ordering::Greater,
        _ => Ordering::Less,
    }
}

/// Evaluate the coupling-ratio / coherence predicates in the GSLC context.
///
/// Engine side: eta_cp >< eta_Otto follows the sign of
/// (g_h/omega_h - g_c/omega_c)(f_h - f_c). Refrigerator side: xi_cp >< xi_Otto
/// follows the sign of ((g_h - g_c)/(omega_h - omega_c) - g_c/omega_c)(f_h - f_c).
/// At omega_h = omega_c the comparison degenerates to the special-case
/// closed forms (eta_Otto = 0, xi_Otto infinite).
pub fn f_ratio_predicates(params: &CycleParams, tol: f64) -> FRatioPredicates {
    let f_h = coherence_f(params.omega_h, params.g_h, params.beta_h);
    let f_c = coherence_f(params.omega_c, params.g_c, params.beta_c);
    let ratio_h = params.g_h / params.omega_h;
    let ratio_c = params.g_c / params.omega_c;
    let df = sign_band(f_h - f_c, tol);
    if (params.omega_h - params.omega_c).abs() <= tol {
        // special case: eta_cp = 1 - g_c/g_h > eta_Otto = 0 whenever the
        // couplings differ; xi_cp finite < xi_Otto infinite
        let dg = sign_band(params.g_h - params.g_c, tol);
        return FRatioPredicates {
            f_h,
            f_c,
            ratio_h,
            ratio_c,
            slope_ratio: None,
            eta_vs_otto: if dg == Ordering::Equal {
                Ordering::Equal
            } else {
                Ordering::Greater
            },
            xi_vs_otto: if dg == Ordering::Equal {
                Ordering::Equal
            } else {
                Ordering::Less
            },
        };
    }
    let slope = (params.g_h - params.g_c) / (params.omega_h - params.omega_c);
    FRatioPredicates {
        f_h,
        f_c,
        ratio_h,
        ratio_c,
        slope_ratio: Some(slope),
        eta_vs_otto: combine(sign_band(ratio_h - ratio_c, tol), df),
        xi_vs_otto: combine(sign_band(slope - ratio_c, tol), df),
    }
}
