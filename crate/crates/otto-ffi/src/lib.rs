//! C ABI for the coupled quantum Otto cycle library.
//!
//! The interface mirrors `include/otto.h`: callers build opaque parameter
//! and bath handles, ask for the limit-cycle energy flows of one of the
//! three solvers (GSLC/ELC/NELC), and read plain-old-data results back.
//! Every fallible call returns an `OttoStatus`; results are written through
//! out-pointers only on `OTTO_OK`. Handles must be released with the
//! matching `_free` function and are not thread-safe to mutate concurrently
//! (they are immutable after construction, so shared reads are fine).

use std::ffi::{c_char, c_int};

use otto_core::limit_cycle::{elc_state, solve_nelc};
use otto_core::lindblad::BathSpec;
use otto_core::qubit::CycleParams;
use otto_core::thermo::{classify, dead_band, flows_for_pair, power, Regime};
use otto_core::OttoError;

/// Status codes shared with the C header.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OttoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    Degenerate = 3,
    Numerical = 4,
}

fn status_of(err: &OttoError) -> OttoStatus {
    match err {
        OttoError::InvalidParams(_) | OttoError::Config(_) => OttoStatus::InvalidParams,
        OttoError::Degenerate(_) => OttoStatus::Degenerate,
        _ => OttoStatus::Numerical,
    }
}

/// Opaque cycle-parameter handle.
pub struct OttoParams(CycleParams);

/// Opaque bath-spectrum handle.
pub struct OttoBath(BathSpec);

/// Energy flows and classification of one limit cycle, sign convention
/// "into the system". `figure_of_merit` and `power` are NaN outside the
/// regime where they are defined.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct OttoFlows {
    pub q_h: f64,
    pub q_c: f64,
    pub w: f64,
    /// 0 = none, 1 = engine, 2 = refrigerator.
    pub regime: c_int,
    /// Efficiency (engine) or COP (refrigerator); NaN otherwise.
    pub figure_of_merit: f64,
    /// Output power -W/(t_h + t_c) for an engine; NaN otherwise.
    pub power: f64,
}

fn fill_flows(
    params: &CycleParams,
    flows: &otto_core::thermo::EnergyFlows,
    with_power: bool,
    out: &mut OttoFlows,
) {
    let eps = dead_band(params);
    let report = classify(flows, eps);
    *out = OttoFlows {
        q_h: flows.q_h,
        q_c: flows.q_c,
        w: flows.w,
        regime: match report.regime {
            Regime::None => 0,
            Regime::Engine => 1,
            Regime::Refrigerator => 2,
        },
        figure_of_merit: report.figure_of_merit.unwrap_or(f64::NAN),
        power: if with_power && report.regime == Regime::Engine {
            power(flows, params.t_h, params.t_c, eps).unwrap_or(f64::NAN)
        } else {
            f64::NAN
        },
    };
}

/// Build a cycle-parameter handle.
///
/// Validation rules: all values finite, `omega_h >= omega_c > 0`,
/// `g_alpha >= 0`, `0 < beta_h < beta_c`, stroke durations `>= 0`.
/// On success writes a handle to `*out` which must be released with
/// [`otto_params_free`].
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn otto_params_new(
    omega_h: f64,
    omega_c: f64,
    g_h: f64,
    g_c: f64,
    beta_h: f64,
    beta_c: f64,
    t_h: f64,
    t_c: f64,
    out: *mut *mut OttoParams,
) -> OttoStatus {
    if out.is_null() {
        return OttoStatus::NullPointer;
    }
    match CycleParams::new(omega_h, omega_c, g_h, g_c, beta_h, beta_c, t_h, t_c) {
        Ok(p) => {
            *out = Box::into_raw(Box::new(OttoParams(p)));
            OttoStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Release a parameter handle; NULL is ignored.
///
/// # Safety
/// `params` must be NULL or a pointer returned by [`otto_params_new`] that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn otto_params_free(params: *mut OttoParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Build a bath handle from an overall rate scale and an exponential
/// spectral-density cutoff (both must be positive and finite).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn otto_bath_new(
    gamma_scale: f64,
    omega_cutoff: f64,
    out: *mut *mut OttoBath,
) -> OttoStatus {
    if out.is_null() {
        return OttoStatus::NullPointer;
    }
    match BathSpec::new(gamma_scale, omega_cutoff) {
        Ok(b) => {
            *out = Box::into_raw(Box::new(OttoBath(b)));
            OttoStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Build a bath handle with the default scale (0.01) and cutoff (1e6).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn otto_bath_default(out: *mut *mut OttoBath) -> OttoStatus {
    otto_bath_new(BathSpec::default().gamma_scale, BathSpec::default().omega_cutoff, out)
}

/// Release a bath handle; NULL is ignored.
///
/// # Safety
/// `bath` must be NULL or a pointer returned by [`otto_bath_new`] /
/// [`otto_bath_default`] that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn otto_bath_free(bath: *mut OttoBath) {
    if !bath.is_null() {
        drop(Box::from_raw(bath));
    }
}

/// Energy flows of the Gibbs-state limit cycle (no bath needed: the stroke
/// states are exact Gibbs states). GSLC has no duration, so `power` is NaN.
///
/// # Safety
/// `params` must be a live handle from [`otto_params_new`]; `out` must
/// point to writable storage for one `OttoFlows`.
#[no_mangle]
pub unsafe extern "C" fn otto_gslc_flows(
    params: *const OttoParams,
    out: *mut OttoFlows,
) -> OttoStatus {
    let (Some(params), Some(out)) = (params.as_ref(), out.as_mut()) else {
        return OttoStatus::NullPointer;
    };
    let p = &params.0;
    match otto_core::gslc::gslc_limit_cycle(p)
        .and_then(|pair| flows_for_pair(p, &pair.rho_h, &pair.rho_c))
    {
        Ok(flows) => {
            fill_flows(p, &flows, false, out);
            OttoStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Energy flows of the equilibrating limit cycle (infinite stroke duration
/// under the global master equation). `power` is NaN.
///
/// # Safety
/// `params` and `bath` must be live handles; `out` must point to writable
/// storage for one `OttoFlows`.
#[no_mangle]
pub unsafe extern "C" fn otto_elc_flows(
    params: *const OttoParams,
    bath: *const OttoBath,
    out: *mut OttoFlows,
) -> OttoStatus {
    let (Some(params), Some(bath), Some(out)) = (params.as_ref(), bath.as_ref(), out.as_mut())
    else {
        return OttoStatus::NullPointer;
    };
    let p = &params.0;
    match elc_state(p, &bath.0).and_then(|sol| flows_for_pair(p, &sol.rho_h, &sol.rho_c)) {
        Ok(flows) => {
            fill_flows(p, &flows, false, out);
            OttoStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Energy flows of the non-equilibrating limit cycle at the handle's finite
/// stroke durations (`t_h`, `t_c` must be > 0). For engine points `power`
/// is the per-period output `-W / (t_h + t_c)`.
///
/// # Safety
/// `params` and `bath` must be live handles; `out` must point to writable
/// storage for one `OttoFlows`.
#[no_mangle]
pub unsafe extern "C" fn otto_nelc_flows(
    params: *const OttoParams,
    bath: *const OttoBath,
    out: *mut OttoFlows,
) -> OttoStatus {
    let (Some(params), Some(bath), Some(out)) = (params.as_ref(), bath.as_ref(), out.as_mut())
    else {
        return OttoStatus::NullPointer;
    };
    let p = &params.0;
    match solve_nelc(p, &bath.0).and_then(|(sol, _)| flows_for_pair(p, &sol.rho_h, &sol.rho_c)) {
        Ok(flows) => {
            fill_flows(p, &flows, true, out);
            OttoStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Static, NUL-terminated crate version string (no ownership transfer).
#[no_mangle]
pub extern "C" fn otto_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn otto_status_message(status: OttoStatus) -> *const c_char {
    let msg: &'static str = match status {
        OttoStatus::Ok => "ok\0",
        OttoStatus::NullPointer => "null pointer argument\0",
        OttoStatus::InvalidParams => "invalid parameters\0",
        OttoStatus::Degenerate => "degenerate spectrum: no unique limit cycle\0",
        OttoStatus::Numerical => "numerical failure\0",
    };
    msg.as_ptr() as *const c_char
}
