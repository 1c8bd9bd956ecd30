// Copyright 2026 catkerr Contributors
// SPDX-License-Identifier: Apache-2.0

//! C ABI over `catkerr`.
//!
//! Every entry point returns a [`CkStatus`]; results go through out
//! pointers. Handles are opaque and released with the matching `_free`
//! function. The message of the last failure on the calling thread is
//! available from [`ck_last_error`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use catkerr::lindblad::{
    steady_state, CollapseOp, EvolutionProblem, Hamiltonian, SteadyStateMethod, SteadyStateOptions,
};
use catkerr::model::{build_h0, lossy_eigen_amplitude};
use catkerr::observables::{fidelity_pair, mean_photon, parity_expectation, wigner, GridSpec};
use catkerr::protocols::{
    run_adiabatic_init, run_gate_x, run_gate_z, run_gate_zz, run_transitionless_init, CdVariant, GateXParams,
    GateZParams, GateZzParams, InitParams, ProtocolReport, RunOptions,
};
use catkerr::{cat_state, coherent_state, DensityMatrix, Error, ModelSpec, Operator, Parity, C64};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    /// Stiffness, accuracy loss or missing convergence.
    Numerical = 4,
    Io = 5,
    Panic = 6,
}

impl From<&Error> for CkStatus {
    fn from(e: &Error) -> Self {
        if e.is_numerical() {
            return CkStatus::Numerical;
        }
        match e {
            Error::Domain(_) | Error::IllConditionedBasis { .. } | Error::TruncationInadequate { .. } => {
                CkStatus::Domain
            }
            Error::Io(_) => CkStatus::Io,
            _ => CkStatus::InvalidArgument,
        }
    }
}

/// Physical parameters of one resonator.
pub struct CkModel {
    spec: ModelSpec,
}

/// Density matrix of one mode (or two, for ZZ results).
pub struct CkDensity {
    rho: DensityMatrix,
}

/// Scalar outcome of a protocol run.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CkProtocolResult {
    /// `<psi|rho|psi>`.
    pub fidelity: f64,
    pub root_fidelity: f64,
    pub duration: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), (CkStatus, String)>) -> CkStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CkStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CkStatus::Panic
        }
    }
}

fn lift(e: Error) -> (CkStatus, String) {
    (CkStatus::from(&e), e.to_string())
}

fn null(name: &str) -> (CkStatus, String) {
    (CkStatus::NullPointer, format!("{name} is null"))
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, (CkStatus, String)> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, (CkStatus, String)> {
    p.as_mut().ok_or_else(|| null(name))
}

fn parity(code: i32) -> Result<Parity, (CkStatus, String)> {
    match code {
        0 => Ok(Parity::Even),
        1 => Ok(Parity::Odd),
        _ => Err((CkStatus::InvalidArgument, format!("parity must be 0 (even) or 1 (odd), got {code}"))),
    }
}

/// Message of the last failure on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn ck_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn ck_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}

// Models.

/// `H0 = -K a+^2 a^2 + Ep a+^2 + Ep* a^2` with loss `kappa` and `n_fock` levels.
#[no_mangle]
pub unsafe extern "C" fn ck_model_new(
    k: f64,
    ep_re: f64,
    ep_im: f64,
    kappa: f64,
    n_fock: usize,
    model: *mut *mut CkModel,
) -> CkStatus {
    guard(|| {
        let slot = out(model, "model")?;
        let spec = ModelSpec::new(k, 0.0, n_fock).with_ep(C64::new(ep_re, ep_im)).with_kappa(kappa);
        spec.validate().map_err(lift)?;
        *slot = Box::into_raw(Box::new(CkModel { spec }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ck_model_free(model: *mut CkModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Steady-state coherent amplitude `alpha0` including loss.
#[no_mangle]
pub unsafe extern "C" fn ck_model_alpha0(model: *const CkModel, re: *mut f64, im: *mut f64) -> CkStatus {
    guard(|| {
        let m = deref(model, "model")?;
        let (re, im) = (out(re, "re")?, out(im, "im")?);
        let a = lossy_eigen_amplitude(&m.spec).map_err(lift)?.alpha0;
        *re = a.re;
        *im = a.im;
        Ok(())
    })
}

/// Long-time steady state from vacuum, integrating at most to `t_max`.
/// `method` is 0 for long-time integration and 1 for the Liouvillian null
/// space.
#[no_mangle]
pub unsafe extern "C" fn ck_steady_state(
    model: *const CkModel,
    method: i32,
    t_max: f64,
    convergence_eps: f64,
    state: *mut *mut CkDensity,
) -> CkStatus {
    guard(|| {
        let m = deref(model, "model")?;
        let slot = out(state, "state")?;
        let method = match method {
            0 => SteadyStateMethod::LongTime,
            1 => SteadyStateMethod::NullSpace,
            _ => return Err((CkStatus::InvalidArgument, format!("unknown steady-state method {method}"))),
        };
        let n = m.spec.n_fock;
        let h = build_h0(&m.spec).map_err(lift)?;
        let problem =
            EvolutionProblem::new(Hamiltonian::new(h), DensityMatrix::fock(0, n).map_err(lift)?, (0.0, t_max))
                .with_collapse(
                    CollapseOp::with_rate(m.spec.kappa, Operator::annihilation(n).map_err(lift)?).map_err(lift)?,
                );
        let opts = SteadyStateOptions { method, convergence_eps, ..Default::default() };
        let rho = steady_state(&problem, &opts).map_err(lift)?;
        *slot = Box::into_raw(Box::new(CkDensity { rho }));
        Ok(())
    })
}

// States.

#[no_mangle]
pub unsafe extern "C" fn ck_density_coherent(re: f64, im: f64, n_fock: usize, state: *mut *mut CkDensity) -> CkStatus {
    guard(|| {
        let slot = out(state, "state")?;
        let rho = coherent_state(C64::new(re, im), n_fock).map_err(lift)?.to_density();
        *slot = Box::into_raw(Box::new(CkDensity { rho }));
        Ok(())
    })
}

/// Cat state of parity 0 (even) or 1 (odd).
#[no_mangle]
pub unsafe extern "C" fn ck_density_cat(
    re: f64,
    im: f64,
    parity_code: i32,
    n_fock: usize,
    state: *mut *mut CkDensity,
) -> CkStatus {
    guard(|| {
        let slot = out(state, "state")?;
        let rho = cat_state(C64::new(re, im), parity(parity_code)?, n_fock).map_err(lift)?.to_density();
        *slot = Box::into_raw(Box::new(CkDensity { rho }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ck_density_free(state: *mut CkDensity) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Hilbert-space dimension, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ck_density_dim(state: *const CkDensity) -> usize {
    state.as_ref().map_or(0, |s| s.rho.dim())
}

/// Copies the matrix into `buf` as interleaved `(re, im)` pairs in
/// row-major order; `len` counts doubles and must be at least `2 dim^2`.
#[no_mangle]
pub unsafe extern "C" fn ck_density_elements(state: *const CkDensity, buf: *mut f64, len: usize) -> CkStatus {
    guard(|| {
        let s = deref(state, "state")?;
        let m = s.rho.matrix();
        let d = m.nrows();
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < 2 * d * d {
            return Err((CkStatus::InvalidArgument, format!("buffer holds {len} doubles, need {}", 2 * d * d)));
        }
        let buf = std::slice::from_raw_parts_mut(buf, 2 * d * d);
        for i in 0..d {
            for j in 0..d {
                buf[2 * (i * d + j)] = m[(i, j)].re;
                buf[2 * (i * d + j) + 1] = m[(i, j)].im;
            }
        }
        Ok(())
    })
}

// Observables.

#[no_mangle]
pub unsafe extern "C" fn ck_fidelity(
    state: *const CkDensity,
    target: *const CkDensity,
    fidelity: *mut f64,
    root_fidelity: *mut f64,
) -> CkStatus {
    guard(|| {
        let (s, t) = (deref(state, "state")?, deref(target, "target")?);
        let (f, r) = (out(fidelity, "fidelity")?, out(root_fidelity, "root_fidelity")?);
        let pair = fidelity_pair(&s.rho, &t.rho).map_err(lift)?;
        *f = pair.squared;
        *r = pair.root;
        Ok(())
    })
}

/// Parity, mean photon number and purity of a single-mode state.
#[no_mangle]
pub unsafe extern "C" fn ck_moments(
    state: *const CkDensity,
    parity: *mut f64,
    mean_n: *mut f64,
    purity: *mut f64,
) -> CkStatus {
    guard(|| {
        let s = deref(state, "state")?;
        if s.rho.dims().len() != 1 {
            return Err((CkStatus::InvalidArgument, "moments need a single-mode state".into()));
        }
        *out(parity, "parity")? = parity_expectation(&s.rho);
        *out(mean_n, "mean_n")? = mean_photon(&s.rho);
        *out(purity, "purity")? = s.rho.purity();
        Ok(())
    })
}

/// Wigner function on an `nx` by `np` grid, written to `buf` as
/// `buf[ip * nx + ix]`.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn ck_wigner(
    state: *const CkDensity,
    x_min: f64,
    x_max: f64,
    nx: usize,
    p_min: f64,
    p_max: f64,
    np: usize,
    buf: *mut f64,
    len: usize,
) -> CkStatus {
    guard(|| {
        let s = deref(state, "state")?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let need = nx.checked_mul(np).ok_or((CkStatus::InvalidArgument, "grid too large".to_string()))?;
        if len < need {
            return Err((CkStatus::InvalidArgument, format!("buffer holds {len} doubles, need {need}")));
        }
        let grid = wigner(&s.rho, &GridSpec { x_min, x_max, nx, p_min, p_max, np }).map_err(lift)?;
        std::slice::from_raw_parts_mut(buf, need).copy_from_slice(&grid.values);
        Ok(())
    })
}

// Protocols.

unsafe fn finish(
    report: ProtocolReport,
    result: *mut CkProtocolResult,
    state: *mut *mut CkDensity,
) -> Result<(), (CkStatus, String)> {
    *out(result, "result")? =
        CkProtocolResult { fidelity: report.fidelity, root_fidelity: report.root_fidelity, duration: report.duration };
    if let Some(slot) = state.as_mut() {
        *slot = match report.final_state {
            Some(rho) => Box::into_raw(Box::new(CkDensity { rho })),
            None => ptr::null_mut(),
        };
    }
    Ok(())
}

/// Ramps the two-photon drive from zero to `ep0` starting in `|0>`
/// (`initial_parity` 0) or `|1>` (1). `cd_variant` is -1 for no auxiliary
/// drive, 0 for the plain ramp, 1 exact, 2 and 3 for the two closed forms.
/// `state` may be null.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn ck_init(
    ep0: f64,
    tau: f64,
    t_final: f64,
    kappa: f64,
    initial_parity: i32,
    cd_variant: i32,
    n_fock: usize,
    result: *mut CkProtocolResult,
    state: *mut *mut CkDensity,
) -> CkStatus {
    guard(|| {
        let p = InitParams::new(ep0, tau, t_final, n_fock).with_kappa(kappa).with_initial(parity(initial_parity)?);
        let opts = RunOptions::default();
        let report = match cd_variant {
            0 => run_adiabatic_init(&p, &opts),
            -1 => run_transitionless_init(&p, None, &opts),
            1 => run_transitionless_init(&p, Some(CdVariant::Exact), &opts),
            2 => run_transitionless_init(&p, Some(CdVariant::OverNorm), &opts),
            3 => run_transitionless_init(&p, Some(CdVariant::TimesNorm), &opts),
            v => return Err((CkStatus::InvalidArgument, format!("unknown auxiliary drive {v}"))),
        }
        .map_err(lift)?;
        finish(report, result, state)
    })
}

/// Z rotation by `theta` on `|C+>`; `duration <= 0` picks the default timing.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn ck_gate_z(
    ep: f64,
    ez: f64,
    theta: f64,
    kappa: f64,
    duration: f64,
    n_fock: usize,
    result: *mut CkProtocolResult,
    state: *mut *mut CkDensity,
) -> CkStatus {
    guard(|| {
        let mut p = GateZParams::new(ep, ez, theta, n_fock);
        p.kappa = kappa;
        p.duration = (duration > 0.0).then_some(duration);
        finish(run_gate_z(&p, &RunOptions::default()).map_err(lift)?, result, state)
    })
}

/// X rotation by `theta` on `|0>`; `duration <= 0` picks the calibrated
/// timing.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn ck_gate_x(
    ep: f64,
    delta_x: f64,
    theta: f64,
    kappa: f64,
    duration: f64,
    n_fock: usize,
    result: *mut CkProtocolResult,
    state: *mut *mut CkDensity,
) -> CkStatus {
    guard(|| {
        let mut p = GateXParams::new(ep, delta_x, theta, n_fock);
        p.kappa = kappa;
        p.duration = (duration > 0.0).then_some(duration);
        finish(run_gate_x(&p, &RunOptions::default()).map_err(lift)?, result, state)
    })
}

/// Two-mode ZZ gate on `|C+>|C+>`; `n_fock` is per mode.
#[no_mangle]
pub unsafe extern "C" fn ck_gate_zz(
    ep: f64,
    ezz: f64,
    kappa: f64,
    duration: f64,
    n_fock: usize,
    result: *mut CkProtocolResult,
    state: *mut *mut CkDensity,
) -> CkStatus {
    guard(|| {
        let mut p = GateZzParams::new(ep, ezz, n_fock);
        p.kappa = kappa;
        p.duration = (duration > 0.0).then_some(duration);
        finish(run_gate_zz(&p, &RunOptions::default()).map_err(lift)?, result, state)
    })
}
