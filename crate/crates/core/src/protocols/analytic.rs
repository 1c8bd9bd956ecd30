// Copyright 2026 catkerr Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use crate::error::{Error, Result};

use super::envelope::{alpha_trajectory, DriveEnvelope};

/// Loss-induced dephasing accumulated during a drive ramp.
///
/// Photon loss at rate `kappa` flips cat parity at rate `kappa |alpha0(t)|^2`,
/// so the coherence between the even and odd components decays as
/// `exp(-Gamma)` with `Gamma = 2 int_0^T kappa |alpha0|^2 dt`. The resulting
/// state `[(1+e^-Gamma)|C+><C+| + (1-e^-Gamma)|C-><C-|]/2` has
/// squared fidelity `(1 + e^-Gamma)/2` to the even cat.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DephasingEstimate {
    /// `2 int kappa |alpha0|^2 dt`.
    pub gamma: f64,
    /// `exp(-gamma)`.
    pub coherence: f64,
    /// `(1 + exp(-gamma)) / 2`.
    pub fidelity: f64,
    /// `sqrt(fidelity)`.
    pub root_fidelity: f64,
    /// `1 - root_fidelity`.
    pub phase_error: f64,
}

pub const QUADRATURE_TOL: f64 = 1e-10;

pub fn analytic_init_dephasing(kappa: f64, env: &DriveEnvelope, k: f64, t_final: f64) -> Result<DephasingEstimate> {
    if !(kappa >= 0.0) || !(t_final >= 0.0) {
        return Err(Error::InvalidArgument("kappa and t_final must be >= 0".into()));
    }
    let traj = alpha_trajectory(env, k)?;
    traj.alpha(t_final)?;
    let f = |t: f64| traj.alpha(t).map(|a| a * a).unwrap_or(f64::NAN);
    let integral = adaptive_simpson(&f, 0.0, t_final, QUADRATURE_TOL);
    if !integral.is_finite() {
        return Err(Error::Domain("alpha0(t) undefined on the integration interval".into()));
    }
    let gamma = 2.0 * kappa * integral;
    let coherence = (-gamma).exp();
    let fidelity = 0.5 * (1.0 + coherence);
    let root_fidelity = fidelity.sqrt();
    Ok(DephasingEstimate { gamma, coherence, fidelity, root_fidelity, phase_error: 1.0 - root_fidelity })
}

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}
