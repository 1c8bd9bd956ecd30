// Copyright 2026 catkerr Contributors
// SPDX-License-Identifier: Apache-2.0

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::cat_normalization;
use crate::fock::Parity;
use crate::lindblad::Envelope;
use crate::linalg::{C64, I, ZERO};

/// Form of the auxiliary drive suppressing non-adiabatic transitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CdVariant {
    /// Two-photon drive `i adot / (N- (1 + 2 a))`.
    OverNorm,
    /// Two-photon drive `i adot N- / (1 + 2 a)`, clamped.
    TimesNorm,
    /// Full projector form `i adot (|d psi><psi| - |psi><d psi|)`.
    Exact,
}

impl CdVariant {
    pub const ALL: [CdVariant; 3] = [CdVariant::OverNorm, CdVariant::TimesNorm, CdVariant::Exact];

    pub fn name(self) -> &'static str {
        match self {
            CdVariant::OverNorm => "over-norm",
            CdVariant::TimesNorm => "times-norm",
            CdVariant::Exact => "exact",
        }
    }
}

impl std::str::FromStr for CdVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "over-norm" => Ok(CdVariant::OverNorm),
            "times-norm" => Ok(CdVariant::TimesNorm),
            "exact" => Ok(CdVariant::Exact),
            other => Err(Error::Config(format!("unknown counterdiabatic variant '{other}'"))),
        }
    }
}

/// Highest-scoring form on the fast-ramp benchmark (`tau = 1/K`, `t = 1.37/K`).
pub const DEFAULT_CD_VARIANT: CdVariant = CdVariant::Exact;

/// Clamp on the `times-norm` form, in units of `|Ep0|`.
pub const CD_CLAMP_FACTOR: f64 = 10.0;

/// Time-dependent complex drive amplitude.
#[derive(Clone, Debug)]
pub enum DriveEnvelope {
    Constant {
        ep: C64,
    },
    /// `Ep0 [1 - exp(-t^4 / tau^4)]`.
    SmoothTurnOn {
        ep0: C64,
        tau: f64,
    },
    /// Auxiliary two-photon drive following `base`.
    Counterdiabatic {
        base: Box<DriveEnvelope>,
        k: f64,
        variant: CdVariant,
        clamp: f64,
        clamp_events: Arc<AtomicUsize>,
    },
    /// Piecewise-linear samples; `tau` sets the finite-difference step.
    Tabulated {
        times: Vec<f64>,
        values: Vec<C64>,
        tau: f64,
    },
}

impl DriveEnvelope {
    pub fn constant(ep: f64) -> Self {
        DriveEnvelope::Constant { ep: C64::new(ep, 0.0) }
    }

    pub fn smooth_turn_on(ep0: f64, tau: f64) -> Result<Self> {
        if !(tau > 0.0) {
            return Err(Error::InvalidArgument(format!("tau must be > 0, got {tau}")));
        }
        Ok(DriveEnvelope::SmoothTurnOn { ep0: C64::new(ep0, 0.0), tau })
    }

    pub fn tabulated(times: Vec<f64>, values: Vec<C64>, tau: f64) -> Result<Self> {
        if times.len() != values.len() || times.len() < 2 {
            return Err(Error::InvalidArgument("tabulated envelope needs >= 2 matching samples".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("tabulated times must increase strictly".into()));
        }
        if !(tau > 0.0) {
            return Err(Error::InvalidArgument("tabulated envelope needs tau > 0".into()));
        }
        Ok(DriveEnvelope::Tabulated { times, values, tau })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            DriveEnvelope::Constant { .. } => "constant",
            DriveEnvelope::SmoothTurnOn { .. } => "smooth_turn_on",
            DriveEnvelope::Counterdiabatic { .. } => "counterdiabatic",
            DriveEnvelope::Tabulated { .. } => "tabulated",
        }
    }

    /// Asymptotic amplitude (`Ep0`) where defined.
    pub fn plateau(&self) -> Option<C64> {
        match self {
            DriveEnvelope::Constant { ep } => Some(*ep),
            DriveEnvelope::SmoothTurnOn { ep0, .. } => Some(*ep0),
            DriveEnvelope::Tabulated { values, .. } => values.last().copied(),
            DriveEnvelope::Counterdiabatic { .. } => None,
        }
    }

    fn characteristic_time(&self) -> f64 {
        match self {
            DriveEnvelope::SmoothTurnOn { tau, .. } | DriveEnvelope::Tabulated { tau, .. } => *tau,
            DriveEnvelope::Counterdiabatic { base, .. } => base.characteristic_time(),
            DriveEnvelope::Constant { .. } => 1.0,
        }
    }

    pub fn value(&self, t: f64) -> C64 {
        match self {
            DriveEnvelope::Constant { ep } => *ep,
            DriveEnvelope::SmoothTurnOn { ep0, tau } => *ep0 * (1.0 - (-(t / tau).powi(4)).exp()),
            DriveEnvelope::Tabulated { times, values, .. } => interpolate(times, values, t),
            DriveEnvelope::Counterdiabatic { base, k, variant, clamp, clamp_events } => {
                let traj = AlphaTrajectory { env: base, k: *k };
                let (Ok(alpha), Ok(alpha_dot)) = (traj.alpha(t), traj.alpha_dot(t)) else {
                    return ZERO;
                };
                let c = cd_coefficient(*variant, alpha, alpha_dot);
                if c.abs() > *clamp {
                    clamp_events.fetch_add(1, Ordering::Relaxed);
                    I * clamp.copysign(c)
                } else {
                    I * c
                }
            }
        }
    }

    /// `dEp/dt`: closed form where available, centered differences otherwise.
    pub fn derivative(&self, t: f64) -> C64 {
        match self {
            DriveEnvelope::Constant { .. } => ZERO,
            DriveEnvelope::SmoothTurnOn { ep0, tau } => {
                let x = (t / tau).powi(4);
                *ep0 * (4.0 * t.powi(3) / tau.powi(4) * (-x).exp())
            }
            _ => self.finite_difference(t),
        }
    }

    /// Centered difference with step `tau * 1e-6`.
    pub fn finite_difference(&self, t: f64) -> C64 {
        let h = self.characteristic_time() * 1e-6;
        (self.value(t + h) - self.value(t - h)) / (2.0 * h)
    }

    /// Number of evaluations where the `times-norm` form hit its clamp.
    pub fn clamp_events(&self) -> usize {
        match self {
            DriveEnvelope::Counterdiabatic { clamp_events, .. } => clamp_events.load(Ordering::Relaxed),
            _ => 0,
        }
    }
}

impl Envelope for DriveEnvelope {
    fn value(&self, t: f64) -> C64 {
        DriveEnvelope::value(self, t)
    }
}

fn interpolate(times: &[f64], values: &[C64], t: f64) -> C64 {
    if t <= times[0] {
        return values[0];
    }
    let last = times.len() - 1;
    if t >= times[last] {
        return values[last];
    }
    let i = times.partition_point(|&x| x <= t) - 1;
    let w = (t - times[i]) / (times[i + 1] - times[i]);
    values[i] * (1.0 - w) + values[i + 1] * w
}

/// Odd-cat normalization `N- = 1/sqrt(2(1 - exp(-2 a^2)))`.
fn n_minus(alpha: f64) -> f64 {
    cat_normalization(alpha, Parity::Odd)
}

/// Real prefactor `c` of the auxiliary drive `i c`.
pub fn cd_coefficient(variant: CdVariant, alpha: f64, alpha_dot: f64) -> f64 {
    if alpha_dot == 0.0 {
        return 0.0;
    }
    match variant {
        CdVariant::OverNorm => {
            if alpha <= 0.0 {
                0.0
            } else {
                alpha_dot / (n_minus(alpha) * (1.0 + 2.0 * alpha))
            }
        }
        CdVariant::TimesNorm => {
            if alpha <= 0.0 {
                f64::INFINITY.copysign(alpha_dot)
            } else {
                alpha_dot * n_minus(alpha) / (1.0 + 2.0 * alpha)
            }
        }
        CdVariant::Exact => 0.0,
    }
}

/// Auxiliary two-photon drive for the `over-norm` and `times-norm` forms.
pub fn counterdiabatic_envelope(env: &DriveEnvelope, k: f64, variant: CdVariant) -> Result<DriveEnvelope> {
    if variant == CdVariant::Exact {
        return Err(Error::InvalidArgument(
            "the exact variant is an operator term, not a two-photon envelope".into(),
        ));
    }
    let scale = env.plateau().map(|e| e.norm()).unwrap_or(1.0);
    Ok(DriveEnvelope::Counterdiabatic {
        base: Box::new(env.clone()),
        k,
        variant,
        clamp: CD_CLAMP_FACTOR * scale,
        clamp_events: Arc::new(AtomicUsize::new(0)),
    })
}

/// `alpha0(t) = sqrt(Ep(t)/K)` for a real, non-negative ratio.
#[derive(Clone, Copy, Debug)]
pub struct AlphaTrajectory<'a> {
    pub env: &'a DriveEnvelope,
    pub k: f64,
}

const RATIO_IMAG_TOL: f64 = 1e-12;

pub fn alpha_trajectory(env: &DriveEnvelope, k: f64) -> Result<AlphaTrajectory<'_>> {
    if k == 0.0 {
        return Err(Error::Domain("alpha0 undefined for K = 0".into()));
    }
    Ok(AlphaTrajectory { env, k })
}

impl AlphaTrajectory<'_> {
    fn ratio(&self, t: f64) -> Result<f64> {
        let r = self.env.value(t) / self.k;
        if r.im.abs() > RATIO_IMAG_TOL * r.re.abs().max(1.0) || r.re < 0.0 {
            return Err(Error::Domain(format!("Ep(t)/K = {r} is not real and non-negative at t = {t}")));
        }
        Ok(r.re)
    }

    pub fn alpha(&self, t: f64) -> Result<f64> {
        Ok(self.ratio(t)?.sqrt())
    }

    /// `d alpha0/dt = Ep'/(2 K alpha0)`, zero where `alpha0` vanishes.
    pub fn alpha_dot(&self, t: f64) -> Result<f64> {
        let alpha = self.alpha(t)?;
        if alpha == 0.0 {
            return Ok(0.0);
        }
        Ok((self.env.derivative(t) / self.k).re / (2.0 * alpha))
    }

    /// `d alpha0/dt` by centered differences of `alpha0` itself.
    pub fn alpha_dot_fd(&self, t: f64) -> Result<f64> {
        let h = self.env.characteristic_time() * 1e-6;
        Ok((self.alpha(t + h)? - self.alpha(t - h)?) / (2.0 * h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn smooth_turn_on_exact_form() {
        let env = DriveEnvelope::smooth_turn_on(4.0, 5.0).unwrap();
        for t in [0.0, 1.0, 3.3, 6.5] {
            let expected = 4.0 * (1.0 - (-(t / 5.0f64).powi(4)).exp());
            assert_eq!(env.value(t).re, expected);
        }
    }

    #[test]
    fn constant_alpha() {
        let env = DriveEnvelope::constant(4.0);
        let tr = alpha_trajectory(&env, 1.0).unwrap();
        assert_eq!(tr.alpha(3.0).unwrap(), 2.0);
        assert_eq!(tr.alpha_dot(3.0).unwrap(), 0.0);
    }

    #[test]
    fn turn_on_plateau() {
        let env = DriveEnvelope::smooth_turn_on(4.0, 5.0).unwrap();
        let tr = alpha_trajectory(&env, 1.0).unwrap();
        assert_abs_diff_eq!(tr.alpha(50.0).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn analytic_derivative_matches_differences() {
        let env = DriveEnvelope::smooth_turn_on(4.0, 1.0).unwrap();
        let tr = alpha_trajectory(&env, 1.0).unwrap();
        for t in [0.3, 0.7, 1.0, 1.37] {
            let a = tr.alpha_dot(t).unwrap();
            let fd = tr.alpha_dot_fd(t).unwrap();
            assert!(((a - fd) / a).abs() < 1e-6, "t={t}: {a} vs {fd}");
        }
    }

    #[test]
    fn tabulated_derivative() {
        let times: Vec<f64> = (0..=200).map(|i| i as f64 * 0.01).collect();
        let values = times.iter().map(|&t| C64::new(3.0 * t + 1.0, 0.0)).collect();
        let env = DriveEnvelope::tabulated(times, values, 1.0).unwrap();
        assert_abs_diff_eq!(env.derivative(0.555).re, 3.0, epsilon = 1e-6);
        assert_abs_diff_eq!(env.value(0.555).re, 2.665, epsilon = 1e-12);
        assert_eq!(env.value(10.0).re, 7.0);
    }

    #[test]
    fn negative_ratio_is_domain_error() {
        let env = DriveEnvelope::constant(-1.0);
        let tr = alpha_trajectory(&env, 1.0).unwrap();
        assert!(matches!(tr.alpha(0.0), Err(Error::Domain(_))));
        let env = DriveEnvelope::constant(-1.0);
        assert!(alpha_trajectory(&env, -1.0).unwrap().alpha(0.0).is_ok());
    }

    #[test]
    fn static_drive_has_no_cd() {
        let env = DriveEnvelope::constant(4.0);
        for v in [CdVariant::OverNorm, CdVariant::TimesNorm] {
            let cd = counterdiabatic_envelope(&env, 1.0, v).unwrap();
            assert_eq!(cd.value(1.0), ZERO);
        }
    }

    #[test]
    fn variants_differ_by_n_minus_squared() {
        // For large alpha the ratio times-norm/over-norm = N-^2 -> 1/2.
        for alpha in [3.0, 5.0] {
            let r = cd_coefficient(CdVariant::TimesNorm, alpha, 1.0) / cd_coefficient(CdVariant::OverNorm, alpha, 1.0);
            assert_abs_diff_eq!(r, n_minus(alpha).powi(2), epsilon = 1e-12);
            assert_abs_diff_eq!(r, 0.5, epsilon = 1e-6);
        }
    }

    #[test]
    fn times_norm_clamps_near_origin() {
        let env = DriveEnvelope::smooth_turn_on(4.0, 1.0).unwrap();
        let cd = counterdiabatic_envelope(&env, 1.0, CdVariant::TimesNorm).unwrap();
        let v = cd.value(1e-4);
        assert_abs_diff_eq!(v.norm(), 40.0, epsilon = 1e-12);
        assert_eq!(v.re, 0.0);
        assert!(cd.clamp_events() >= 1);
        // Purely imaginary relative to the real base drive.
        assert_eq!(cd.value(0.8).re, 0.0);
    }
}
