// Copyright 2026 catkerr Contributors
// SPDX-License-Identifier: Apache-2.0

//! Scripted experiments: cat-state initialization, stabilization, logical
//! gates and the analytic dephasing estimate.

mod analytic;
mod envelope;
mod gates;
mod init;
mod nphoton;
mod stabilize;
mod sweep;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::fock::{DensityMatrix, Operator, Parity, PureState};
use crate::lindblad::{CollapseOp, HamiltonianTerm, StepperStats, Trajectory};
use crate::linalg::{self, CMatrix, CVector, C64, I};
use crate::observables::{fidelity_pair, mean_photon, parity_expectation, Target};

pub use analytic::{analytic_init_dephasing, DephasingEstimate};
pub use envelope::{
    alpha_trajectory, cd_coefficient, counterdiabatic_envelope, AlphaTrajectory, CdVariant, DriveEnvelope,
    CD_CLAMP_FACTOR, DEFAULT_CD_VARIANT,
};
pub use gates::{
    fidelity_maximizing_time, gate_x_splitting, run_gate_x, run_gate_z, run_gate_zz, GateXParams, GateZParams,
    GateZzParams, XTiming, ZTiming,
};
pub use init::{run_adiabatic_init, run_transitionless_init, InitParams};
pub use nphoton::{nphoton_check, NPhotonReport};
pub use stabilize::{run_stabilization, StabilizationMode, StabilizationParams, StabilizationRun};
pub use sweep::{condition_sweep, SweepGate, SweepRow};

/// Shared numerical settings for protocol runs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RunOptions {
    pub solver: crate::lindblad::SolverOptions,
    /// Number of evenly spaced time-series samples including both ends; 1
    /// records only the final time.
    pub samples: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { solver: Default::default(), samples: 1 }
    }
}

impl RunOptions {
    pub fn with_samples(samples: usize) -> Self {
        Self { samples, ..Self::default() }
    }
}

/// One row of `timeseries.csv`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TimePoint {
    pub t: f64,
    pub fidelity: f64,
    pub root_fidelity: f64,
    pub parity: f64,
    pub mean_n: f64,
    pub purity: f64,
}

/// Outcome of one protocol run.
#[derive(Clone, Debug, Serialize)]
pub struct ProtocolReport {
    pub protocol: String,
    pub target: String,
    /// Squared fidelity `<psi|rho|psi>`.
    pub fidelity: f64,
    /// `sqrt(<psi|rho|psi>)`.
    pub root_fidelity: f64,
    pub duration: f64,
    pub parameters: BTreeMap<String, f64>,
    /// Secondary scalar results (alternative targets, branch choices, etc.).
    pub extras: BTreeMap<String, f64>,
    pub notes: Vec<String>,
    pub stats: StepperStats,
    pub timeseries: Vec<TimePoint>,
    #[serde(skip)]
    pub final_state: Option<DensityMatrix>,
}

impl ProtocolReport {
    fn new(protocol: &str, target: impl Into<String>, duration: f64) -> Self {
        Self {
            protocol: protocol.to_string(),
            target: target.into(),
            fidelity: 0.0,
            root_fidelity: 0.0,
            duration,
            parameters: BTreeMap::new(),
            extras: BTreeMap::new(),
            notes: Vec::new(),
            stats: StepperStats::default(),
            timeseries: Vec::new(),
            final_state: None,
        }
    }

    fn param(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    /// Fills fidelities, time series and the final state from a trajectory.
    fn absorb<'a>(&mut self, traj: Trajectory, target: impl Into<Target<'a>>) -> Result<()> {
        let target = target.into();
        self.timeseries = timeseries(&traj, target)?;
        let last = self.timeseries.last().expect("trajectory is non-empty");
        self.fidelity = last.fidelity;
        self.root_fidelity = last.root_fidelity;
        self.stats = traj.stats;
        self.final_state = traj.states.into_iter().last();
        Ok(())
    }
}

pub(crate) fn timeseries<'a>(traj: &Trajectory, target: impl Into<Target<'a>>) -> Result<Vec<TimePoint>> {
    let target = target.into();
    traj.times
        .iter()
        .zip(&traj.states)
        .map(|(&t, rho)| {
            let f = fidelity_pair(rho, target)?;
            Ok(TimePoint {
                t,
                fidelity: f.squared,
                root_fidelity: f.root,
                parity: parity_expectation(rho),
                mean_n: mean_photon(rho),
                purity: rho.purity(),
            })
        })
        .collect()
}

pub(crate) fn sample_times(t_final: f64, samples: usize) -> Vec<f64> {
    if samples <= 1 || t_final == 0.0 {
        return vec![t_final];
    }
    let mut v: Vec<f64> = (0..samples).map(|i| t_final * i as f64 / (samples - 1) as f64).collect();
    v[samples - 1] = t_final;
    v
}

/// `sqrt(kappa) a_j` on every mode, or nothing when `kappa = 0`.
pub(crate) fn loss_ops(kappa: f64, dims: &[usize]) -> Result<Vec<CollapseOp>> {
    if kappa == 0.0 {
        return Ok(Vec::new());
    }
    dims.iter()
        .enumerate()
        .map(|(mode, &n)| {
            let a = Operator::annihilation(n)?;
            let a = if dims.len() == 1 { a } else { a.embed(mode, dims)? };
            CollapseOp::with_rate(kappa, a)
        })
        .collect()
}

/// `exp(-i H t)|psi>` by diagonalization.
pub fn evolve_pure_spectral(h: &Operator, psi: &PureState, t: f64) -> Result<PureState> {
    let u = linalg::unitary_exp(h.matrix(), t);
    PureState::new(u * psi.amplitudes(), psi.dims().to_vec())
}

/// Exact transitionless-driving term for the instantaneous cat
/// `|C(alpha0(t))>` in the truncated space:
/// `H'(t) = i (|d_t psi><psi| - |psi><d_t psi|)`.
pub struct ExactCdTerm {
    env: DriveEnvelope,
    k: f64,
    parity: Parity,
    n: usize,
}

impl ExactCdTerm {
    pub fn new(env: DriveEnvelope, k: f64, parity: Parity, n: usize) -> Self {
        Self { env, k, parity, n }
    }

    /// `(psi, d psi/dt)` as real vectors, or `None` when the term vanishes.
    fn vectors(&self, t: f64) -> Option<(Vec<f64>, Vec<f64>)> {
        let traj = AlphaTrajectory { env: &self.env, k: self.k };
        let alpha = traj.alpha(t).ok()?;
        let alpha_dot = traj.alpha_dot(t).ok()?;
        if alpha <= 0.0 || alpha_dot == 0.0 {
            return None;
        }
        let p = if self.parity == Parity::Even { 0 } else { 1 };
        // v_m = alpha^(m-p)/sqrt(m!), dv_m/d alpha = (m-p)/alpha v_m.
        let mut v = vec![0.0; self.n];
        let mut dv = vec![0.0; self.n];
        let mut c = 1.0;
        let mut m = p;
        while m < self.n {
            v[m] = c;
            dv[m] = (m - p) as f64 / alpha * c;
            c *= alpha * alpha / (((m + 1) * (m + 2)) as f64).sqrt();
            m += 2;
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let psi: Vec<f64> = v.iter().map(|x| x / norm).collect();
        let proj: f64 = psi.iter().zip(&dv).map(|(a, b)| a * b).sum();
        let d: Vec<f64> = dv.iter().zip(&psi).map(|(b, a)| alpha_dot * (b - a * proj) / norm).collect();
        Some((psi, d))
    }
}

impl HamiltonianTerm for ExactCdTerm {
    fn add_apply(&self, t: f64, rho: &CMatrix, out: &mut CMatrix) {
        let Some((psi, d)) = self.vectors(t) else { return };
        let n = self.n;
        for j in 0..n {
            let col = rho.column(j);
            let mut row_psi = C64::new(0.0, 0.0);
            let mut row_d = C64::new(0.0, 0.0);
            for k in 0..n {
                row_psi += col[k] * psi[k];
                row_d += col[k] * d[k];
            }
            for i in 0..n {
                out[(i, j)] += I * (row_psi * d[i] - row_d * psi[i]);
            }
        }
    }

    fn matrix(&self, t: f64) -> CMatrix {
        let Some((psi, d)) = self.vectors(t) else { return CMatrix::zeros(self.n, self.n) };
        let psi = CVector::from_iterator(self.n, psi.into_iter().map(|x| C64::new(x, 0.0)));
        let d = CVector::from_iterator(self.n, d.into_iter().map(|x| C64::new(x, 0.0)));
        (&d * psi.adjoint() - &psi * d.adjoint()) * I
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::cat_state;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_term_is_hermitian_and_consistent() {
        let env = DriveEnvelope::smooth_turn_on(4.0, 1.0).unwrap();
        let term = ExactCdTerm::new(env.clone(), 1.0, Parity::Even, 20);
        let m = term.matrix(0.8);
        assert!(linalg::hermiticity_defect(&m) < 1e-14);
        let rho = cat_state(C64::new(1.0, 0.0), Parity::Even, 20).unwrap().to_density();
        let mut out = CMatrix::zeros(20, 20);
        term.add_apply(0.8, rho.matrix(), &mut out);
        assert!((out - &m * rho.matrix()).norm() < 1e-12);
        assert_eq!(term.matrix(0.0).norm(), 0.0);
    }

    #[test]
    fn exact_term_generates_cat_motion() {
        // H'|psi> = i d_t|psi> for the tracked state.
        let env = DriveEnvelope::smooth_turn_on(4.0, 1.0).unwrap();
        let term = ExactCdTerm::new(env.clone(), 1.0, Parity::Odd, 30);
        let t = 0.9;
        let traj = alpha_trajectory(&env, 1.0).unwrap();
        let h = 1e-6;
        let cat = |t: f64| cat_state(C64::new(traj.alpha(t).unwrap(), 0.0), Parity::Odd, 30).unwrap();
        let dpsi = (cat(t + h).amplitudes() - cat(t - h).amplitudes()) / C64::new(2.0 * h, 0.0);
        let lhs = term.matrix(t) * cat(t).amplitudes();
        assert!((lhs - dpsi * I).norm() < 1e-6);
    }

    #[test]
    fn sampling_grid() {
        assert_eq!(sample_times(2.0, 1), vec![2.0]);
        let v = sample_times(1.0, 5);
        assert_eq!(v.len(), 5);
        assert_abs_diff_eq!(v[1], 0.25);
        assert_eq!(*v.last().unwrap(), 1.0);
    }
}
