// Copyright 2026 catkerr Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{cat_state, DensityMatrix, Operator, Parity};
use crate::lindblad::{evolve, EvolutionProblem, Hamiltonian};
use crate::linalg::C64;
use crate::model::drive_for_amplitude;

use super::{loss_ops, sample_times, ProtocolReport, RunOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StabilizationMode {
    /// Kerr plus two-photon drive.
    DrivenKnr,
    /// Kerr only.
    UndrivenKnr,
    /// Empty resonator, `H = 0`.
    Linear,
}

impl StabilizationMode {
    pub const ALL: [StabilizationMode; 3] =
        [StabilizationMode::DrivenKnr, StabilizationMode::UndrivenKnr, StabilizationMode::Linear];

    pub fn name(self) -> &'static str {
        match self {
            StabilizationMode::DrivenKnr => "driven-knr",
            StabilizationMode::UndrivenKnr => "undriven-knr",
            StabilizationMode::Linear => "linear",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilizationParams {
    pub k: f64,
    pub kappa: f64,
    /// Amplitude of the initial even cat.
    pub alpha: f64,
    /// Two-photon drive; `None` picks the value whose lossy fixed point has modulus `alpha`.
    pub ep: Option<f64>,
    pub t_final: f64,
    pub n_fock: usize,
    /// Times at which full density matrices are kept (for Wigner snapshots).
    pub snapshot_times: Vec<f64>,
}

impl StabilizationParams {
    pub fn new(k: f64, kappa: f64, alpha: f64, t_final: f64, n_fock: usize) -> Self {
        Self { k, kappa, alpha, ep: None, t_final, n_fock, snapshot_times: Vec::new() }
    }

    pub fn drive(&self) -> f64 {
        self.ep.unwrap_or_else(|| drive_for_amplitude(self.k, self.kappa, self.alpha))
    }
}

pub struct StabilizationRun {
    pub mode: StabilizationMode,
    pub report: ProtocolReport,
    pub snapshots: Vec<(f64, DensityMatrix)>,
}

/// Evolves `|C+_alpha><C+_alpha|` and tracks the fidelity to the initial state.
pub fn run_stabilization(
    p: &StabilizationParams,
    mode: StabilizationMode,
    opts: &RunOptions,
) -> Result<StabilizationRun> {
    if !(p.t_final >= 0.0) || p.snapshot_times.iter().any(|&t| t < 0.0 || t > p.t_final) {
        return Err(Error::InvalidArgument("snapshot times must lie in [0, t_final]".into()));
    }
    let n = p.n_fock;
    let a = Operator::annihilation(n)?;
    let ad2 = &a.adjoint() * &a.adjoint();
    let a2 = &a * &a;
    let ep = p.drive();
    let h = match mode {
        StabilizationMode::DrivenKnr => {
            &(&(&(&ad2 * &a2) * (-p.k)) + &(&ad2 * ep)) + &(&a2 * ep)
        }
        StabilizationMode::UndrivenKnr => &(&ad2 * &a2) * (-p.k),
        StabilizationMode::Linear => Operator::zeros(&[n]),
    };
    let initial = cat_state(C64::new(p.alpha, 0.0), Parity::Even, n)?;
    let mut times = sample_times(p.t_final, opts.samples);
    times.extend_from_slice(&p.snapshot_times);
    times.sort_by(f64::total_cmp);
    times.dedup();
    let problem = EvolutionProblem::from_pure(Hamiltonian::new(h), &initial, (0.0, p.t_final)).with_output_times(times);
    let problem = loss_ops(p.kappa, &[n])?.into_iter().fold(problem, |pr, c| pr.with_collapse(c));
    let traj = evolve(&problem, opts.solver)?;
    let snapshots = p
        .snapshot_times
        .iter()
        .filter_map(|&ts| traj.times.iter().position(|&t| t == ts).map(|i| (ts, traj.states[i].clone())))
        .collect();
    let mut report = ProtocolReport::new("stabilize", format!("|C+_{{{:.6}}}> (initial state)", p.alpha), p.t_final)
        .param("K", p.k)
        .param("kappa", p.kappa)
        .param("alpha", p.alpha)
        .param("Ep", if mode == StabilizationMode::DrivenKnr { ep } else { 0.0 })
        .param("N", n as f64);
    report.notes.push(format!("mode={}", mode.name()));
    report.absorb(traj, &initial)?;
    Ok(StabilizationRun { mode, report, snapshots })
}
