// Copyright 2026 catkerr Contributors
// SPDX-License-Identifier: Apache-2.0

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{cat_state, Operator, Parity, PureState};
use crate::lindblad::{evolve, EvolutionProblem, Hamiltonian};
use crate::linalg::C64;
use crate::observables::fidelity_pair;

use super::envelope::{alpha_trajectory, counterdiabatic_envelope, CdVariant, DriveEnvelope};
use super::{loss_ops, sample_times, ExactCdTerm, ProtocolReport, RunOptions};

/// Ramp of the two-photon drive from zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitParams {
    pub k: f64,
    pub kappa: f64,
    pub ep0: f64,
    pub tau: f64,
    pub t_final: f64,
    /// `Even` starts from `|0>`, `Odd` from `|1>`.
    pub initial: Parity,
    pub n_fock: usize,
}

impl InitParams {
    pub fn new(ep0: f64, tau: f64, t_final: f64, n_fock: usize) -> Self {
        Self { k: 1.0, kappa: 0.0, ep0, tau, t_final, initial: Parity::Even, n_fock }
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn with_initial(mut self, initial: Parity) -> Self {
        self.initial = initial;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.t_final >= 0.0) || !(self.kappa >= 0.0) {
            return Err(Error::InvalidArgument("t_final and kappa must be >= 0".into()));
        }
        Ok(())
    }

    fn envelope(&self) -> Result<DriveEnvelope> {
        DriveEnvelope::smooth_turn_on(self.ep0, self.tau)
    }

    fn initial_state(&self) -> Result<PureState> {
        PureState::fock(if self.initial == Parity::Even { 0 } else { 1 }, self.n_fock)
    }

    fn echo(&self, report: ProtocolReport) -> ProtocolReport {
        report
            .param("K", self.k)
            .param("kappa", self.kappa)
            .param("Ep0", self.ep0)
            .param("tau", self.tau)
            .param("t_final", self.t_final)
            .param("N", self.n_fock as f64)
            .param("initial_level", if self.initial == Parity::Even { 0.0 } else { 1.0 })
    }
}

fn ramp_hamiltonian(p: &InitParams, env: &DriveEnvelope) -> Result<Hamiltonian> {
    let a = Operator::annihilation(p.n_fock)?;
    let ad2 = &a.adjoint() * &a.adjoint();
    let kerr = &(&ad2 * &(&a * &a)) * (-p.k);
    Hamiltonian::new(kerr).with_drive(env.clone(), ad2)
}

fn parity_label(p: Parity) -> &'static str {
    if p == Parity::Even {
        "+"
    } else {
        "-"
    }
}

fn run(p: &InitParams, h: Hamiltonian, mut report: ProtocolReport, opts: &RunOptions) -> Result<ProtocolReport> {
    let env = p.envelope()?;
    let traj = alpha_trajectory(&env, p.k)?;
    let alpha_nominal = (p.ep0 / p.k).sqrt();
    if !alpha_nominal.is_finite() {
        return Err(Error::Domain(format!("Ep0/K = {} must be >= 0", p.ep0 / p.k)));
    }
    let alpha_final = traj.alpha(p.t_final)?;
    let target = cat_state(C64::new(alpha_nominal, 0.0), p.initial, p.n_fock)?;
    let problem = EvolutionProblem::from_pure(h, &p.initial_state()?, (0.0, p.t_final))
        .with_output_times(sample_times(p.t_final, opts.samples));
    let problem = loss_ops(p.kappa, &[p.n_fock])?.into_iter().fold(problem, |pr, c| pr.with_collapse(c));
    let trajectory = evolve(&problem, opts.solver)?;
    report.absorb(trajectory, &target)?;
    let inst = cat_state(C64::new(alpha_final, 0.0), p.initial, p.n_fock)?;
    let f_inst = fidelity_pair(report.final_state.as_ref().expect("final state"), &inst)?;
    report.extras.insert("alpha_target".into(), alpha_nominal);
    report.extras.insert("alpha_final".into(), alpha_final);
    report.extras.insert("fidelity_instantaneous_cat".into(), f_inst.squared);
    report.extras.insert("root_fidelity_instantaneous_cat".into(), f_inst.root);
    Ok(report)
}

/// Evolves `|0>` (or `|1>`) under `H0(t)` with `Ep(t) = Ep0 [1 - exp(-t^4/tau^4)]`.
///
/// The target is the cat at the plateau amplitude `sqrt(Ep0/K)`; the
/// fidelity to the cat at `alpha0(t_final)` is recorded in `extras`.
pub fn run_adiabatic_init(p: &InitParams, opts: &RunOptions) -> Result<ProtocolReport> {
    p.validate()?;
    let env = p.envelope()?;
    let h = ramp_hamiltonian(p, &env)?;
    let alpha = (p.ep0 / p.k).sqrt();
    let report = ProtocolReport::new(
        "adiabatic-init",
        format!("|C{}_{{{alpha:.6}}}>", parity_label(p.initial)),
        p.t_final,
    );
    run(p, h, p.echo(report), opts)
}

/// As [`run_adiabatic_init`] plus an auxiliary drive; `None` disables it.
pub fn run_transitionless_init(
    p: &InitParams,
    variant: Option<CdVariant>,
    opts: &RunOptions,
) -> Result<ProtocolReport> {
    p.validate()?;
    let env = p.envelope()?;
    let mut h = ramp_hamiltonian(p, &env)?;
    let mut notes = Vec::new();
    let mut cd_env = None;
    match variant {
        None => notes.push("no auxiliary drive".to_string()),
        Some(CdVariant::Exact) => {
            h = h.with_term(Arc::new(ExactCdTerm::new(env.clone(), p.k, p.initial, p.n_fock)));
        }
        Some(v) => {
            let cd = counterdiabatic_envelope(&env, p.k, v)?;
            let a = Operator::annihilation(p.n_fock)?;
            h = h.with_drive(cd.clone(), &a.adjoint() * &a.adjoint())?;
            cd_env = Some(cd);
        }
    }
    let alpha = (p.ep0 / p.k).sqrt();
    let mut report = ProtocolReport::new(
        "ta-init",
        format!("|C{}_{{{alpha:.6}}}>", parity_label(p.initial)),
        p.t_final,
    );
    report.notes = notes;
    report.notes.push(format!("cd_variant={}", variant.map(|v| v.name()).unwrap_or("none")));
    let mut report = run(p, h, p.echo(report), opts)?;
    if let Some(cd) = cd_env {
        let events = cd.clamp_events();
        report.extras.insert("cd_clamp_events".into(), events as f64);
        if events > 0 {
            report.notes.push(format!("auxiliary drive clamped in {events} evaluations"));
        }
    }
    Ok(report)
}
