// Copyright 2026 catkerr Contributors
// SPDX-License-Identifier: Apache-2.0

//! Flat key-value experiment configuration.
//!
//! A config file is a TOML table without sections. Every field is optional;
//! [`ExperimentConfig::resolve`] fills the gaps with the defaults of the
//! chosen subcommand, and the resolved config is echoed into `summary.json`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::Parity;
use crate::lindblad::{SolverOptions, SteadyStateMethod};
use crate::linalg::C64;
use crate::model::ModelSpec;
use crate::protocols::{CdVariant, SweepGate, XTiming, ZTiming, DEFAULT_CD_VARIANT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    SteadyState,
    AdiabaticInit,
    TaInit,
    Stabilize,
    GateZ,
    GateX,
    GateZz,
    NphotonCheck,
    Wigner,
    Sweep,
    ReproducePaper,
}

impl Subcommand {
    pub const ALL: [Subcommand; 11] = [
        Subcommand::SteadyState,
        Subcommand::AdiabaticInit,
        Subcommand::TaInit,
        Subcommand::Stabilize,
        Subcommand::GateZ,
        Subcommand::GateX,
        Subcommand::GateZz,
        Subcommand::NphotonCheck,
        Subcommand::Wigner,
        Subcommand::Sweep,
        Subcommand::ReproducePaper,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subcommand::SteadyState => "steady-state",
            Subcommand::AdiabaticInit => "adiabatic-init",
            Subcommand::TaInit => "ta-init",
            Subcommand::Stabilize => "stabilize",
            Subcommand::GateZ => "gate-z",
            Subcommand::GateX => "gate-x",
            Subcommand::GateZz => "gate-zz",
            Subcommand::NphotonCheck => "nphoton-check",
            Subcommand::Wigner => "wigner",
            Subcommand::Sweep => "sweep",
            Subcommand::ReproducePaper => "reproduce-paper",
        }
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Subcommand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Subcommand::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown subcommand '{s}'")))
    }
}

/// State whose Wigner function the `wigner` subcommand tabulates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WignerState {
    Vacuum,
    Coherent,
    EvenCat,
    OddCat,
}

/// Every knob of every subcommand. Unset fields take subcommand defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subcommand: Option<Subcommand>,

    // Model.
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(rename = "Ep", skip_serializing_if = "Option::is_none")]
    pub ep: Option<f64>,
    #[serde(rename = "Ep_im", skip_serializing_if = "Option::is_none")]
    pub ep_im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(rename = "Ez", skip_serializing_if = "Option::is_none")]
    pub ez: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_x: Option<f64>,
    #[serde(rename = "Ezz", skip_serializing_if = "Option::is_none")]
    pub ezz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_drive: Option<u32>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n_fock: Option<usize>,

    // Protocols.
    #[serde(rename = "Ep0", skip_serializing_if = "Option::is_none")]
    pub ep0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<Parity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cd_variant: Option<CdVariantChoice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_timing: Option<ZTiming>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_timing: Option<XTiming>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<SteadyStateMethod>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wigner_state: Option<WignerState>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_gate: Option<SweepGate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_values: Option<Vec<f64>>,

    // Wigner grid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nx: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub np: Option<usize>,

    // Output and tolerances.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence_eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
}

/// `cd_variant` accepts a variant name or `none`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CdVariantChoice(pub Option<CdVariant>);

impl Serialize for CdVariantChoice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.0.map(|v| v.name()).unwrap_or("none"))
    }
}

impl<'de> Deserialize<'de> for CdVariantChoice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for CdVariantChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "none" {
            return Ok(CdVariantChoice(None));
        }
        s.parse::<CdVariant>().map(|v| CdVariantChoice(Some(v)))
    }
}

macro_rules! overlay {
    ($dst:ident, $src:ident; $($f:ident),* $(,)?) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

macro_rules! fill {
    ($dst:ident; $($f:ident = $v:expr),* $(,)?) => {
        $( if $dst.$f.is_none() { $dst.$f = Some($v); } )*
    };
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn render(&self) -> String {
        toml::to_string(self).expect("flat config always serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Fields set in `other` replace those in `self`.
    pub fn overlay(&mut self, other: &ExperimentConfig) {
        overlay!(self, other;
            subcommand, k, ep, ep_im, kappa, ez, delta_x, ezz, n_drive, n_fock,
            ep0, tau, t_final, initial, cd_variant, theta, z_timing, x_timing, duration, alpha, samples,
            method, wigner_state, sweep_gate, sweep_values,
            x_min, x_max, nx, p_min, p_max, np,
            output_dir, rel_tol, abs_tol, max_steps, convergence_eps, t_max,
        );
    }

    pub fn subcommand(&self) -> Result<Subcommand> {
        self.subcommand.ok_or_else(|| Error::Config("no subcommand given".into()))
    }

    /// Copy with every field relevant to the subcommand filled in.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let cmd = self.subcommand()?;
        let mut c = self.clone();
        let solver = SolverOptions::default();
        fill!(c;
            k = 1.0,
            ep_im = 0.0,
            n_drive = 2,
            output_dir = PathBuf::from(format!("out/{cmd}")),
            rel_tol = solver.rel_tol,
            abs_tol = solver.abs_tol,
            max_steps = solver.max_steps,
        );
        match cmd {
            Subcommand::SteadyState => {
                fill!(c; ep = 16.0, kappa = 8.0, n_fock = 70, method = SteadyStateMethod::LongTime,
                    convergence_eps = 1e-8, t_max = 100.0);
            }
            Subcommand::AdiabaticInit | Subcommand::TaInit => {
                let fast = cmd == Subcommand::TaInit;
                fill!(c; ep0 = 4.0, kappa = 0.0, n_fock = 25, initial = Parity::Even, samples = 101,
                    tau = if fast { 1.0 } else { 5.0 },
                    t_final = if fast { 1.37 } else { 6.5 });
                if fast {
                    fill!(c; cd_variant = CdVariantChoice(Some(DEFAULT_CD_VARIANT)));
                }
            }
            Subcommand::Stabilize => {
                fill!(c; kappa = 0.05, alpha = 2.0, n_fock = 30, samples = 201);
                let kappa = c.kappa.unwrap_or(0.05);
                fill!(c; t_final = if kappa > 0.0 { 2.0 / kappa } else { 40.0 });
            }
            Subcommand::GateZ => {
                fill!(c; ep = 4.0, ez = 0.8, kappa = 0.0, theta = std::f64::consts::PI, n_fock = 30,
                    z_timing = ZTiming::AngleOverRate, samples = 101);
            }
            Subcommand::GateX => {
                fill!(c; ep = 1.0, delta_x = 1.0 / 3.0, kappa = 0.0, theta = std::f64::consts::FRAC_PI_2,
                    n_fock = 20, x_timing = XTiming::Calibrated, samples = 101);
            }
            Subcommand::GateZz => {
                fill!(c; ep = 4.0, ezz = 0.2, kappa = 0.0, n_fock = 18, samples = 51);
            }
            Subcommand::NphotonCheck => {
                c.n_drive = self.n_drive.or(Some(3));
                fill!(c; ep = 8.0, n_fock = 60);
            }
            Subcommand::Wigner => {
                fill!(c; wigner_state = WignerState::Vacuum, alpha = 0.0, n_fock = 20,
                    x_min = -5.0, x_max = 5.0, nx = 201, p_min = -5.0, p_max = 5.0, np = 201);
            }
            Subcommand::Sweep => {
                let gate = *c.sweep_gate.get_or_insert(SweepGate::Z);
                fill!(c; kappa = 0.0, ep = gate.default_ep(),
                    n_fock = match gate { SweepGate::Z => 30, SweepGate::X => 20, SweepGate::Zz => 18 },
                    sweep_values = match gate {
                        SweepGate::Z => vec![0.4, 0.8, 1.6, 3.2],
                        SweepGate::X => vec![1.0 / 3.0, 0.5, 1.0, 2.0],
                        SweepGate::Zz => vec![0.1, 0.2, 0.4],
                    });
            }
            Subcommand::ReproducePaper => {}
        }
        Ok(c)
    }

    pub fn solver(&self) -> SolverOptions {
        let d = SolverOptions::default();
        SolverOptions {
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
            abs_tol: self.abs_tol.unwrap_or(d.abs_tol),
            max_steps: self.max_steps.unwrap_or(d.max_steps),
            ..d
        }
    }

    /// Model spec from the model fields; unset ones fall back to `ModelSpec` defaults.
    pub fn model(&self) -> Result<ModelSpec> {
        let n = self.n_fock.ok_or_else(|| Error::Config("N is required".into()))?;
        let spec = ModelSpec::new(self.k.unwrap_or(1.0), 0.0, n)
            .with_ep(C64::new(self.ep.unwrap_or(0.0), self.ep_im.unwrap_or(0.0)))
            .with_kappa(self.kappa.unwrap_or(0.0))
            .with_ez(self.ez.unwrap_or(0.0))
            .with_delta_x(self.delta_x.unwrap_or(0.0))
            .with_ezz(self.ezz.unwrap_or(0.0))
            .with_n_drive(self.n_drive.unwrap_or(2));
        spec.validate()?;
        Ok(spec)
    }

    pub fn require<T: Clone>(value: &Option<T>, name: &str) -> Result<T> {
        value.clone().ok_or_else(|| Error::Config(format!("{name} is required")))
    }
}
