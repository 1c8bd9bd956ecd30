// Copyright 2026 catkerr Contributors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::gates::{run_gate_x, run_gate_z, run_gate_zz, GateXParams, GateZParams, GateZzParams};
use super::RunOptions;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepGate {
    Z,
    X,
    Zz,
}

impl SweepGate {
    /// Two-photon drive used when none is given.
    pub fn default_ep(self) -> f64 {
        match self {
            SweepGate::Z | SweepGate::Zz => 4.0,
            SweepGate::X => 1.0,
        }
    }

    pub fn strength_name(self) -> &'static str {
        match self {
            SweepGate::Z => "Ez",
            SweepGate::X => "delta_x",
            SweepGate::Zz => "Ezz",
        }
    }
}

impl std::str::FromStr for SweepGate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "z" => Ok(SweepGate::Z),
            "x" => Ok(SweepGate::X),
            "zz" => Ok(SweepGate::Zz),
            other => Err(Error::Config(format!("unknown sweep gate '{other}' (expected z, x or zz)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub strength: f64,
    pub fidelity: f64,
    pub root_fidelity: f64,
    pub duration: f64,
}

/// Runs one gate per strength value in parallel; rows keep the grid order.
///
/// Z uses `theta = pi`, X uses `theta = pi/2` with calibrated timing and ZZ
/// the entangling time. Drive strength `ep` defaults per gate.
pub fn condition_sweep(
    gate: SweepGate,
    grid: &[f64],
    ep: Option<f64>,
    kappa: f64,
    n_fock: usize,
    opts: &RunOptions,
) -> Result<Vec<SweepRow>> {
    let ep = ep.unwrap_or(gate.default_ep());
    grid.par_iter()
        .map(|&s| {
            let report = match gate {
                SweepGate::Z => {
                    let p = GateZParams { kappa, ..GateZParams::new(ep, s, PI, n_fock) };
                    run_gate_z(&p, opts)?
                }
                SweepGate::X => {
                    let p = GateXParams { kappa, ..GateXParams::new(ep, s, PI / 2.0, n_fock) };
                    run_gate_x(&p, opts)?
                }
                SweepGate::Zz => {
                    let p = GateZzParams { kappa, ..GateZzParams::new(ep, s, n_fock) };
                    run_gate_zz(&p, opts)?
                }
            };
            Ok(SweepRow {
                strength: s,
                fidelity: report.fidelity,
                root_fidelity: report.root_fidelity,
                duration: report.duration,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_row() {
        let rows = condition_sweep(SweepGate::Z, &[0.8], None, 0.0, 30, &RunOptions::default()).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].fidelity > 0.99);
    }
}
