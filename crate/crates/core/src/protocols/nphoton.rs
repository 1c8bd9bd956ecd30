// Copyright 2026 catkerr Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use crate::error::Result;
use crate::fock::coherent_state;
use crate::linalg::C64;
use crate::model::{build_hn, n_photon_amplitudes, spectrum, ModelSpec};

/// Eigenstate check for an n-photon driven resonator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NPhotonReport {
    pub n_drive: u32,
    /// `(re, im)` of each root of `alpha^n = Ep/K`.
    pub amplitudes: Vec<(f64, f64)>,
    /// `||(Hn - E)|alpha_j>||` with `E = K|alpha|^(2n)`.
    pub residuals: Vec<f64>,
    /// The `n` eigenvalues closest to `E`.
    pub multiplet: Vec<f64>,
    /// Spread of the multiplet divided by the distance to the next level.
    pub spread_to_gap: f64,
}

pub fn nphoton_check(spec: &ModelSpec) -> Result<NPhotonReport> {
    let h = build_hn(spec)?;
    let alphas = n_photon_amplitudes(spec);
    let n = spec.n_drive as i32;
    let energy = spec.k * alphas[0].norm().powi(2 * n);
    let mut residuals = Vec::with_capacity(alphas.len());
    for &a in &alphas {
        let psi = coherent_state(a, spec.n_fock)?;
        let r = h.apply(&psi)? - psi.amplitudes() * C64::new(energy, 0.0);
        residuals.push(r.norm());
    }
    let mut levels = spectrum(&h);
    levels.sort_by(|a, b| (a - energy).abs().total_cmp(&(b - energy).abs()));
    let m = spec.n_drive as usize;
    let mut multiplet: Vec<f64> = levels[..m].to_vec();
    multiplet.sort_by(f64::total_cmp);
    let spread = multiplet[m - 1] - multiplet[0];
    let gap = levels
        .get(m)
        .map(|&e| multiplet.iter().map(|&x| (x - e).abs()).fold(f64::INFINITY, f64::min))
        .unwrap_or(f64::INFINITY);
    Ok(NPhotonReport {
        n_drive: spec.n_drive,
        amplitudes: alphas.iter().map(|a| (a.re, a.im)).collect(),
        residuals,
        multiplet,
        spread_to_gap: spread / gap,
    })
}
