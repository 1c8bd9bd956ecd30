// Copyright 2026 catkerr Contributors
// SPDX-License-Identifier: Apache-2.0

//! Fidelities, scalar expectation values and the Wigner function.
//!
//! Two fidelity conventions are exposed. [`fidelity`] is the squared form
//! (`<psi|rho|psi>` for a pure target, `(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`
//! otherwise) and [`root_fidelity`] is its square root.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, Operator, PureState};
use crate::linalg::{self, C64};

/// Reference state for a fidelity.
#[derive(Clone, Copy, Debug)]
pub enum Target<'a> {
    Pure(&'a PureState),
    Mixed(&'a DensityMatrix),
}

impl<'a> From<&'a PureState> for Target<'a> {
    fn from(p: &'a PureState) -> Self {
        Target::Pure(p)
    }
}

impl<'a> From<&'a DensityMatrix> for Target<'a> {
    fn from(r: &'a DensityMatrix) -> Self {
        Target::Mixed(r)
    }
}

impl Target<'_> {
    fn dims(&self) -> &[usize] {
        match self {
            Target::Pure(p) => p.dims(),
            Target::Mixed(r) => r.dims(),
        }
    }
}

fn check(rho: &DensityMatrix, target: &Target<'_>) -> Result<()> {
    if rho.dims() != target.dims() {
        return Err(Error::DimensionMismatch { expected: rho.dims().to_vec(), found: target.dims().to_vec() });
    }
    Ok(())
}

/// Squared fidelity on `[0, 1]`.
pub fn fidelity<'a>(rho: &DensityMatrix, target: impl Into<Target<'a>>) -> Result<f64> {
    let target = target.into();
    check(rho, &target)?;
    let f = match target {
        Target::Pure(psi) => {
            let v = psi.amplitudes();
            v.dotc(&(rho.matrix() * v)).re
        }
        Target::Mixed(sigma) => uhlmann_root(rho, sigma).powi(2),
    };
    Ok(f.clamp(0.0, 1.0))
}

/// `Tr sqrt(sqrt(rho) sigma sqrt(rho))`, equal to `sqrt(<psi|rho|psi>)` for a pure target.
pub fn root_fidelity<'a>(rho: &DensityMatrix, target: impl Into<Target<'a>>) -> Result<f64> {
    let target = target.into();
    check(rho, &target)?;
    Ok(match target {
        Target::Pure(_) => fidelity(rho, target)?.sqrt(),
        Target::Mixed(sigma) => uhlmann_root(rho, sigma).clamp(0.0, 1.0),
    })
}

/// Eigenvalues below this fraction of the largest are treated as round-off;
/// their square roots would otherwise bias the trace at the 1e-8 level.
const SPECTRAL_CUTOFF: f64 = 1e-13;

fn uhlmann_root(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let (vals, _) = linalg::eigh(rho.matrix());
    let cut = SPECTRAL_CUTOFF * vals.last().copied().unwrap_or(0.0).max(0.0);
    let s = linalg::hermitian_map(rho.matrix(), |v| C64::new(if v > cut { v.sqrt() } else { 0.0 }, 0.0));
    let m = &s * sigma.matrix() * &s;
    let ev = linalg::eigvalsh(&m);
    let cut = SPECTRAL_CUTOFF * ev.last().copied().unwrap_or(0.0).max(0.0);
    ev.iter().filter(|&&v| v > cut).map(|v| v.sqrt()).sum()
}

/// Both conventions for reporting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityPair {
    pub squared: f64,
    pub root: f64,
}

pub fn fidelity_pair<'a>(rho: &DensityMatrix, target: impl Into<Target<'a>>) -> Result<FidelityPair> {
    let target = target.into();
    Ok(FidelityPair { squared: fidelity(rho, target)?, root: root_fidelity(rho, target)? })
}

/// `Tr(rho P)` over all modes.
pub fn parity_expectation(rho: &DensityMatrix) -> f64 {
    let dims = rho.dims();
    let mut total = 0.0;
    for i in 0..rho.dim() {
        let mut idx = i;
        let mut photons = 0usize;
        for &d in dims.iter().rev() {
            photons += idx % d;
            idx /= d;
        }
        let sign = if photons % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * rho.matrix()[(i, i)].re;
    }
    total
}

/// `Tr(rho a+ a)` summed over all modes.
pub fn mean_photon(rho: &DensityMatrix) -> f64 {
    let dims = rho.dims();
    let mut total = 0.0;
    for i in 0..rho.dim() {
        let mut idx = i;
        let mut photons = 0usize;
        for &d in dims.iter().rev() {
            photons += idx % d;
            idx /= d;
        }
        total += photons as f64 * rho.matrix()[(i, i)].re;
    }
    total
}

pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

/// Expectation of an arbitrary operator.
pub fn expectation(op: &Operator, rho: &DensityMatrix) -> Result<C64> {
    op.expect(rho)
}

/// Rectangular phase-space grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub p_min: f64,
    pub p_max: f64,
    pub np: usize,
}

/// Default points per axis.
pub const DEFAULT_GRID_POINTS: usize = 201;

impl GridSpec {
    pub fn symmetric(half_width: f64, points: usize) -> Self {
        Self { x_min: -half_width, x_max: half_width, nx: points, p_min: -half_width, p_max: half_width, np: points }
    }

    /// 201 x 201 over `+-(|alpha0| + 4)`.
    pub fn around(alpha0: C64) -> Self {
        Self::symmetric(alpha0.norm() + 4.0, DEFAULT_GRID_POINTS)
    }

    fn axis(min: f64, max: f64, n: usize) -> Vec<f64> {
        if n == 1 {
            return vec![min];
        }
        (0..n).map(|i| min + (max - min) * i as f64 / (n - 1) as f64).collect()
    }

    pub fn x_axis(&self) -> Vec<f64> {
        Self::axis(self.x_min, self.x_max, self.nx)
    }

    pub fn p_axis(&self) -> Vec<f64> {
        Self::axis(self.p_min, self.p_max, self.np)
    }

    fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.np == 0 {
            return Err(Error::InvalidArgument("grid needs at least one point per axis".into()));
        }
        if !(self.x_max >= self.x_min && self.p_max >= self.p_min) {
            return Err(Error::InvalidArgument("grid bounds must be ordered".into()));
        }
        Ok(())
    }
}

/// Largest `2|beta|^2` for which the Gaussian prefactor stays representable.
pub const WIGNER_MAX_EXPONENT: f64 = 700.0;

/// `W(x, p)` stored row-major over `p` then `x`: `values[ip * nx + ix]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WignerGrid {
    pub x_axis: Vec<f64>,
    pub p_axis: Vec<f64>,
    pub values: Vec<f64>,
}

impl WignerGrid {
    pub fn at(&self, ix: usize, ip: usize) -> f64 {
        self.values[ip * self.x_axis.len() + ix]
    }

    fn spacing(axis: &[f64]) -> f64 {
        if axis.len() < 2 {
            1.0
        } else {
            axis[1] - axis[0]
        }
    }

    /// `sum W dx dp`.
    pub fn riemann_sum(&self) -> f64 {
        self.values.iter().sum::<f64>() * Self::spacing(&self.x_axis) * Self::spacing(&self.p_axis)
    }

    /// Grid indices of the global maximum.
    pub fn argmax(&self) -> (usize, usize) {
        let (i, _) = self
            .values
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        (i % self.x_axis.len(), i / self.x_axis.len())
    }

    /// Interior points larger than their eight neighbours and above `floor`.
    pub fn local_maxima(&self, floor: f64) -> Vec<(f64, f64, f64)> {
        let nx = self.x_axis.len();
        let np = self.p_axis.len();
        let mut out = Vec::new();
        for ip in 1..np.saturating_sub(1) {
            for ix in 1..nx.saturating_sub(1) {
                let v = self.at(ix, ip);
                if v <= floor {
                    continue;
                }
                let is_max = (-1i64..=1).all(|dp| {
                    (-1i64..=1).all(|dx| {
                        (dx == 0 && dp == 0) || self.at((ix as i64 + dx) as usize, (ip as i64 + dp) as usize) < v
                    })
                });
                if is_max {
                    out.push((self.x_axis[ix], self.p_axis[ip], v));
                }
            }
        }
        out
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `W(beta) = (2/pi) Tr[D+(beta) rho D(beta) P]` at `beta = x + i p`.
pub fn wigner_point(rho: &DensityMatrix, beta: C64) -> Result<f64> {
    require_single_mode(rho)?;
    check_exponent(beta.norm_sqr())?;
    let mut work = vec![C64::new(0.0, 0.0); rho.dim()];
    Ok(wigner_laguerre(rho.matrix(), beta, &mut work))
}

/// Wigner function on a grid; points are evaluated in parallel.
pub fn wigner(rho: &DensityMatrix, grid: &GridSpec) -> Result<WignerGrid> {
    require_single_mode(rho)?;
    grid.validate()?;
    let x_axis = grid.x_axis();
    let p_axis = grid.p_axis();
    let max_sq = [grid.x_min.abs(), grid.x_max.abs()].iter().fold(0.0f64, |a, &b| a.max(b)).powi(2)
        + [grid.p_min.abs(), grid.p_max.abs()].iter().fold(0.0f64, |a, &b| a.max(b)).powi(2);
    check_exponent(max_sq)?;
    let nx = x_axis.len();
    let m = rho.matrix();
    let values: Vec<f64> = (0..nx * p_axis.len())
        .into_par_iter()
        .map_init(
            || vec![C64::new(0.0, 0.0); rho.dim()],
            |work, idx| wigner_laguerre(m, C64::new(x_axis[idx % nx], p_axis[idx / nx]), work),
        )
        .collect();
    Ok(WignerGrid { x_axis, p_axis, values })
}

fn require_single_mode(rho: &DensityMatrix) -> Result<()> {
    if rho.dims().len() != 1 {
        return Err(Error::InvalidArgument("Wigner function is defined here for a single mode".into()));
    }
    Ok(())
}

fn check_exponent(beta_sq: f64) -> Result<()> {
    if 2.0 * beta_sq > WIGNER_MAX_EXPONENT {
        return Err(Error::Domain(format!(
            "Wigner grid reaches |beta|^2 = {beta_sq:.1}; exp(-2|beta|^2) underflows beyond {}",
            WIGNER_MAX_EXPONENT / 2.0
        )));
    }
    Ok(())
}

/// Laguerre-polynomial recurrence for the displaced-parity Wigner function.
///
/// `w[n]` holds the matrix element of the Wigner kernel for the current row;
/// the sum runs over the upper triangle of `rho` using Hermiticity.
fn wigner_laguerre(rho: &linalg::CMatrix, a: C64, w: &mut [C64]) -> f64 {
    let m = rho.nrows();
    w[0] = C64::new((-2.0 * a.norm_sqr()).exp() / std::f64::consts::PI, 0.0);
    let mut total = rho[(0, 0)].re * w[0].re;
    for n in 1..m {
        w[n] = a * 2.0 * w[n - 1] / (n as f64).sqrt();
        total += 2.0 * (rho[(0, n)] * w[n]).re;
    }
    for row in 1..m {
        let sr = (row as f64).sqrt();
        let mut temp = w[row];
        w[row] = (a.conj() * 2.0 * temp - w[row - 1] * sr) / sr;
        total += (rho[(row, row)] * w[row]).re;
        for n in row + 1..m {
            let next = (a * 2.0 * w[n - 1] - temp * sr) / (n as f64).sqrt();
            temp = w[n];
            w[n] = next;
            total += 2.0 * (rho[(row, n)] * w[n]).re;
        }
    }
    2.0 * total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{cat_state, coherent_state, displacement, parity_operator, Parity};
    use crate::linalg::re;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    /// Direct `(2/pi) Tr[D+ rho D P]` with the displacement built in an
    /// enlarged space so truncation does not bias the oracle.
    fn oracle(rho: &DensityMatrix, beta: C64) -> f64 {
        let n = rho.dim();
        let big = 4 * n + 40;
        let mut padded = linalg::CMatrix::zeros(big, big);
        padded.view_mut((0, 0), (n, n)).copy_from(rho.matrix());
        let d = displacement(-beta, big).unwrap();
        let shifted = d.matrix() * padded * d.matrix().adjoint();
        let p = parity_operator(big).unwrap();
        2.0 / PI * crate::fock::trace_product(&shifted, p.matrix()).re
    }

    #[test]
    fn pure_fidelity_limits() {
        let psi = coherent_state(re(1.0), 10).unwrap();
        assert_abs_diff_eq!(fidelity(&psi.to_density(), &psi).unwrap(), 1.0, epsilon = 1e-12);
        let f0 = crate::fock::PureState::fock(0, 4).unwrap();
        let f1 = crate::fock::PureState::fock(1, 4).unwrap();
        assert_eq!(fidelity(&f0.to_density(), &f1).unwrap(), 0.0);
    }

    #[test]
    fn mixed_fidelity_self_and_symmetry() {
        let a = coherent_state(re(2.0), 25).unwrap().to_density();
        let b = coherent_state(re(-2.0), 25).unwrap().to_density();
        let rs = DensityMatrix::mixture(&[(0.5, &a), (0.5, &b)]).unwrap();
        assert_abs_diff_eq!(fidelity(&rs, &rs).unwrap(), 1.0, epsilon = 1e-8);
        let f_ab = fidelity(&rs, &a).unwrap();
        let f_ba = fidelity(&a, &rs).unwrap();
        assert_abs_diff_eq!(f_ab, f_ba, epsilon = 1e-8);
        // Pure-target shortcut agrees with the Uhlmann path.
        let psi = coherent_state(re(2.0), 25).unwrap();
        assert_abs_diff_eq!(fidelity(&rs, &psi).unwrap(), f_ab, epsilon = 1e-8);
        assert_abs_diff_eq!(root_fidelity(&rs, &psi).unwrap(), f_ab.sqrt(), epsilon = 1e-8);
    }

    #[test]
    fn fidelity_dimension_mismatch() {
        let a = coherent_state(re(1.0), 10).unwrap();
        let b = DensityMatrix::fock(0, 11).unwrap();
        assert!(matches!(fidelity(&b, &a), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn scalar_observables() {
        let cat = cat_state(re(2.0), Parity::Even, 30).unwrap().to_density();
        assert_abs_diff_eq!(parity_expectation(&cat), 1.0, epsilon = 1e-10);
        let coh = coherent_state(re(2.0), 30).unwrap().to_density();
        assert_abs_diff_eq!(mean_photon(&coh), 4.0, epsilon = 1e-6);
        let p = parity_operator(30).unwrap();
        assert_abs_diff_eq!(parity_expectation(&coh), p.expect(&coh).unwrap().re, epsilon = 1e-12);
        let a = coherent_state(re(4.0), 60).unwrap().to_density();
        let b = coherent_state(re(-4.0), 60).unwrap().to_density();
        let rs = DensityMatrix::mixture(&[(0.5, &a), (0.5, &b)]).unwrap();
        assert_abs_diff_eq!(purity(&rs), 0.5, epsilon = 1e-3);
    }

    #[test]
    fn two_mode_parity_and_photons() {
        let s = crate::fock::PureState::fock(1, 3).unwrap().tensor(&crate::fock::PureState::fock(2, 3).unwrap());
        let rho = s.to_density();
        assert_eq!(parity_expectation(&rho), -1.0);
        assert_eq!(mean_photon(&rho), 3.0);
    }

    #[test]
    fn vacuum_peak() {
        let vac = DensityMatrix::fock(0, 10).unwrap();
        assert_abs_diff_eq!(wigner_point(&vac, re(0.0)).unwrap(), 2.0 / PI, epsilon = 1e-12);
    }

    #[test]
    fn odd_cat_negative_origin() {
        let odd = cat_state(re(2.0), Parity::Odd, 30).unwrap().to_density();
        assert_abs_diff_eq!(wigner_point(&odd, re(0.0)).unwrap(), -2.0 / PI, epsilon = 1e-4);
    }

    #[test]
    fn recurrence_matches_displaced_parity() {
        let psi = cat_state(C64::new(1.2, 0.7), Parity::Even, 20).unwrap();
        let rho = DensityMatrix::mixture(&[(0.7, &psi.to_density()), (0.3, &DensityMatrix::fock(3, 20).unwrap())])
            .unwrap();
        for beta in [C64::new(0.0, 0.0), C64::new(1.2, 0.7), C64::new(-0.4, 1.1), C64::new(2.0, -1.5)] {
            assert_abs_diff_eq!(wigner_point(&rho, beta).unwrap(), oracle(&rho, beta), epsilon = 1e-9);
        }
    }

    #[test]
    fn coherent_gaussian() {
        let alpha = C64::new(1.0, 0.5);
        let rho = coherent_state(alpha, 20).unwrap().to_density();
        let grid = wigner(&rho, &GridSpec::symmetric(4.0, 81)).unwrap();
        let (ix, ip) = grid.argmax();
        assert_abs_diff_eq!(grid.x_axis[ix], 1.0, epsilon = 0.1);
        assert_abs_diff_eq!(grid.p_axis[ip], 0.5, epsilon = 0.1);
        assert_abs_diff_eq!(grid.max(), 2.0 / PI, epsilon = 1e-3);
        // Variance 1/4 per quadrature: W falls to e^{-1/2} of peak at distance 1/2.
        let v = wigner_point(&rho, alpha + 0.5).unwrap();
        assert_abs_diff_eq!(v / (2.0 / PI), (-0.5f64).exp(), epsilon = 1e-8);
        assert_abs_diff_eq!(grid.riemann_sum(), 1.0, epsilon = 0.02);
    }

    #[test]
    fn grid_layout_is_p_major() {
        let rho = coherent_state(re(1.0), 12).unwrap().to_density();
        let spec = GridSpec { x_min: -1.0, x_max: 1.0, nx: 3, p_min: 0.0, p_max: 1.0, np: 2 };
        let g = wigner(&rho, &spec).unwrap();
        assert_eq!(g.values.len(), 6);
        assert_abs_diff_eq!(g.values[1 * 3 + 2], wigner_point(&rho, C64::new(1.0, 1.0)).unwrap(), epsilon = 1e-14);
    }

    #[test]
    fn underflow_guard() {
        let rho = DensityMatrix::fock(0, 4).unwrap();
        assert!(wigner(&rho, &GridSpec::symmetric(30.0, 3)).is_err());
    }
}
