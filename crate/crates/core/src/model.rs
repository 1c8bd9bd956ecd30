// Copyright 2026 catkerr Contributors
// SPDX-License-Identifier: Apache-2.0

//! Hamiltonians of the two-photon driven Kerr resonator and the closed-form
//! fixed-point amplitudes of its lossy effective Hamiltonian.
//!
//! All rates are in units of the Kerr amplitude when `k = 1`. The lab-frame
//! Hamiltonian is
//!
//! ```text
//! H0 = -K a+ a+ a a + Ep a+^2 + Ep* a^2
//! ```
//!
//! whose degenerate eigenstates are the coherent states `|+-sqrt(Ep/K)>`.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{coherent_state, Operator, PureState};
use crate::linalg::{self, re, CVector, C64, I, ONE, ZERO};

/// Physical parameters defining one simulation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    /// Kerr amplitude (sign allowed).
    #[serde(rename = "K")]
    pub k: f64,
    /// Two-photon drive amplitude.
    #[serde(rename = "Ep")]
    pub ep: C64,
    /// Single-photon loss rate.
    pub kappa: f64,
    /// Single-photon drive amplitude used by the Z gate.
    #[serde(rename = "Ez")]
    pub ez: f64,
    /// Drive-resonator detuning used by the X gate.
    pub delta_x: f64,
    /// Exchange coupling used by the ZZ gate.
    #[serde(rename = "Ezz")]
    pub ezz: f64,
    /// Photon order of the parametric drive.
    pub n_drive: u32,
    /// Fock-space truncation per mode.
    #[serde(rename = "N")]
    pub n_fock: usize,
}

impl ModelSpec {
    pub fn new(k: f64, ep: f64, n_fock: usize) -> Self {
        Self {
            k,
            ep: re(ep),
            kappa: 0.0,
            ez: 0.0,
            delta_x: 0.0,
            ezz: 0.0,
            n_drive: 2,
            n_fock,
        }
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn with_ep(mut self, ep: C64) -> Self {
        self.ep = ep;
        self
    }

    pub fn with_ez(mut self, ez: f64) -> Self {
        self.ez = ez;
        self
    }

    pub fn with_delta_x(mut self, delta_x: f64) -> Self {
        self.delta_x = delta_x;
        self
    }

    pub fn with_ezz(mut self, ezz: f64) -> Self {
        self.ezz = ezz;
        self
    }

    pub fn with_n_drive(mut self, n: u32) -> Self {
        self.n_drive = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa >= 0.0) {
            return Err(Error::InvalidArgument(format!("kappa must be >= 0, got {}", self.kappa)));
        }
        if self.n_fock < 2 {
            return Err(Error::InvalidTruncation { n: self.n_fock, min: 2 });
        }
        if self.n_drive < 2 {
            return Err(Error::InvalidArgument(format!("drive order must be >= 2, got {}", self.n_drive)));
        }
        let finite = [self.k, self.ep.re, self.ep.im, self.kappa, self.ez, self.delta_x, self.ezz]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidArgument("non-finite model parameter".into()));
        }
        if self.k == 0.0 && self.ep != ZERO {
            return Err(Error::InvalidArgument("a driven resonator needs K != 0".into()));
        }
        Ok(())
    }

    /// Lossless cat amplitude `sqrt(Ep/K)` (principal root).
    pub fn lossless_alpha(&self) -> C64 {
        if self.k == 0.0 {
            return ZERO;
        }
        (self.ep / self.k).sqrt()
    }
}

struct Ladder {
    a: Operator,
    ad: Operator,
}

impl Ladder {
    fn new(n: usize) -> Result<Self> {
        let a = Operator::annihilation(n)?;
        let ad = a.adjoint();
        Ok(Self { a, ad })
    }
}

/// `-K a+^n a^n + Ep a+^n + Ep* a^n` on a single mode.
fn driven_kerr(k: f64, ep: C64, order: u32, n: usize) -> Result<Operator> {
    let l = Ladder::new(n)?;
    let an = l.a.powi(order);
    let adn = l.ad.powi(order);
    let kerr = &(&adn * &an) * (-k);
    Ok(&(&kerr + &(&adn * ep)) + &(&an * ep.conj()))
}

/// Two-photon driven Kerr Hamiltonian `H0`.
pub fn build_h0(spec: &ModelSpec) -> Result<Operator> {
    spec.validate()?;
    driven_kerr(spec.k, spec.ep, 2, spec.n_fock)
}

/// n-photon driven Kerr Hamiltonian `Hn`.
pub fn build_hn(spec: &ModelSpec) -> Result<Operator> {
    spec.validate()?;
    let limit = spec.n_fock as f64 / 3.0;
    if spec.n_drive as f64 > limit {
        return Err(Error::TruncationInadequate {
            what: "n-photon drive",
            amplitude_sq: spec.n_drive as f64,
            limit,
            suggested_n: 3 * spec.n_drive as usize,
        });
    }
    driven_kerr(spec.k, spec.ep, spec.n_drive, spec.n_fock)
}

/// `H0 + Ez (a+ + a)`.
pub fn build_hz(spec: &ModelSpec) -> Result<Operator> {
    let h0 = build_h0(spec)?;
    let l = Ladder::new(spec.n_fock)?;
    Ok(&h0 + &(&(&l.ad + &l.a) * spec.ez))
}

/// `H0 + delta_x a+ a`.
pub fn build_hx(spec: &ModelSpec) -> Result<Operator> {
    let h0 = build_h0(spec)?;
    let l = Ladder::new(spec.n_fock)?;
    Ok(&h0 + &(&(&l.ad * &l.a) * spec.delta_x))
}

/// Two identical driven resonators with exchange coupling:
/// `H01 + H02 + Ezz (a1+ a2 + a1 a2+)`.
pub fn build_hzz(spec: &ModelSpec) -> Result<Operator> {
    let h0 = build_h0(spec)?;
    let n = spec.n_fock;
    let dims = [n, n];
    let l = Ladder::new(n)?;
    let a1 = l.a.embed(0, &dims)?;
    let a2 = l.a.embed(1, &dims)?;
    let h01 = h0.embed(0, &dims)?;
    let h02 = h0.embed(1, &dims)?;
    let hop = &(&a1.adjoint() * &a2) + &(&a1 * &a2.adjoint());
    Ok(&(&h01 + &h02) + &(&hop * spec.ezz))
}

/// Non-Hermitian no-jump Hamiltonian `H0 - i kappa a+ a / 2`.
pub fn build_heff(spec: &ModelSpec) -> Result<Operator> {
    let h0 = build_h0(spec)?;
    let l = Ladder::new(spec.n_fock)?;
    Ok(&h0 + &(&(&l.ad * &l.a) * C64::new(0.0, -spec.kappa / 2.0)))
}

/// Which sign of the loss-induced rotation was selected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Positive,
    Negative,
}

/// How the rotation sign was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchCriterion {
    /// Smaller `||(Heff - E)|alpha>||` in the truncated space.
    HeffResidual,
    /// Truncation too small for the residual; smaller displaced-frame linear term.
    LinearTerm,
    /// No loss: rotation is zero.
    Lossless,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "kebab-case")]
pub enum AmplitudeStatus {
    AboveThreshold { branch: Branch, criterion: BranchCriterion },
    /// `4|Ep|^2 <= kappa^2/4`: no nonzero fixed point.
    BelowThreshold,
}

/// Fixed-point amplitude `alpha0 = r0 exp(i theta0)` of the lossy effective Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenAmplitude {
    pub r0: f64,
    /// Total phase of `alpha0` (includes `arg(Ep/K)/2`).
    pub theta0: f64,
    /// Loss-induced rotation relative to the lossless phase.
    pub rotation: f64,
    pub alpha0: C64,
    pub status: AmplitudeStatus,
}

impl EigenAmplitude {
    pub fn is_above_threshold(&self) -> bool {
        matches!(self.status, AmplitudeStatus::AboveThreshold { .. })
    }
}

/// Constant energy shift dropped in the displaced frame,
/// `-K|a0|^4 + Ep* a0^2 + Ep a0*^2 - i kappa |a0|^2 / 2`.
pub fn displaced_energy(spec: &ModelSpec, alpha0: C64) -> C64 {
    let n0 = alpha0.norm_sqr();
    -spec.k * n0 * n0 + spec.ep.conj() * alpha0 * alpha0 + spec.ep * alpha0.conj() * alpha0.conj()
        - I * (spec.kappa * n0 / 2.0)
}

/// Coefficient of `a+` left after displacing `Heff` by `alpha0`:
/// `-2K a0^2 a0* + 2 Ep a0* - i (kappa/2) a0`.
pub fn displaced_linear_residual(spec: &ModelSpec, alpha0: C64) -> C64 {
    -2.0 * spec.k * alpha0 * alpha0 * alpha0.conj() + 2.0 * spec.ep * alpha0.conj()
        - I * (spec.kappa / 2.0) * alpha0
}

/// Relative eigen-residual `||(Heff - E)|alpha0>|| / ||Heff|alpha0>||`.
pub fn heff_relative_residual(spec: &ModelSpec, heff: &Operator, alpha0: C64) -> Result<f64> {
    let psi = coherent_state(alpha0, spec.n_fock)?;
    let h_psi = heff.apply(&psi)?;
    let e = displaced_energy(spec, alpha0);
    let resid: CVector = &h_psi - psi.amplitudes() * e;
    Ok(resid.norm() / h_psi.norm())
}

/// Closed-form lossy fixed point.
///
/// `r0 = ((4|Ep|^2 - kappa^2/4) / (4K^2))^(1/4)` and
/// `|tan 2 theta| = kappa / sqrt(16|Ep|^2 - kappa^2)`; the sign of the
/// rotation is chosen by the smaller effective-Hamiltonian residual.
pub fn lossy_eigen_amplitude(spec: &ModelSpec) -> Result<EigenAmplitude> {
    spec.validate()?;
    let ep_abs = spec.ep.norm();
    let disc = 4.0 * ep_abs * ep_abs - spec.kappa * spec.kappa / 4.0;
    if disc <= 0.0 || spec.k == 0.0 {
        return Ok(EigenAmplitude {
            r0: 0.0,
            theta0: 0.0,
            rotation: 0.0,
            alpha0: ZERO,
            status: AmplitudeStatus::BelowThreshold,
        });
    }
    let r0 = (disc / (4.0 * spec.k * spec.k)).powf(0.25);
    let base = spec.lossless_alpha().arg();
    if spec.kappa == 0.0 {
        return Ok(EigenAmplitude {
            r0,
            theta0: base,
            rotation: 0.0,
            alpha0: C64::from_polar(r0, base),
            status: AmplitudeStatus::AboveThreshold {
                branch: Branch::Positive,
                criterion: BranchCriterion::Lossless,
            },
        });
    }
    let magnitude = 0.5 * (spec.kappa / (16.0 * ep_abs * ep_abs - spec.kappa * spec.kappa).sqrt()).atan();
    let candidates = [(Branch::Positive, magnitude), (Branch::Negative, -magnitude)];

    let adequate = r0 * r0 <= spec.n_fock as f64 / 2.0;
    let (criterion, scores) = if adequate {
        let heff = build_heff(spec)?;
        let mut s = [0.0; 2];
        for (slot, (_, rot)) in s.iter_mut().zip(candidates.iter()) {
            *slot = heff_relative_residual(spec, &heff, C64::from_polar(r0, base + rot))?;
        }
        (BranchCriterion::HeffResidual, s)
    } else {
        let s = candidates.map(|(_, rot)| displaced_linear_residual(spec, C64::from_polar(r0, base + rot)).norm());
        (BranchCriterion::LinearTerm, s)
    };
    let pick = if scores[0] <= scores[1] { 0 } else { 1 };
    let (branch, rotation) = candidates[pick];
    Ok(EigenAmplitude {
        r0,
        theta0: base + rotation,
        rotation,
        alpha0: C64::from_polar(r0, base + rotation),
        status: AmplitudeStatus::AboveThreshold { branch, criterion },
    })
}

/// Two drive amplitudes give the same `|alpha0|`; this returns the real
/// `Ep > 0` for which the lossy fixed point has modulus `r0` at the given
/// `K` and `kappa` (inverse of the `r0` formula).
pub fn drive_for_amplitude(k: f64, kappa: f64, r0: f64) -> f64 {
    ((4.0 * k * k * r0.powi(4) + kappa * kappa / 4.0) / 4.0).sqrt()
}

/// Orthonormal logical basis built from `{|alpha0>, |-alpha0>}` by symmetric
/// (Loewdin) orthonormalization.
#[derive(Clone, Debug)]
pub struct LogicalBasis {
    pub alpha0: C64,
    pub zero: PureState,
    pub one: PureState,
    /// `<alpha0|-alpha0>` before orthonormalization.
    pub overlap: C64,
}

impl LogicalBasis {
    pub fn new(alpha0: C64, n: usize) -> Result<Self> {
        let p = coherent_state(alpha0, n)?;
        let m = coherent_state(-alpha0, n)?;
        let s = p.overlap(&m)?;
        if s.norm() > 0.99 {
            return Err(Error::IllConditionedBasis { overlap: s.norm() });
        }
        // S = [[1, s], [s*, 1]]; S^{-1/2} via its 2x2 eigendecomposition.
        let gram = Matrix2::new(ONE, s, s.conj(), ONE);
        let inv_sqrt = inverse_sqrt_2x2(&gram);
        let zero = PureState::superpose(&[(inv_sqrt[(0, 0)], &p), (inv_sqrt[(1, 0)], &m)])?;
        let one = PureState::superpose(&[(inv_sqrt[(0, 1)], &p), (inv_sqrt[(1, 1)], &m)])?;
        Ok(Self { alpha0, zero, one, overlap: s })
    }

    /// `(|0> + |1>)/sqrt(2)`, proportional to the even cat.
    pub fn plus(&self) -> PureState {
        PureState::superpose(&[(ONE, &self.zero), (ONE, &self.one)]).expect("basis states are orthonormal")
    }

    /// `(|0> - |1>)/sqrt(2)`, proportional to the odd cat.
    pub fn minus(&self) -> PureState {
        PureState::superpose(&[(ONE, &self.zero), (-ONE, &self.one)]).expect("basis states are orthonormal")
    }

    /// `c0 |0> + c1 |1>`.
    pub fn state(&self, c0: C64, c1: C64) -> Result<PureState> {
        PureState::superpose(&[(c0, &self.zero), (c1, &self.one)])
    }
}

fn inverse_sqrt_2x2(m: &Matrix2<C64>) -> Matrix2<C64> {
    let eig = m.symmetric_eigen();
    let d = Matrix2::from_diagonal(&eig.eigenvalues.map(|v| re(1.0 / v.sqrt())));
    eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Matrix elements `<i|A|j>` in the orthonormal logical basis.
pub fn project_to_logical(op: &Operator, alpha0: C64) -> Result<Matrix2<C64>> {
    if op.dims().len() != 1 {
        return Err(Error::InvalidArgument("logical projection needs a single-mode operator".into()));
    }
    let basis = LogicalBasis::new(alpha0, op.dim())?;
    project_onto(op, &basis.zero, &basis.one)
}

/// Raw matrix elements `<+-alpha0|A|+-alpha0>` in the non-orthogonal pair of
/// coherent states. This is the form in which the logical identities
/// `<A> = |a0|^2 I - |a0|^2 e^{-2|a0|^2} X` etc. hold exactly.
pub fn coherent_pair_matrix(op: &Operator, alpha0: C64) -> Result<Matrix2<C64>> {
    let p = coherent_state(alpha0, op.dim())?;
    let m = coherent_state(-alpha0, op.dim())?;
    project_onto(op, &p, &m)
}

fn project_onto(op: &Operator, zero: &PureState, one: &PureState) -> Result<Matrix2<C64>> {
    let a0 = op.apply(zero)?;
    let a1 = op.apply(one)?;
    Ok(Matrix2::new(
        zero.amplitudes().dotc(&a0),
        zero.amplitudes().dotc(&a1),
        one.amplitudes().dotc(&a0),
        one.amplitudes().dotc(&a1),
    ))
}

/// Roots `alpha^n = Ep/K`: the `n` coherent states degenerate under `Hn`.
pub fn n_photon_amplitudes(spec: &ModelSpec) -> Vec<C64> {
    let n = spec.n_drive as f64;
    let ratio = spec.ep / spec.k;
    let modulus = ratio.norm().powf(1.0 / n);
    (0..spec.n_drive)
        .map(|j| C64::from_polar(modulus, (ratio.arg() + 2.0 * std::f64::consts::PI * j as f64) / n))
        .collect()
}

/// Eigenvalues of a Hermitian model Hamiltonian, ascending.
pub fn spectrum(h: &Operator) -> Vec<f64> {
    linalg::eigvalsh(h.matrix())
}
