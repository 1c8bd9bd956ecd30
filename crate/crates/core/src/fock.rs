// Copyright 2026 catkerr Contributors
// SPDX-License-Identifier: Apache-2.0

//! Truncated Fock-space operators and states.
//!
//! Every operator carries the per-mode truncation sizes (`dims`); the matrix
//! side is their product and modes are ordered as in a Kronecker product, the
//! first mode being the slowest-varying index.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, re, CMatrix, CVector, C64, ONE, ZERO};

/// Photon-number parity of a cat state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    /// Parity of the Fock level `n`.
    pub fn of_level(n: usize) -> Self {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

fn check_dims(data: &CMatrix, dims: &[usize]) -> Result<()> {
    let total: usize = dims.iter().product();
    if dims.is_empty() || data.nrows() != data.ncols() || data.nrows() != total {
        return Err(Error::DimensionMismatch {
            expected: dims.to_vec(),
            found: vec![data.nrows(), data.ncols()],
        });
    }
    Ok(())
}

fn require_same_dims(a: &[usize], b: &[usize]) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a.to_vec(), found: b.to_vec() });
    }
    Ok(())
}

/// Complex square matrix acting on a truncated (possibly multi-mode) Fock space.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    data: CMatrix,
    dims: Vec<usize>,
}

impl Operator {
    pub fn new(data: CMatrix, dims: Vec<usize>) -> Result<Self> {
        check_dims(&data, &dims)?;
        Ok(Self { data, dims })
    }

    /// Single-mode operator from a square matrix.
    pub fn from_matrix(data: CMatrix) -> Result<Self> {
        let n = data.nrows();
        Self::new(data, vec![n])
    }

    pub fn identity(dims: &[usize]) -> Self {
        let n = dims.iter().product();
        Self { data: CMatrix::identity(n, n), dims: dims.to_vec() }
    }

    pub fn zeros(dims: &[usize]) -> Self {
        let n = dims.iter().product();
        Self { data: CMatrix::zeros(n, n), dims: dims.to_vec() }
    }

    /// Annihilation operator with `<n-1|a|n> = sqrt(n)`.
    pub fn annihilation(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidTruncation { n, min: 2 });
        }
        let mut m = CMatrix::zeros(n, n);
        for k in 1..n {
            m[(k - 1, k)] = re((k as f64).sqrt());
        }
        Ok(Self { data: m, dims: vec![n] })
    }

    pub fn creation(n: usize) -> Result<Self> {
        Ok(Self::annihilation(n)?.adjoint())
    }

    /// Number operator `a^dagger a`.
    pub fn number(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidTruncation { n, min: 2 });
        }
        let diag = CVector::from_fn(n, |k, _| re(k as f64));
        Ok(Self { data: CMatrix::from_diagonal(&diag), dims: vec![n] })
    }

    /// Photon-number parity `(-1)^n`.
    pub fn parity(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidTruncation { n, min: 1 });
        }
        let diag = CVector::from_fn(n, |k, _| re(Parity::of_level(k).sign()));
        Ok(Self { data: CMatrix::from_diagonal(&diag), dims: vec![n] })
    }

    /// Displacement `D(beta) = exp(beta a^dagger - beta* a)`, exponentiated in
    /// the truncated space (exactly unitary there).
    pub fn displacement(beta: C64, n: usize) -> Result<Self> {
        let limit = n as f64 / 4.0;
        if beta.norm_sqr() > limit {
            return Err(Error::TruncationInadequate {
                what: "displacement",
                amplitude_sq: beta.norm_sqr(),
                limit,
                suggested_n: (4.0 * beta.norm_sqr()).ceil() as usize,
            });
        }
        let a = Self::annihilation(n)?;
        let generator = a.data.adjoint() * beta - &a.data * beta.conj();
        // i*G is Hermitian, so exp(G) = exp(-i (iG)).
        let herm = generator * linalg::I;
        Ok(Self { data: linalg::unitary_exp(&herm, 1.0), dims: vec![n] })
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        Self { data: self.data.adjoint(), dims: self.dims.clone() }
    }

    pub fn tensor(&self, other: &Operator) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { data: linalg::kron(&self.data, &other.data), dims }
    }

    /// Lifts a single-mode operator onto mode `mode` of a multi-mode space.
    pub fn embed(&self, mode: usize, dims: &[usize]) -> Result<Self> {
        if self.dims.len() != 1 || mode >= dims.len() || dims[mode] != self.dim() {
            return Err(Error::DimensionMismatch { expected: dims.to_vec(), found: self.dims.clone() });
        }
        let mut out: Option<Operator> = None;
        for (k, &d) in dims.iter().enumerate() {
            let factor = if k == mode { self.clone() } else { Self::identity(&[d]) };
            out = Some(match out {
                None => factor,
                Some(acc) => acc.tensor(&factor),
            });
        }
        Ok(out.expect("dims is non-empty"))
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { data: &self.data * c, dims: self.dims.clone() }
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut out = Self::identity(&self.dims);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn commutator(&self, other: &Operator) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        linalg::max_abs_diff(&self.data, &self.data.adjoint()) <= tol
    }

    pub fn apply(&self, psi: &PureState) -> Result<CVector> {
        require_same_dims(&self.dims, &psi.dims)?;
        Ok(&self.data * &psi.amplitudes)
    }

    /// `Tr(rho A)`.
    pub fn expect(&self, rho: &DensityMatrix) -> Result<C64> {
        require_same_dims(&self.dims, rho.dims())?;
        Ok(trace_product(rho.matrix(), &self.data))
    }

    /// `<psi|A|psi>`.
    pub fn expect_pure(&self, psi: &PureState) -> Result<C64> {
        let v = self.apply(psi)?;
        Ok(psi.amplitudes.dotc(&v))
    }
}

/// `Tr(A B)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

impl<'a> Mul<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn mul(self, rhs: &'a Operator) -> Operator {
        assert_eq!(self.dims, rhs.dims, "operator dims differ");
        Operator { data: &self.data * &rhs.data, dims: self.dims.clone() }
    }
}

impl<'a> Add<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn add(self, rhs: &'a Operator) -> Operator {
        assert_eq!(self.dims, rhs.dims, "operator dims differ");
        Operator { data: &self.data + &rhs.data, dims: self.dims.clone() }
    }
}

impl<'a> Sub<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn sub(self, rhs: &'a Operator) -> Operator {
        assert_eq!(self.dims, rhs.dims, "operator dims differ");
        Operator { data: &self.data - &rhs.data, dims: self.dims.clone() }
    }
}

impl Mul<C64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: C64) -> Operator {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        self.scale(re(rhs))
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale(re(-1.0))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Operator> for Operator {
            type Output = Operator;
            fn $m(self, rhs: Operator) -> Operator {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Operator> for Operator {
            type Output = Operator;
            fn $m(self, rhs: &'a Operator) -> Operator {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
    dims: Vec<usize>,
}

impl PureState {
    /// Normalizes `amplitudes`; fails on a zero vector or a size mismatch.
    pub fn new(amplitudes: CVector, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || amplitudes.len() != total {
            return Err(Error::DimensionMismatch { expected: dims, found: vec![amplitudes.len()] });
        }
        let norm = amplitudes.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidState(format!("cannot normalize vector of norm {norm}")));
        }
        Ok(Self { amplitudes: amplitudes.unscale(norm), dims })
    }

    pub fn fock(level: usize, n: usize) -> Result<Self> {
        if level >= n {
            return Err(Error::InvalidTruncation { n, min: level + 1 });
        }
        let mut v = CVector::zeros(n);
        v[level] = ONE;
        Ok(Self { amplitudes: v, dims: vec![n] })
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &PureState) -> Result<C64> {
        require_same_dims(&self.dims, &other.dims)?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn tensor(&self, other: &PureState) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let n2 = other.dim();
        let v = CVector::from_fn(self.dim() * n2, |i, _| self.amplitudes[i / n2] * other.amplitudes[i % n2]);
        Self { amplitudes: v, dims }
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            data: &self.amplitudes * self.amplitudes.adjoint(),
            dims: self.dims.clone(),
        }
    }

    /// Normalized linear combination `sum c_k |psi_k>`.
    pub fn superpose(terms: &[(C64, &PureState)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty superposition".into()))?;
        let mut v = CVector::zeros(first.1.dim());
        for (c, psi) in terms {
            require_same_dims(&first.1.dims, &psi.dims)?;
            v += &psi.amplitudes * *c;
        }
        Self::new(v, first.1.dims.clone())
    }
}

/// Density matrix satisfying the validated invariants (Hermitian, unit trace,
/// positive semidefinite within tolerance).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    data: CMatrix,
    dims: Vec<usize>,
}

/// Tolerances enforced by [`DensityMatrix::new`].
pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-8;
pub const POSITIVITY_TOL: f64 = 1e-8;

impl DensityMatrix {
    pub fn new(data: CMatrix, dims: Vec<usize>) -> Result<Self> {
        check_dims(&data, &dims)?;
        let rho = Self { data, dims };
        rho.validate()?;
        Ok(rho)
    }

    /// Wraps a matrix without validation; used inside the integrator where
    /// invariants are checked separately.
    pub fn from_matrix_unchecked(data: CMatrix, dims: Vec<usize>) -> Self {
        Self { data, dims }
    }

    pub fn validate(&self) -> Result<()> {
        let herm = linalg::max_abs_diff(&self.data, &self.data.adjoint());
        if herm > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {herm:.3e})")));
        }
        let tr = linalg::trace(&self.data);
        if (tr - ONE).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(())
    }

    pub fn fock(level: usize, n: usize) -> Result<Self> {
        Ok(PureState::fock(level, n)?.to_density())
    }

    /// Convex combination `sum w_k rho_k`; weights must be non-negative and sum to one.
    pub fn mixture(terms: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        let mut m = CMatrix::zeros(first.1.dim(), first.1.dim());
        let mut total = 0.0;
        for (w, rho) in terms {
            require_same_dims(&first.1.dims, &rho.dims)?;
            if *w < 0.0 {
                return Err(Error::InvalidArgument(format!("negative mixture weight {w}")));
            }
            total += w;
            m += &rho.data * re(*w);
        }
        if (total - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidArgument(format!("mixture weights sum to {total}")));
        }
        Self::new(m, first.1.dims.clone())
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.data).re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::eigvalsh(&self.data).first().copied().unwrap_or(0.0)
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        trace_product(&self.data, &self.data).re
    }

    /// Reduced state of `mode` (all other modes traced out).
    pub fn partial_trace(&self, mode: usize) -> Result<DensityMatrix> {
        if mode >= self.dims.len() {
            return Err(Error::InvalidArgument(format!("mode {mode} out of range")));
        }
        let d = self.dims[mode];
        let inner: usize = self.dims[mode + 1..].iter().product();
        let outer: usize = self.dims[..mode].iter().product();
        let mut out = CMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = ZERO;
                for o in 0..outer {
                    for r in 0..inner {
                        let row = (o * d + i) * inner + r;
                        let col = (o * d + j) * inner + r;
                        acc += self.data[(row, col)];
                    }
                }
                out[(i, j)] = acc;
            }
        }
        Ok(DensityMatrix { data: out, dims: vec![d] })
    }

    /// Von Neumann entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        linalg::eigvalsh(&self.data)
            .into_iter()
            .filter(|&p| p > 1e-15)
            .map(|p| -p * p.log2())
            .sum()
    }
}

fn amplitude_guard(what: &'static str, alpha: C64, n: usize) -> Result<()> {
    let limit = n as f64 / 2.0;
    if alpha.norm_sqr() > limit {
        return Err(Error::TruncationInadequate {
            what,
            amplitude_sq: alpha.norm_sqr(),
            limit,
            suggested_n: (2.0 * alpha.norm_sqr()).ceil().max(2.0) as usize,
        });
    }
    Ok(())
}

/// Unnormalized series `alpha^(n - offset) / sqrt(n!)` over the levels of the
/// requested parity (`None` keeps all levels, `offset` = 0).
fn scaled_series(alpha: C64, n: usize, parity: Option<Parity>) -> CVector {
    let mut v = CVector::zeros(n);
    match parity {
        None => {
            let mut c = ONE;
            v[0] = c;
            for k in 1..n {
                c *= alpha / (k as f64).sqrt();
                v[k] = c;
            }
        }
        Some(p) => {
            // Leading power removed so the alpha -> 0 limit stays finite.
            let start = if p == Parity::Even { 0 } else { 1 };
            let mut c = ONE;
            let a2 = alpha * alpha;
            let mut k = start;
            while k < n {
                v[k] = c;
                if k + 2 < n {
                    c *= a2 / (((k + 1) * (k + 2)) as f64).sqrt();
                }
                k += 2;
            }
        }
    }
    v
}

/// Coherent state `|alpha>`, renormalized after truncation.
pub fn coherent_state(alpha: C64, n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::InvalidTruncation { n, min: 2 });
    }
    amplitude_guard("coherent state", alpha, n)?;
    PureState::new(scaled_series(alpha, n, None), vec![n])
}

/// Cat state `N(|alpha> +/- |-alpha>)`. The odd cat at `alpha = 0` is the
/// normalized limit `|1>`.
pub fn cat_state(alpha: C64, parity: Parity, n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::InvalidTruncation { n, min: 2 });
    }
    amplitude_guard("cat state", alpha, n)?;
    let mut v = scaled_series(alpha, n, Some(parity));
    if parity == Parity::Odd && alpha.norm() > 0.0 {
        // Restore the alpha^1 phase factored out of the series.
        v *= alpha / alpha.norm();
    }
    PureState::new(v, vec![n])
}

/// Free-function form of [`Operator::annihilation`].
pub fn annihilation(n: usize) -> Result<Operator> {
    Operator::annihilation(n)
}

pub fn displacement(beta: C64, n: usize) -> Result<Operator> {
    Operator::displacement(beta, n)
}

pub fn tensor(a: &Operator, b: &Operator) -> Operator {
    a.tensor(b)
}

pub fn parity_operator(n: usize) -> Result<Operator> {
    Operator::parity(n)
}

/// Normalization constant `1 / sqrt(2 (1 +/- exp(-2|alpha|^2)))` of an
/// untruncated cat state.
pub fn cat_normalization(alpha: f64, parity: Parity) -> f64 {
    let s = (-2.0 * alpha * alpha).exp();
    1.0 / (2.0 * (1.0 + parity.sign() * s)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(x: f64, y: f64) -> C64 {
        C64::new(x, y)
    }

    #[test]
    fn annihilation_two_levels() {
        let a = annihilation(2).unwrap();
        assert_eq!(a.matrix()[(0, 1)], ONE);
        assert_eq!(a.matrix()[(0, 0)], ZERO);
        assert_eq!(a.matrix()[(1, 0)], ZERO);
        assert_eq!(a.matrix()[(1, 1)], ZERO);
    }

    #[test]
    fn annihilation_rejects_tiny_truncation() {
        assert_eq!(annihilation(1).unwrap_err(), Error::InvalidTruncation { n: 1, min: 2 });
    }

    #[test]
    fn commutator_is_identity_below_edge() {
        let a = annihilation(4).unwrap();
        let comm = a.commutator(&a.adjoint());
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j && i < 3 { 1.0 } else { 0.0 };
                if i == 3 && j == 3 {
                    // Truncation edge: 0 - 3.
                    assert_abs_diff_eq!(comm.matrix()[(i, j)].re, -3.0, epsilon = 1e-14);
                } else {
                    assert_abs_diff_eq!(comm.matrix()[(i, j)].re, expected, epsilon = 1e-14);
                }
            }
        }
    }

    #[test]
    fn coherent_state_is_eigenvector_of_a() {
        let n = 30;
        let alpha = c(2.0, 0.0);
        let psi = coherent_state(alpha, n).unwrap();
        let a = annihilation(n).unwrap();
        let residual = a.apply(&psi).unwrap() - psi.amplitudes() * alpha;
        assert!(residual.norm() < 1e-6, "residual {}", residual.norm());
    }

    #[test]
    fn coherent_vacuum_and_mean() {
        let psi = coherent_state(ZERO, 10).unwrap();
        assert_abs_diff_eq!(psi.amplitudes()[0].re, 1.0, epsilon = 1e-15);
        let psi = coherent_state(c(2.0, 0.0), 30).unwrap();
        let n = Operator::number(30).unwrap();
        assert_abs_diff_eq!(n.expect_pure(&psi).unwrap().re, 4.0, epsilon = 1e-6);
    }

    #[test]
    fn coherent_overlap_matches_gaussian_formula() {
        let p = coherent_state(c(2.0, 0.0), 30).unwrap();
        let m = coherent_state(c(-2.0, 0.0), 30).unwrap();
        let overlap = p.overlap(&m).unwrap().norm_sqr();
        assert_abs_diff_eq!(overlap, (-16.0f64).exp(), epsilon = 1e-9);
    }

    #[test]
    fn coherent_guard_suggests_truncation() {
        match coherent_state(c(4.0, 0.0), 20) {
            Err(Error::TruncationInadequate { suggested_n, .. }) => assert_eq!(suggested_n, 32),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cat_limits_at_zero_amplitude() {
        let even = cat_state(ZERO, Parity::Even, 10).unwrap();
        assert_abs_diff_eq!(even.amplitudes()[0].re, 1.0, epsilon = 1e-15);
        let odd = cat_state(ZERO, Parity::Odd, 10).unwrap();
        assert_abs_diff_eq!(odd.amplitudes()[1].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn cat_matches_superposition_of_coherent_states() {
        let n = 30;
        let alpha = c(1.3, 0.4);
        for parity in [Parity::Even, Parity::Odd] {
            let cat = cat_state(alpha, parity, n).unwrap();
            let p = coherent_state(alpha, n).unwrap();
            let m = coherent_state(-alpha, n).unwrap();
            let reference = PureState::superpose(&[(ONE, &p), (re(parity.sign()), &m)]).unwrap();
            assert_abs_diff_eq!(cat.overlap(&reference).unwrap().norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn even_cat_parity_is_plus_one() {
        // Oracle: sum of |c_n|^2 over even n.
        let cat = cat_state(c(2.0, 0.0), Parity::Even, 30).unwrap();
        let even_mass: f64 = cat.amplitudes().iter().step_by(2).map(|x| x.norm_sqr()).sum();
        let p = parity_operator(30).unwrap().expect_pure(&cat).unwrap().re;
        assert_abs_diff_eq!(even_mass, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn displacement_of_vacuum_is_coherent() {
        let d = displacement(re(0.0), 10).unwrap();
        assert!(linalg::max_abs_diff(d.matrix(), &CMatrix::identity(10, 10)) < 1e-12);

        let n = 40;
        let d = displacement(c(2.0, 0.0), n).unwrap();
        let vac = PureState::fock(0, n).unwrap();
        let out = PureState::new(d.apply(&vac).unwrap(), vec![n]).unwrap();
        let coh = coherent_state(c(2.0, 0.0), n).unwrap();
        assert!(out.overlap(&coh).unwrap().norm_sqr() > 1.0 - 1e-8);
    }

    #[test]
    fn displacement_inverse() {
        let n = 40;
        let beta = c(1.0, 0.5);
        let prod = &displacement(beta, n).unwrap() * &displacement(-beta, n).unwrap();
        assert!(linalg::max_abs_diff(prod.matrix(), &CMatrix::identity(n, n)) < 1e-8);
    }

    #[test]
    fn displacement_guard() {
        assert!(matches!(displacement(c(2.0, 0.0), 12), Err(Error::TruncationInadequate { .. })));
    }

    #[test]
    fn tensor_products() {
        let i6 = tensor(&Operator::identity(&[2]), &Operator::identity(&[3]));
        assert_eq!(i6, Operator::identity(&[2, 3]));
        let a = annihilation(4).unwrap();
        let b = annihilation(5).unwrap();
        let t = tensor(&a, &b);
        assert_eq!(t.dim(), 20);
        assert_eq!(t.dims(), &[4, 5]);

        let dims = [4, 5];
        let a1 = a.embed(0, &dims).unwrap();
        let a2 = b.embed(1, &dims).unwrap();
        assert!(a1.commutator(&a2).matrix().norm() < 1e-12);
    }

    #[test]
    fn parity_operator_diagonal() {
        let p = parity_operator(3).unwrap();
        let expected = CMatrix::from_diagonal(&CVector::from_vec(vec![ONE, -ONE, ONE]));
        assert_eq!(p.matrix(), &expected);
        let p2 = &p * &p;
        assert_eq!(p2, Operator::identity(&[3]));
    }

    #[test]
    fn partial_trace_of_product_state() {
        let a = cat_state(c(1.0, 0.0), Parity::Even, 8).unwrap();
        let b = coherent_state(c(0.5, 0.2), 6).unwrap();
        let rho = a.tensor(&b).to_density();
        let red = rho.partial_trace(1).unwrap();
        assert!(linalg::max_abs_diff(red.matrix(), b.to_density().matrix()) < 1e-12);
        let red0 = rho.partial_trace(0).unwrap();
        assert!(linalg::max_abs_diff(red0.matrix(), a.to_density().matrix()) < 1e-12);
        assert!(red.entropy_bits() < 1e-9);
    }

    #[test]
    fn density_validation_rejects_bad_trace() {
        let m = CMatrix::identity(3, 3);
        assert!(DensityMatrix::new(m, vec![3]).is_err());
    }

    #[test]
    fn cat_normalization_constant() {
        assert_abs_diff_eq!(cat_normalization(2.0, Parity::Even), 1.0 / (2.0 * (1.0 + (-8.0f64).exp())).sqrt());
        assert!(cat_normalization(1e-3, Parity::Odd) > 100.0);
    }
}
