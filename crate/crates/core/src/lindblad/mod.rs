// Copyright 2026 catkerr Contributors
// SPDX-License-Identifier: Apache-2.0

//! Master-equation time evolution of density matrices.
//!
//! ```text
//! d rho/dt = -i [H(t), rho] + sum_k (L_k rho L_k+ - 1/2 {L_k+ L_k, rho})
//! ```
//!
//! integrated with an adaptive Dormand-Prince 5(4) pair. Vectorization for
//! the superoperator uses column stacking: `vec(A X B) = (B^T (x) A) vec(X)`.

mod integrator;
mod sparse;
mod steady;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, Operator, PureState};
use crate::linalg::{CMatrix, C64, I};

pub use integrator::evolve;
pub(crate) use integrator::Integrator;
pub use steady::{liouvillian, steady_state, SteadyStateMethod, SteadyStateOptions, LIOUVILLIAN_MAX_DIM};

use sparse::Csr;

/// Complex time-dependent amplitude.
pub trait Envelope: Send + Sync {
    fn value(&self, t: f64) -> C64;
}

impl<F: Fn(f64) -> C64 + Send + Sync> Envelope for F {
    fn value(&self, t: f64) -> C64 {
        self(t)
    }
}

/// Hermitian Hamiltonian term with arbitrary time dependence.
pub trait HamiltonianTerm: Send + Sync {
    /// `out += T(t) rho`.
    fn add_apply(&self, t: f64, rho: &CMatrix, out: &mut CMatrix);
    /// Dense `T(t)`.
    fn matrix(&self, t: f64) -> CMatrix;
}

#[derive(Clone)]
struct Drive {
    envelope: Arc<dyn Envelope>,
    op: Operator,
}

/// `H(t) = H_base + sum_j [f_j(t) O_j + f_j(t)* O_j+] + sum_k T_k(t)`.
///
/// Drive terms are Hermitian by construction.
#[derive(Clone)]
pub struct Hamiltonian {
    base: Operator,
    drives: Vec<Drive>,
    terms: Vec<Arc<dyn HamiltonianTerm>>,
}

impl std::fmt::Debug for Hamiltonian {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Hamiltonian")
            .field("dims", &self.base.dims())
            .field("drives", &self.drives.len())
            .field("terms", &self.terms.len())
            .finish()
    }
}

impl Hamiltonian {
    pub fn new(base: Operator) -> Self {
        Self { base, drives: Vec::new(), terms: Vec::new() }
    }

    pub fn zero(dims: &[usize]) -> Self {
        Self::new(Operator::zeros(dims))
    }

    /// Adds `f(t) op + f(t)* op+`.
    pub fn with_drive(mut self, envelope: impl Envelope + 'static, op: Operator) -> Result<Self> {
        self.require_dims(&op)?;
        self.drives.push(Drive { envelope: Arc::new(envelope), op });
        Ok(self)
    }

    pub fn with_shared_drive(mut self, envelope: Arc<dyn Envelope>, op: Operator) -> Result<Self> {
        self.require_dims(&op)?;
        self.drives.push(Drive { envelope, op });
        Ok(self)
    }

    pub fn with_term(mut self, term: Arc<dyn HamiltonianTerm>) -> Self {
        self.terms.push(term);
        self
    }

    fn require_dims(&self, op: &Operator) -> Result<()> {
        if op.dims() != self.base.dims() {
            return Err(Error::DimensionMismatch { expected: self.base.dims().to_vec(), found: op.dims().to_vec() });
        }
        Ok(())
    }

    pub fn dims(&self) -> &[usize] {
        self.base.dims()
    }

    pub fn base(&self) -> &Operator {
        &self.base
    }

    pub fn is_time_independent(&self) -> bool {
        self.drives.is_empty() && self.terms.is_empty()
    }

    /// Dense `H(t)`.
    pub fn at(&self, t: f64) -> Operator {
        let mut m = self.base.matrix().clone();
        for d in &self.drives {
            let f = d.envelope.value(t);
            m += d.op.matrix() * f + d.op.matrix().adjoint() * f.conj();
        }
        for term in &self.terms {
            m += term.matrix(t);
        }
        Operator::new(m, self.base.dims().to_vec()).expect("dims unchanged")
    }
}

/// Collapse operator stored as its amplitude `L = sqrt(rate) * op`.
#[derive(Clone, Debug)]
pub struct CollapseOp {
    rate: f64,
    amplitude: Operator,
}

impl CollapseOp {
    pub fn with_rate(rate: f64, op: Operator) -> Result<Self> {
        if !(rate >= 0.0) || !rate.is_finite() {
            return Err(Error::InvalidArgument(format!("collapse rate must be finite and >= 0, got {rate}")));
        }
        Ok(Self { rate, amplitude: &op * rate.sqrt() })
    }

    /// Operator already carrying its rate.
    pub fn embedded(op: Operator) -> Self {
        Self { rate: 1.0, amplitude: op }
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn amplitude(&self) -> &Operator {
        &self.amplitude
    }
}

#[derive(Clone, Debug)]
pub struct EvolutionProblem {
    pub hamiltonian: Hamiltonian,
    pub collapse_ops: Vec<CollapseOp>,
    pub initial: DensityMatrix,
    pub t_span: (f64, f64),
    pub output_times: Vec<f64>,
}

impl EvolutionProblem {
    pub fn new(hamiltonian: Hamiltonian, initial: DensityMatrix, t_span: (f64, f64)) -> Self {
        Self { hamiltonian, collapse_ops: Vec::new(), initial, t_span, output_times: vec![t_span.1] }
    }

    pub fn from_pure(hamiltonian: Hamiltonian, initial: &PureState, t_span: (f64, f64)) -> Self {
        Self::new(hamiltonian, initial.to_density(), t_span)
    }

    pub fn with_collapse(mut self, op: CollapseOp) -> Self {
        self.collapse_ops.push(op);
        self
    }

    pub fn with_output_times(mut self, times: Vec<f64>) -> Self {
        self.output_times = times;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let dims = self.hamiltonian.dims();
        if self.initial.dims() != dims {
            return Err(Error::DimensionMismatch { expected: dims.to_vec(), found: self.initial.dims().to_vec() });
        }
        for c in &self.collapse_ops {
            if c.amplitude.dims() != dims {
                return Err(Error::DimensionMismatch {
                    expected: dims.to_vec(),
                    found: c.amplitude.dims().to_vec(),
                });
            }
        }
        let (t0, t1) = self.t_span;
        if !(t0.is_finite() && t1.is_finite() && t1 >= t0) {
            return Err(Error::InvalidArgument(format!("invalid time span ({t0}, {t1})")));
        }
        if self.output_times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidArgument("output times must be sorted".into()));
        }
        if self.output_times.iter().any(|&t| t < t0 || t > t1) {
            return Err(Error::InvalidArgument(format!("output times must lie in [{t0}, {t1}]")));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    pub initial_step: Option<f64>,
    /// Allowed `|Tr rho(t) - Tr rho(0)|` before an accuracy error.
    pub trace_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-8, abs_tol: 1e-10, max_steps: 5_000_000, initial_step: None, trace_tol: 1e-4 }
    }
}

impl SolverOptions {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self { rel_tol, abs_tol, ..Self::default() }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StepperStats {
    pub accepted: usize,
    pub rejected: usize,
    pub final_step: f64,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub stats: StepperStats,
}

impl Trajectory {
    pub fn final_state(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory has at least one output time")
    }
}

/// Precompiled right-hand side.
pub(crate) struct Rhs {
    n: usize,
    heff: Csr,
    drives: Vec<(Arc<dyn Envelope>, Csr, Csr)>,
    terms: Vec<Arc<dyn HamiltonianTerm>>,
    jumps: Vec<Csr>,
    scratch: CMatrix,
    scratch2: CMatrix,
}

impl Rhs {
    pub fn new(h: &Hamiltonian, collapse: &[CollapseOp]) -> Self {
        let n = h.base.dim();
        let mut heff = h.base.matrix().clone();
        for c in collapse {
            let l = c.amplitude.matrix();
            heff -= (l.adjoint() * l) * (I * 0.5);
        }
        let drives = h
            .drives
            .iter()
            .map(|d| (d.envelope.clone(), Csr::from_dense(d.op.matrix()), Csr::from_dense(&d.op.matrix().adjoint())))
            .collect();
        Self {
            n,
            heff: Csr::from_dense(&heff),
            drives,
            terms: h.terms.clone(),
            jumps: collapse.iter().map(|c| Csr::from_dense(c.amplitude.matrix())).collect(),
            scratch: CMatrix::zeros(n, n),
            scratch2: CMatrix::zeros(n, n),
        }
    }

    /// `out = -i (X - X+) + sum L rho L+` with `X = Heff(t) rho`.
    pub fn eval(&mut self, t: f64, rho: &CMatrix, out: &mut CMatrix) {
        let x = &mut self.scratch;
        self.heff.mul_into(rho, x);
        for (env, op, op_dag) in &self.drives {
            let f = env.value(t);
            if f != C64::new(0.0, 0.0) {
                op.mul_add(f, rho, x);
                op_dag.mul_add(f.conj(), rho, x);
            }
        }
        for term in &self.terms {
            term.add_apply(t, rho, x);
        }
        let n = self.n;
        for c in 0..n {
            for r in 0..n {
                out[(r, c)] = -I * (x[(r, c)] - x[(c, r)].conj());
            }
        }
        for l in &self.jumps {
            // L rho L+ = (L (L rho)+)+
            l.mul_into(rho, &mut self.scratch);
            let y_dag = self.scratch.adjoint();
            l.mul_into(&y_dag, &mut self.scratch2);
            for c in 0..n {
                for r in 0..n {
                    out[(r, c)] += self.scratch2[(c, r)].conj();
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_state, Operator};
    use crate::linalg::re;

    #[test]
    fn rhs_matches_dense_formula() {
        let n = 6;
        let a = Operator::annihilation(n).unwrap();
        let h = &(&(&a.adjoint() * &a) * 0.7) + &(&(&a.adjoint() * &a.adjoint()) * re(0.3));
        let h = &h + &(&(&a * &a) * re(0.3));
        let ham = Hamiltonian::new(h.clone())
            .with_drive(|t: f64| C64::new(t, 0.5), a.adjoint())
            .unwrap();
        let c = CollapseOp::with_rate(0.4, a.clone()).unwrap();
        let rho = coherent_state(C64::new(0.5, 0.2), n).unwrap().to_density();
        let mut rhs = Rhs::new(&ham, std::slice::from_ref(&c));
        let mut out = CMatrix::zeros(n, n);
        rhs.eval(0.3, rho.matrix(), &mut out);

        let ht = ham.at(0.3).into_matrix();
        let l = c.amplitude().matrix();
        let r = rho.matrix();
        let ldl = l.adjoint() * l;
        let expected = (&ht * r - r * &ht) * (-I) + l * r * l.adjoint() - (&ldl * r + r * &ldl) * re(0.5);
        assert!((out - expected).norm() < 1e-12);
    }

    #[test]
    fn problem_validation() {
        let ham = Hamiltonian::zero(&[4]);
        let rho = DensityMatrix::fock(0, 4).unwrap();
        let p = EvolutionProblem::new(ham.clone(), rho.clone(), (0.0, 1.0)).with_output_times(vec![0.5, 0.2]);
        assert!(p.validate().is_err());
        let p = EvolutionProblem::new(ham.clone(), rho.clone(), (0.0, 1.0)).with_output_times(vec![2.0]);
        assert!(p.validate().is_err());
        let wrong = DensityMatrix::fock(0, 5).unwrap();
        assert!(EvolutionProblem::new(ham, wrong, (0.0, 1.0)).validate().is_err());
        assert!(CollapseOp::with_rate(-1.0, Operator::identity(&[4])).is_err());
    }
}
