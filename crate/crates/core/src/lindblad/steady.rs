// Copyright 2026 catkerr Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, Operator};
use crate::linalg::{self, CMatrix, C64, I, ONE, ZERO};

use super::{CollapseOp, EvolutionProblem, Integrator, SolverOptions};

/// Largest Hilbert-space dimension accepted by the dense superoperator.
pub const LIOUVILLIAN_MAX_DIM: usize = 80;

/// Dense Liouvillian in column-stacking convention:
///
/// ```text
/// L = -i (I (x) H - H^T (x) I) + sum_k [ L_k* (x) L_k - 1/2 I (x) L_k+L_k - 1/2 (L_k+L_k)^T (x) I ]
/// ```
pub fn liouvillian(h: &Operator, collapse: &[CollapseOp]) -> Result<CMatrix> {
    let n = h.dim();
    if n > LIOUVILLIAN_MAX_DIM {
        return Err(Error::InvalidArgument(format!(
            "dense Liouvillian limited to dim <= {LIOUVILLIAN_MAX_DIM}, got {n}"
        )));
    }
    for c in collapse {
        if c.amplitude().dims() != h.dims() {
            return Err(Error::DimensionMismatch { expected: h.dims().to_vec(), found: c.amplitude().dims().to_vec() });
        }
    }
    let id = CMatrix::identity(n, n);
    let hm = h.matrix();
    let mut l = (linalg::kron(&id, hm) - linalg::kron(&hm.transpose(), &id)) * (-I);
    for c in collapse {
        let a = c.amplitude().matrix();
        let ada = a.adjoint() * a;
        l += linalg::kron(&a.conjugate(), a);
        l -= (linalg::kron(&id, &ada) + linalg::kron(&ada.transpose(), &id)) * C64::new(0.5, 0.0);
    }
    Ok(l)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SteadyStateMethod {
    LongTime,
    NullSpace,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteadyStateOptions {
    pub method: SteadyStateMethod,
    /// Stop when consecutive window means of `rho` over `w = 1 / decay_rate`
    /// differ by less than `convergence_eps * decay_rate * w` in Frobenius norm.
    pub convergence_eps: f64,
    /// Rate normalizing the convergence test; defaults to the largest collapse rate.
    pub decay_rate: Option<f64>,
    pub solver: SolverOptions,
}

impl Default for SteadyStateOptions {
    fn default() -> Self {
        Self {
            method: SteadyStateMethod::LongTime,
            convergence_eps: 1e-8,
            decay_rate: None,
            solver: SolverOptions::default(),
        }
    }
}

/// Stationary state of a time-independent problem.
///
/// `problem.initial` seeds the long-time integration and `problem.t_span.1`
/// bounds it.
pub fn steady_state(problem: &EvolutionProblem, opts: &SteadyStateOptions) -> Result<DensityMatrix> {
    problem.validate()?;
    if !problem.hamiltonian.is_time_independent() {
        return Err(Error::InvalidArgument("steady state requires a time-independent Hamiltonian".into()));
    }
    match opts.method {
        SteadyStateMethod::LongTime => long_time(problem, opts),
        SteadyStateMethod::NullSpace => null_space(problem),
    }
}

fn long_time(problem: &EvolutionProblem, opts: &SteadyStateOptions) -> Result<DensityMatrix> {
    let rate = opts
        .decay_rate
        .unwrap_or_else(|| problem.collapse_ops.iter().map(|c| c.rate()).fold(0.0, f64::max));
    if !(rate > 0.0) {
        return Err(Error::InvalidArgument("long-time steady state needs a positive decay rate".into()));
    }
    let threshold = opts.convergence_eps * rate;
    let window = 1.0 / rate;
    let mut integ = Integrator::new(problem, opts.solver)?;
    let t_max = problem.t_span.1;
    let n = problem.initial.dim();
    let mut prev: Option<CMatrix> = None;
    let mut t_check = problem.t_span.0 + window;
    let mut residual = f64::INFINITY;
    let y = loop {
        if t_check > t_max {
            return Err(Error::Convergence { t_max, residual });
        }
        // Trapezoidal mean over the window; filters stiff oscillations of the
        // explicit stepper that sit at the step-size stability limit.
        let mut sum = CMatrix::zeros(n, n);
        let (mut t_prev, mut y_prev) = (integ.t, integ.y.clone());
        while integ.t < t_check {
            integ.step(t_check)?;
            sum += (&y_prev + &integ.y) * C64::new(0.5 * (integ.t - t_prev), 0.0);
            t_prev = integ.t;
            y_prev.copy_from(&integ.y);
        }
        let mean = sum / C64::new(window, 0.0);
        if let Some(p) = &prev {
            residual = (&mean - p).norm() / window;
            if residual < threshold {
                break mean;
            }
        }
        prev = Some(mean);
        t_check += window;
    };
    let mut m = y;
    normalize(&mut m);
    Ok(DensityMatrix::from_matrix_unchecked(m, problem.initial.dims().to_vec()))
}

fn null_space(problem: &EvolutionProblem) -> Result<DensityMatrix> {
    let l = liouvillian(problem.hamiltonian.base(), &problem.collapse_ops)?;
    let n = problem.initial.dim();
    let mut a = l;
    // Replace the first equation by the trace condition.
    for c in 0..n * n {
        a[(0, c)] = ZERO;
    }
    for k in 0..n {
        a[(0, k * (n + 1))] = ONE;
    }
    let mut b = linalg::CVector::zeros(n * n);
    b[0] = ONE;
    let x = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::Convergence { t_max: f64::INFINITY, residual: f64::NAN })?;
    let mut m = CMatrix::from_column_slice(n, n, x.as_slice());
    m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    normalize(&mut m);
    Ok(DensityMatrix::from_matrix_unchecked(m, problem.initial.dims().to_vec()))
}

fn normalize(m: &mut CMatrix) {
    let tr = linalg::trace(m).re;
    if tr != 0.0 {
        *m /= C64::new(tr, 0.0);
    }
}
