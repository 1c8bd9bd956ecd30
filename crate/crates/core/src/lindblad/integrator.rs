// Copyright 2026 catkerr Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dormand-Prince 5(4) with FSAL, PI step-size control and the
//! fourth-order continuous extension of Hairer and Wanner.

use crate::error::{Error, Result};
use crate::fock::DensityMatrix;
use crate::linalg::{self, CMatrix, C64};

use super::{EvolutionProblem, Rhs, SolverOptions, StepperStats, Trajectory};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const PI_ALPHA: f64 = 0.7 / 5.0;
const PI_BETA: f64 = 0.4 / 5.0;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;

/// `sum_j c_j m_j`.
fn lincomb(terms: &[(f64, &CMatrix)], out: &mut CMatrix) {
    let dst = out.as_mut_slice();
    dst.fill(C64::new(0.0, 0.0));
    for (c, m) in terms {
        if *c == 0.0 {
            continue;
        }
        for (d, s) in dst.iter_mut().zip(m.as_slice()) {
            *d += s * *c;
        }
    }
}

/// `base + h * sum_j c_j k_j`.
fn stage(base: &CMatrix, h: f64, terms: &[(f64, &CMatrix)], out: &mut CMatrix) {
    lincomb(terms, out);
    for (d, b) in out.as_mut_slice().iter_mut().zip(base.as_slice()) {
        *d = b + *d * h;
    }
}

fn scaled_norm(opts: &SolverOptions, m: &CMatrix, y_a: &CMatrix, y_b: &CMatrix) -> f64 {
    let mut acc = 0.0;
    for ((e, a), b) in m.as_slice().iter().zip(y_a.as_slice()).zip(y_b.as_slice()) {
        let sc = opts.abs_tol + opts.rel_tol * a.norm().max(b.norm());
        let r = e.norm() / sc;
        acc += r * r;
    }
    (acc / m.len() as f64).sqrt()
}

fn hermitize(m: &mut CMatrix) {
    let n = m.nrows();
    for c in 0..n {
        m[(c, c)].im = 0.0;
        for r in c + 1..n {
            let avg = (m[(r, c)] + m[(c, r)].conj()) * 0.5;
            m[(r, c)] = avg;
            m[(c, r)] = avg.conj();
        }
    }
}

/// Dense-output coefficients for the last accepted step.
struct Continuous {
    t_old: f64,
    h: f64,
    r1: CMatrix,
    r2: CMatrix,
    r3: CMatrix,
    r4: CMatrix,
    r5: CMatrix,
}

impl Continuous {
    fn eval(&self, t: f64) -> CMatrix {
        let theta = (t - self.t_old) / self.h;
        let theta1 = 1.0 - theta;
        let mut out = self.r5.clone() * C64::new(theta1, 0.0);
        out += &self.r4;
        out *= C64::new(theta, 0.0);
        out += &self.r3;
        out *= C64::new(theta1, 0.0);
        out += &self.r2;
        out *= C64::new(theta, 0.0);
        out += &self.r1;
        out
    }
}

/// Stepper state; exposed inside the crate for steady-state detection.
pub(crate) struct Integrator {
    rhs: Rhs,
    opts: SolverOptions,
    pub t: f64,
    pub y: CMatrix,
    /// `d rho/dt` at `(t, y)`.
    pub dy: CMatrix,
    h: f64,
    err_old: f64,
    trace0: f64,
    pub stats: StepperStats,
    k: [CMatrix; 6],
    tmp: CMatrix,
    dense: Option<Continuous>,
}

impl Integrator {
    pub fn new(problem: &EvolutionProblem, opts: SolverOptions) -> Result<Self> {
        problem.validate()?;
        if !(opts.rel_tol > 0.0 && opts.abs_tol > 0.0) {
            return Err(Error::InvalidArgument("solver tolerances must be positive".into()));
        }
        let mut rhs = Rhs::new(&problem.hamiltonian, &problem.collapse_ops);
        let n = problem.initial.dim();
        let y = problem.initial.matrix().clone();
        let mut dy = CMatrix::zeros(n, n);
        let t = problem.t_span.0;
        rhs.eval(t, &y, &mut dy);
        let trace0 = linalg::trace(&y).re;
        let zeros = || CMatrix::zeros(n, n);
        let mut integ = Self {
            rhs,
            opts,
            t,
            y,
            dy,
            h: 0.0,
            err_old: 1e-4,
            trace0,
            stats: StepperStats::default(),
            k: [zeros(), zeros(), zeros(), zeros(), zeros(), zeros()],
            tmp: zeros(),
            dense: None,
        };
        integ.h = match opts.initial_step {
            Some(h) if h > 0.0 => h,
            _ => integ.initial_step(),
        };
        Ok(integ)
    }

    fn scaled_norm(&self, m: &CMatrix, y_a: &CMatrix, y_b: &CMatrix) -> f64 {
        scaled_norm(&self.opts, m, y_a, y_b)
    }

    /// Hairer's starting-step heuristic.
    fn initial_step(&mut self) -> f64 {
        let d0 = self.scaled_norm(&self.y, &self.y, &self.y);
        let d1 = self.scaled_norm(&self.dy, &self.y, &self.y);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let mut y1 = CMatrix::zeros(self.y.nrows(), self.y.ncols());
        stage(&self.y, h0, &[(1.0, &self.dy)], &mut y1);
        let mut f1 = CMatrix::zeros(self.y.nrows(), self.y.ncols());
        self.rhs.eval(self.t + h0, &y1, &mut f1);
        let diff = &f1 - &self.dy;
        let d2 = self.scaled_norm(&diff, &self.y, &self.y) / h0;
        let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
        (100.0 * h0).min(h1)
    }

    /// Takes one accepted step, not passing `t_end`.
    pub fn step(&mut self, t_end: f64) -> Result<()> {
        loop {
            if self.stats.accepted + self.stats.rejected >= self.opts.max_steps {
                return Err(Error::Stiffness { t: self.t, step: self.h });
            }
            let remaining = t_end - self.t;
            let mut h = self.h.min(remaining);
            let last = h >= remaining;
            if last {
                h = remaining;
            }
            let h_min = 1e-13 * self.t.abs().max(1.0);
            if h < h_min && !last {
                return Err(Error::Stiffness { t: self.t, step: h });
            }
            let t = self.t;
            let [k2, k3, k4, k5, k6, k7] = &mut self.k;
            let k1 = &self.dy;
            let y = &self.y;
            let tmp = &mut self.tmp;

            stage(y, h, &[(A21, k1)], tmp);
            self.rhs.eval(t + C2 * h, tmp, k2);
            stage(y, h, &[(A31, k1), (A32, k2)], tmp);
            self.rhs.eval(t + C3 * h, tmp, k3);
            stage(y, h, &[(A41, k1), (A42, k2), (A43, k3)], tmp);
            self.rhs.eval(t + C4 * h, tmp, k4);
            stage(y, h, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)], tmp);
            self.rhs.eval(t + C5 * h, tmp, k5);
            stage(y, h, &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)], tmp);
            self.rhs.eval(t + h, tmp, k6);
            let mut y_new = CMatrix::zeros(y.nrows(), y.ncols());
            stage(y, h, &[(A71, k1), (A73, k3), (A74, k4), (A75, k5), (A76, k6)], &mut y_new);
            hermitize(&mut y_new);
            self.rhs.eval(t + h, &y_new, k7);

            lincomb(&[(E1, k1), (E3, k3), (E4, k4), (E5, k5), (E6, k6), (E7, k7)], tmp);
            *tmp *= C64::new(h, 0.0);
            let err = scaled_norm(&self.opts, tmp, y, &y_new);

            if err <= 1.0 {
                let fac = if err == 0.0 {
                    FAC_MAX
                } else {
                    (SAFETY * err.powf(-PI_ALPHA) * self.err_old.powf(PI_BETA)).clamp(FAC_MIN, FAC_MAX)
                };
                // Continuous extension before overwriting the state.
                let mut r5 = CMatrix::zeros(y.nrows(), y.ncols());
                lincomb(&[(D1, k1), (D3, k3), (D4, k4), (D5, k5), (D6, k6), (D7, k7)], &mut r5);
                r5 *= C64::new(h, 0.0);
                let ydiff = &y_new - y;
                let bspl = k1 * C64::new(h, 0.0) - &ydiff;
                let r4 = &ydiff - &*k7 * C64::new(h, 0.0) - &bspl;
                self.dense = Some(Continuous { t_old: t, h, r1: y.clone(), r2: ydiff, r3: bspl, r4, r5 });

                self.t = if last { t_end } else { t + h };
                self.y = y_new;
                std::mem::swap(&mut self.dy, k7);
                self.err_old = err.max(1e-4);
                self.stats.accepted += 1;
                self.stats.final_step = h;
                if !last {
                    self.h = h * fac;
                } else {
                    self.h = self.h.max(h);
                }
                let drift = (linalg::trace(&self.y).re - self.trace0).abs();
                if drift > self.opts.trace_tol {
                    return Err(Error::Accuracy { t: self.t, drift });
                }
                return Ok(());
            }
            self.stats.rejected += 1;
            let fac = if err.is_finite() { (SAFETY * err.powf(-PI_ALPHA)).clamp(FAC_MIN, 1.0) } else { FAC_MIN };
            self.h = h * fac;
        }
    }

    /// State at `t` inside the last accepted step.
    pub fn interpolate(&self, t: f64) -> CMatrix {
        match &self.dense {
            Some(d) if t < self.t => {
                let mut m = d.eval(t);
                hermitize(&mut m);
                m
            }
            _ => self.y.clone(),
        }
    }
}

/// Integrates the problem and returns states at `problem.output_times`.
pub fn evolve(problem: &EvolutionProblem, opts: SolverOptions) -> Result<Trajectory> {
    let mut integ = Integrator::new(problem, opts)?;
    let dims = problem.initial.dims().to_vec();
    let t_end = problem.t_span.1;
    let mut times = Vec::with_capacity(problem.output_times.len());
    let mut states = Vec::with_capacity(problem.output_times.len());
    for &t_out in &problem.output_times {
        while integ.t < t_out {
            integ.step(t_end)?;
        }
        times.push(t_out);
        states.push(DensityMatrix::from_matrix_unchecked(integ.interpolate(t_out), dims.clone()));
    }
    Ok(Trajectory { times, states, stats: integ.stats })
}
