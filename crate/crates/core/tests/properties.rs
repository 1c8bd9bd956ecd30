// Copyright 2026 catkerr Contributors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use catkerr::fock::{cat_state, coherent_state, displacement, DensityMatrix, Operator, Parity, PureState};
use catkerr::lindblad::{
    evolve, steady_state, CollapseOp, EvolutionProblem, Hamiltonian, SolverOptions, SteadyStateMethod,
    SteadyStateOptions,
};
use catkerr::linalg::{hermiticity_defect, re, C64};
use catkerr::model::{
    build_h0, build_hz, coherent_pair_matrix, lossy_eigen_amplitude, project_to_logical, spectrum, LogicalBasis,
    ModelSpec,
};
use catkerr::observables::{fidelity, parity_expectation, wigner_point};
use catkerr::protocols::{
    condition_sweep, fidelity_maximizing_time, run_adiabatic_init, run_gate_x, run_gate_zz, run_transitionless_init, GateXParams,
    GateZParams, GateZzParams, InitParams, RunOptions, SweepGate, DEFAULT_CD_VARIANT,
};
use proptest::prelude::*;

fn a(n: usize) -> Operator {
    Operator::annihilation(n).unwrap()
}

fn random_mixture(alphas: &[(f64, f64)], weights: &[f64], n: usize) -> DensityMatrix {
    let states: Vec<DensityMatrix> =
        alphas.iter().map(|&(x, p)| coherent_state(C64::new(x, p), n).unwrap().to_density()).collect();
    let total: f64 = weights.iter().sum();
    let parts: Vec<(f64, &DensityMatrix)> = weights.iter().map(|w| w / total).zip(&states).collect();
    DensityMatrix::mixture(&parts).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn commutator_is_identity_below_cutoff(n in 2usize..30) {
        let a = a(n);
        let c = a.commutator(&a.adjoint());
        for i in 0..n - 1 {
            prop_assert!((c.matrix()[(i, i)] - re(1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn coherent_state_is_eigenvector(x in -2.5f64..2.5, p in -2.5f64..2.5) {
        let alpha = C64::new(x, p);
        let n = 40;
        let psi = coherent_state(alpha, n).unwrap();
        let residual = (a(n).apply(&psi).unwrap() - psi.amplitudes() * alpha).norm();
        // Only the truncated top level misses: |alpha c_{N-1}|.
        let edge = (alpha * psi.amplitudes()[n - 1]).norm();
        prop_assert!((residual - edge).abs() < 1e-12);
        if alpha.norm_sqr() <= n as f64 / 5.0 {
            prop_assert!(residual < 1e-6);
        }
    }

    #[test]
    fn cats_are_orthonormal(alpha in 0.5f64..3.0) {
        let plus = cat_state(re(alpha), Parity::Even, 40).unwrap();
        let minus = cat_state(re(alpha), Parity::Odd, 40).unwrap();
        prop_assert!((plus.amplitudes().norm() - 1.0).abs() < 1e-10);
        prop_assert!(plus.overlap(&minus).unwrap().norm() < 1e-10);
    }

    #[test]
    fn displacement_composition(x1 in -1.0f64..1.0, p1 in -1.0f64..1.0, x2 in -1.0f64..1.0, p2 in -1.0f64..1.0) {
        let n = 60;
        let (b1, b2) = (C64::new(x1, p1), C64::new(x2, p2));
        let vac = PureState::fock(0, n).unwrap();
        let shifted = PureState::new(displacement(b2, n).unwrap().apply(&vac).unwrap(), vec![n]).unwrap();
        let lhs = displacement(b1, n).unwrap().apply(&shifted).unwrap();
        let phase = C64::from_polar(1.0, (b1 * b2.conj()).im);
        let rhs = displacement(b1 + b2, n).unwrap().apply(&vac).unwrap() * phase;
        prop_assert!((lhs - rhs).norm() < 1e-6);
    }

    #[test]
    fn trajectories_stay_physical(ep in 0.0f64..3.0, kappa in 0.0f64..2.0, x in -1.5f64..1.5) {
        let n = 14;
        let spec = ModelSpec::new(1.0, ep, n).with_kappa(kappa);
        let psi = coherent_state(C64::new(x, 0.3), n).unwrap();
        let problem = EvolutionProblem::from_pure(Hamiltonian::new(build_h0(&spec).unwrap()), &psi, (0.0, 1.0))
            .with_collapse(CollapseOp::with_rate(kappa, a(n)).unwrap())
            .with_output_times(vec![0.25, 0.5, 1.0]);
        let traj = evolve(&problem, SolverOptions::default()).unwrap();
        for rho in &traj.states {
            prop_assert!(hermiticity_defect(rho.matrix()) < 1e-10);
            prop_assert!((rho.trace() - 1.0).abs() < 1e-8);
            prop_assert!(rho.min_eigenvalue() >= -1e-8);
        }
    }

    #[test]
    fn wigner_is_linear(w in 0.0f64..1.0, x in -3.0f64..3.0, p in -3.0f64..3.0) {
        let n = 20;
        let r1 = cat_state(re(1.3), Parity::Even, n).unwrap().to_density();
        let r2 = coherent_state(C64::new(-0.4, 0.9), n).unwrap().to_density();
        let mix = DensityMatrix::mixture(&[(w, &r1), (1.0 - w, &r2)]).unwrap();
        let beta = C64::new(x, p);
        let lhs = wigner_point(&mix, beta).unwrap();
        let rhs = w * wigner_point(&r1, beta).unwrap() + (1.0 - w) * wigner_point(&r2, beta).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn uhlmann_fidelity_is_symmetric(
        a1 in (-1.5f64..1.5, -1.5f64..1.5), a2 in (-1.5f64..1.5, -1.5f64..1.5),
        b1 in (-1.5f64..1.5, -1.5f64..1.5), w in 0.05f64..0.95,
    ) {
        let n = 20;
        let rho = random_mixture(&[a1, a2], &[w, 1.0 - w], n);
        let sigma = random_mixture(&[a1, b1], &[0.5, 0.5], n);
        let f1 = fidelity(&rho, &sigma).unwrap();
        let f2 = fidelity(&sigma, &rho).unwrap();
        prop_assert!((f1 - f2).abs() < 1e-8, "{} vs {}", f1, f2);
        // Mixing toward the target never lowers the fidelity.
        let closer = DensityMatrix::mixture(&[(0.5, &rho), (0.5, &sigma)]).unwrap();
        prop_assert!(fidelity(&closer, &sigma).unwrap() >= f1 - 1e-8);
    }

    #[test]
    fn number_operator_projects_to_sigma_x(alpha0 in 1.0f64..2.5) {
        let n = 40;
        let num = &a(n).adjoint() * &a(n);
        let s = (-2.0 * alpha0 * alpha0).exp();
        let raw = coherent_pair_matrix(&num, re(alpha0)).unwrap();
        prop_assert!((raw[(0, 1)].norm() - alpha0 * alpha0 * s).abs() <= 0.05 * alpha0 * alpha0 * s);
        // Orthonormalizing the pair doubles the tunnelling element.
        let m = project_to_logical(&num, re(alpha0)).unwrap();
        let lowdin = 2.0 * alpha0 * alpha0 * s / (1.0 - s * s);
        prop_assert!((m[(0, 1)].norm() - lowdin).abs() <= 1e-8 * lowdin.max(1.0));
    }
}

#[test]
fn lossless_cats_span_top_doublet() {
    let n = 40;
    let spec = ModelSpec::new(1.0, 9.0, n);
    let vals = spectrum(&build_h0(&spec).unwrap());
    let top = &vals[vals.len() - 2..];
    assert!((top[1] - top[0]).abs() < 1e-6, "{top:?}");
    assert_abs_diff_eq!(top[1], 81.0, epsilon = 1e-6);
}

#[test]
fn lossy_amplitude_tends_to_lossless() {
    let mut last = f64::INFINITY;
    for kappa in [1.0, 0.1, 0.01, 0.001] {
        let amp = lossy_eigen_amplitude(&ModelSpec::new(1.0, 4.0, 40).with_kappa(kappa)).unwrap();
        let gap = (amp.alpha0 - re(2.0)).norm();
        assert!(gap < last);
        last = gap;
    }
    assert!(last < 1e-4);
}

fn driven_problem(n: usize, ep: f64, kappa: f64, t_max: f64) -> EvolutionProblem {
    let spec = ModelSpec::new(1.0, ep, n).with_kappa(kappa);
    EvolutionProblem::new(Hamiltonian::new(build_h0(&spec).unwrap()), DensityMatrix::fock(0, n).unwrap(), (0.0, t_max))
        .with_collapse(CollapseOp::with_rate(kappa, a(n)).unwrap())
}

#[test]
fn steady_state_methods_agree() {
    for (n, ep, kappa) in [(16, 2.0, 1.0), (24, 4.0, 2.0)] {
        let problem = driven_problem(n, ep, kappa, 300.0);
        let long = steady_state(&problem, &SteadyStateOptions::default()).unwrap();
        let null =
            steady_state(&problem, &SteadyStateOptions { method: SteadyStateMethod::NullSpace, ..Default::default() })
                .unwrap();
        let amp = lossy_eigen_amplitude(&ModelSpec::new(1.0, ep, n).with_kappa(kappa)).unwrap();
        let plus = coherent_state(amp.alpha0, n).unwrap().to_density();
        let minus = coherent_state(-amp.alpha0, n).unwrap().to_density();
        let target = DensityMatrix::mixture(&[(0.5, &plus), (0.5, &minus)]).unwrap();
        let f_long = fidelity(&long, &target).unwrap();
        let f_null = fidelity(&null, &target).unwrap();
        assert!((f_long - f_null).abs() < 1e-6, "N={n}: {f_long} vs {f_null}");
        assert!((parity_expectation(&long) - parity_expectation(&null)).abs() < 1e-6);
    }
}

#[test]
fn steady_state_is_an_even_odd_mixture() {
    // alpha0 is close to 4, so the two coherent components overlap by exp(-32).
    let rho = steady_state(&driven_problem(60, 16.0, 2.0, 200.0), &SteadyStateOptions::default()).unwrap();
    assert_abs_diff_eq!(rho.purity(), 0.5, epsilon = 1e-3);
}

#[test]
fn refining_tolerance_leaves_fidelity_unchanged() {
    let p = InitParams::new(4.0, 5.0, 6.5, 25).with_kappa(1.0 / 250.0);
    let coarse = run_adiabatic_init(&p, &RunOptions::default()).unwrap().fidelity;
    let solver = SolverOptions { rel_tol: 0.5e-8, ..SolverOptions::default() };
    let fine = run_adiabatic_init(&p, &RunOptions { solver, samples: 1 }).unwrap().fidelity;
    assert!((coarse - fine).abs() < 1e-8, "{coarse} vs {fine}");
}

#[test]
fn odd_cat_transitionless_matches_even() {
    let p = InitParams::new(4.0, 1.0, 1.37, 25);
    let even = run_transitionless_init(&p, Some(DEFAULT_CD_VARIANT), &RunOptions::default()).unwrap();
    let odd =
        run_transitionless_init(&p.with_initial(Parity::Odd), Some(DEFAULT_CD_VARIANT), &RunOptions::default()).unwrap();
    assert!((even.root_fidelity - odd.root_fidelity).abs() < 0.01, "{} vs {}", even.root_fidelity, odd.root_fidelity);
}

#[test]
fn parity_is_conserved_without_loss() {
    for (initial, sign) in [(Parity::Even, 1.0), (Parity::Odd, -1.0)] {
        let p = InitParams::new(4.0, 5.0, 6.5, 25).with_initial(initial);
        let r = run_adiabatic_init(&p, &RunOptions::with_samples(66)).unwrap();
        for tp in &r.timeseries {
            assert!((tp.parity - sign).abs() < 1e-8, "t={} <P>={}", tp.t, tp.parity);
        }
    }
}

#[test]
fn z_rotation_time_is_linear_in_angle() {
    let n = 30;
    let spec = ModelSpec::new(1.0, 4.0, n).with_ez(0.8);
    let h = build_hz(&spec).unwrap();
    let basis = LogicalBasis::new(re(2.0), n).unwrap();
    let peak = |theta: f64| {
        let target = PureState::superpose(&[
            (re((theta / 2.0).cos()), &basis.plus()),
            (C64::new(0.0, -(theta / 2.0).sin()), &basis.minus()),
        ])
        .unwrap();
        let t0 = GateZParams::new(4.0, 0.8, theta, n).gate_time().unwrap();
        fidelity_maximizing_time(&h, &basis.plus(), &target, 0.5 * t0, 1.5 * t0).unwrap()
    };
    let (t_half, f_half) = peak(PI / 2.0);
    let (t_full, f_full) = peak(PI);
    assert!(f_half > 0.98 && f_full > 0.99, "{f_half} {f_full}");
    assert!((t_half / t_full - 0.5).abs() < 0.025, "{t_half} / {t_full}");
}

#[test]
fn x_rotation_time_tracks_coherent_overlap() {
    let time = |ep: f64| {
        let r = run_gate_x(&GateXParams::new(ep, 1.0 / 3.0, PI / 2.0, 20), &RunOptions::default()).unwrap();
        r.duration
    };
    let ratio = time(1.0) / time(1.44);
    // Splitting 4 delta_x |a0|^2 s / (1 - s^2) with s = exp(-2|a0|^2), for a0 = 1 and 1.2.
    let s = |a2: f64| (-2.0 * a2).exp();
    let predicted = (1.44 / 1.0) * (s(1.44) / s(1.0)) * (1.0 - s(1.0).powi(2)) / (1.0 - s(1.44).powi(2));
    assert!((ratio / predicted - 1.0).abs() < 0.1, "ratio {ratio}, predicted {predicted}");
}

#[test]
fn zz_double_time_disentangles() {
    let base = GateZzParams::new(4.0, 0.2, 18);
    let t = 2.0 * base.gate_time().unwrap();
    let r = run_gate_zz(&GateZzParams { duration: Some(t), ..base }, &RunOptions::default()).unwrap();
    let entropy = r.extras["entanglement_entropy_bits"];
    assert!(entropy < 0.05, "entropy {entropy}");
    let quarter = run_gate_zz(&base, &RunOptions::default()).unwrap();
    assert!(quarter.extras["entanglement_entropy_bits"] > 0.9);
}

#[test]
fn strong_drives_degrade_gates() {
    let z = condition_sweep(SweepGate::Z, &[0.8, 3.2], None, 0.0, 30, &RunOptions::default()).unwrap();
    assert!(z[1].fidelity < z[0].fidelity, "{z:?}");
    let x = condition_sweep(SweepGate::X, &[1.0 / 3.0, 2.0], None, 0.0, 20, &RunOptions::default()).unwrap();
    assert!(x[1].fidelity < x[0].fidelity, "{x:?}");
    let single = condition_sweep(SweepGate::Zz, &[0.2], None, 0.0, 12, &RunOptions::default()).unwrap();
    assert_eq!(single.len(), 1);
}
