// Copyright 2026 catkerr Contributors
// SPDX-License-Identifier: Apache-2.0

//! Simulation toolkit for two-photon driven Kerr-nonlinear resonators:
//! Fock-space primitives, model Hamiltonians, a Lindblad integrator, cat-qubit
//! protocols and phase-space observables.

pub mod cli;
pub mod config;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod lindblad;
pub mod model;
pub mod observables;
pub mod output;
pub mod parallel;
pub mod protocols;
pub mod reproduce;

pub use error::{Error, Result};
pub use fock::{
    annihilation, cat_state, coherent_state, displacement, parity_operator, tensor, DensityMatrix, Operator, Parity,
    PureState,
};
pub use linalg::C64;
pub use model::ModelSpec;
