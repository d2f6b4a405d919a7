//! Numerical toolkit for the interpolating Schrödinger equation.
//!
//! A single scalar `λ ∈ [0, 1]` blends standard quantum mechanics (`λ = 0`)
//! with a classical Hamilton-Jacobi ensemble (`λ = 1`). The crate covers:
//!
//! * [`params`]: physical constants, validated `λ`, and the periodic `λ(t)` drive.
//! * [`solver`]: finite-difference grids, the `(1 − λ)`-renormalized Hamiltonian,
//!   a symmetric tridiagonal eigensolver, Crank-Nicolson evolution of the
//!   nonlinear interpolating equation, quantum potential and Bohmian trajectories.
//! * [`box_model`]: closed-form particle-in-a-box spectrum under mass renormalization.
//! * [`double_well`]: harmonic approximation of the quartic double well,
//!   tunneling coefficient, two-level Hamiltonian and density matrix.
//! * [`thermo`]: interpolated harmonic-oscillator thermodynamics.
//! * [`ldl_hdl`]: oscillator ensembles driven by `λ(t) = |sin Ωt|`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod box_model;
pub mod double_well;
mod error;
pub mod ldl_hdl;
pub mod params;
pub mod solver;
pub mod thermo;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use params::{DriveSpec, InterpolationParam, PhysicalConstants};
pub use solver::{Grid, PotentialSpec, WaveFunction};
