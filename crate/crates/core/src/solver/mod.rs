//! Finite-difference machinery on a uniform 1D grid.

pub mod bohm;
pub mod evolve;
mod grid;
mod hamiltonian;
mod potential;
pub mod tridiag;

pub use bohm::{bohm_velocity, integrate_trajectories, quantum_potential, TrajectorySet};
pub use evolve::{evolve, evolve_with, gaussian_packet, EvolveOptions, Evolution};
pub use grid::{Grid, WaveFunction, MIN_POINTS};
pub use hamiltonian::{build_hamiltonian, solve_eigenstates, DiscreteHamiltonian, Eigenstate};
pub(crate) use hamiltonian::assemble;
pub use potential::PotentialSpec;
pub(crate) use potential::check_box_grid;
