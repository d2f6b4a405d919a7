//! Particle in a box with `(1 − λ)`-renormalized kinetic energy.
//!
//! The stationary amplitudes do not depend on `λ`; only the spectrum does,
//! through the effective mass `m/(1 − λ)`:
//! `E_n(λ) = (1 − λ) n²π²ħ² / 2mL²`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::solver::check_box_grid;
use crate::{Error, Grid, InterpolationParam, PhysicalConstants, Result, WaveFunction};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxSpec {
    pub length: f64,
    pub n_max: u32,
}

impl BoxSpec {
    pub fn new(length: f64, n_max: u32) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidParameter(format!("box length must be positive, got {length}")));
        }
        if n_max < 1 {
            return Err(Error::BadQuantumNumber(0));
        }
        Ok(Self { length, n_max })
    }

    fn check_level(&self, n: i64) -> Result<()> {
        if n < 1 || n > i64::from(self.n_max) {
            return Err(Error::BadQuantumNumber(n));
        }
        Ok(())
    }

    /// `k_n = nπ/L`.
    pub fn wavenumber(&self, n: u32) -> f64 {
        f64::from(n) * PI / self.length
    }
}

pub fn box_energy(n: i64, spec: &BoxSpec, lambda: InterpolationParam, consts: &PhysicalConstants) -> Result<f64> {
    spec.check_level(n)?;
    let k = n as f64 * PI / spec.length;
    Ok(lambda.quantum_weight() * consts.kinetic_scale() * k * k)
}

/// `√(2/L) sin(k_n (x + L/2))` sampled on a grid spanning the box, then
/// renormalized with the trapezoidal rule.
pub fn box_wavefunction(n: i64, spec: &BoxSpec, grid: &Grid) -> Result<WaveFunction> {
    spec.check_level(n)?;
    check_box_grid(spec.length, grid)?;
    let k = n as f64 * PI / spec.length;
    let amp = (2.0 / spec.length).sqrt();
    let mut values: Vec<f64> = grid
        .points()
        .map(|x| amp * (k * (x + 0.5 * spec.length)).sin())
        .collect();
    let last = values.len() - 1;
    values[0] = 0.0;
    values[last] = 0.0;
    WaveFunction::from_real(*grid, &values)?.normalized()
}
