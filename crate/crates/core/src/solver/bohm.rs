//! Quantum potential, guidance velocity and trajectory integration.

use crate::solver::evolve::Evolution;
use crate::{Error, Grid, PhysicalConstants, Result, WaveFunction};

/// `ε = DENSITY_FLOOR · max ρ` is added to `ρ` before dividing by `ρ` or `√ρ`.
pub const DENSITY_FLOOR: f64 = 1e-12;

fn floor_of(rho: &[f64]) -> f64 {
    DENSITY_FLOOR * rho.iter().fold(0.0f64, |m, &r| m.max(r))
}

/// `Q = −(ħ²/2m) (∂²√ρ)/√ρ` on the nodes of `grid`; zero on the end nodes.
pub fn quantum_potential_from_density(grid: &Grid, rho: &[f64], consts: &PhysicalConstants) -> Vec<f64> {
    let n = rho.len();
    let amp: Vec<f64> = rho.iter().map(|r| r.max(0.0).sqrt()).collect();
    let eps = floor_of(rho);
    let pref = -consts.kinetic_scale() / (grid.dx() * grid.dx());
    let mut q = vec![0.0; n];
    for i in 1..n - 1 {
        let lap = amp[i + 1] - 2.0 * amp[i] + amp[i - 1];
        let denom = (rho[i].max(0.0) + eps).sqrt();
        if denom > 0.0 {
            q[i] = pref * lap / denom;
        }
    }
    q
}

/// Quantum potential of a state, regularized as `∂²√ρ / √(ρ + ε)`.
pub fn quantum_potential(psi: &WaveFunction, consts: &PhysicalConstants) -> Vec<f64> {
    quantum_potential_from_density(psi.grid(), &psi.density(), consts)
}

/// Guidance velocity `v = (ħ/m) Im(ψ* ∂ₓψ)/|ψ|²`; zero on the end nodes.
pub fn bohm_velocity(psi: &WaveFunction, consts: &PhysicalConstants) -> Vec<f64> {
    let amps = psi.amplitudes();
    let n = amps.len();
    let rho = psi.density();
    let rho_floor = floor_of(&rho);
    let pref = consts.hbar / (consts.mass * 2.0 * psi.grid().dx());
    let mut v = vec![0.0; n];
    for i in 1..n - 1 {
        let denom = rho[i] + rho_floor;
        if denom > 0.0 {
            v[i] = pref * (amps[i].conj() * (amps[i + 1] - amps[i - 1])).im / denom;
        }
    }
    v
}

/// Paths `x(t)` for a set of seed positions.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySet {
    pub times: Vec<f64>,
    pub seeds: Vec<f64>,
    /// `positions[k][j]` is seed `k` at `times[j]`.
    pub positions: Vec<Vec<f64>>,
}

impl TrajectorySet {
    /// Earliest time at which paths `a` and `b` meet, if ever.
    pub fn crossing_time(&self, a: usize, b: usize, tol: f64) -> Option<f64> {
        crossing_time(&self.times, &self.positions[a], &self.positions[b], tol)
    }
}

/// Earliest time at which two sampled paths meet: their separation changes
/// sign between samples (the time is interpolated) or drops to `tol`.
pub fn crossing_time(times: &[f64], a: &[f64], b: &[f64], tol: f64) -> Option<f64> {
    let sep: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    for j in 0..sep.len() {
        if sep[j].abs() <= tol {
            return Some(times[j]);
        }
        if j + 1 < sep.len() && sep[j].signum() != sep[j + 1].signum() {
            let f = sep[j] / (sep[j] - sep[j + 1]);
            return Some(times[j] + f * (times[j + 1] - times[j]));
        }
    }
    None
}

fn interp(grid: &Grid, field: &[f64], x: f64) -> f64 {
    let s = (x - grid.x_min()) / grid.dx();
    let i = (s.floor() as usize).min(grid.n_points() - 2);
    let f = s - i as f64;
    field[i] * (1.0 - f) + field[i + 1] * f
}

/// Explicit midpoint integration of `dx/dt = v(x, t)` through recorded
/// frames, with `v` linear in `x` between nodes and in `t` between frames.
pub fn integrate_trajectories(
    evolution: &Evolution,
    seeds: &[f64],
    consts: &PhysicalConstants,
) -> Result<TrajectorySet> {
    let frames = &evolution.states;
    let grid = *frames
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty evolution".into()))?
        .grid();
    if let Some(&bad) = seeds.iter().find(|s| !grid.contains(**s)) {
        return Err(Error::TrajectoryEscaped {
            seed: bad,
            time: evolution.times[0],
        });
    }
    let velocities: Vec<Vec<f64>> = frames.iter().map(|psi| bohm_velocity(psi, consts)).collect();
    let mut positions: Vec<Vec<f64>> = seeds.iter().map(|&s| vec![s]).collect();
    for j in 0..frames.len() - 1 {
        let dt = evolution.times[j + 1] - evolution.times[j];
        let (v0, v1) = (&velocities[j], &velocities[j + 1]);
        for (k, path) in positions.iter_mut().enumerate() {
            let x = path[j];
            let x_half = x + 0.5 * dt * interp(&grid, v0, x);
            let escaped = || Error::TrajectoryEscaped {
                seed: seeds[k],
                time: evolution.times[j + 1],
            };
            if !grid.contains(x_half) {
                return Err(escaped());
            }
            let v_half = 0.5 * (interp(&grid, v0, x_half) + interp(&grid, v1, x_half));
            let x_new = x + dt * v_half;
            if !grid.contains(x_new) {
                return Err(escaped());
            }
            path.push(x_new);
        }
    }
    Ok(TrajectorySet {
        times: evolution.times.clone(),
        seeds: seeds.to_vec(),
        positions,
    })
}
