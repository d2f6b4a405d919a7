use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, PhysicalConstants, Result};

pub const MIN_POINTS: usize = 16;

/// Uniform 1D grid with both endpoints included. The endpoints carry the
/// Dirichlet walls; the unknowns live on the `n_points − 2` interior nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
    dx: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridRepr {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl TryFrom<GridRepr> for Grid {
    type Error = Error;
    fn try_from(r: GridRepr) -> Result<Self> {
        Grid::new(r.x_min, r.x_max, r.n_points)
    }
}

impl From<Grid> for GridRepr {
    fn from(g: Grid) -> Self {
        GridRepr {
            x_min: g.x_min,
            x_max: g.x_max,
            n_points: g.n_points,
        }
    }
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::InvalidParameter(format!(
                "grid bounds [{x_min}, {x_max}] are not an increasing finite interval"
            )));
        }
        if n_points < MIN_POINTS {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least {MIN_POINTS} points, got {n_points}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
            dx: (x_max - x_min) / (n_points - 1) as f64,
        })
    }

    /// Grid symmetric about the origin.
    pub fn symmetric(half_width: f64, n_points: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n_points)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + self.dx * i as f64
        }
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.x(i))
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x_min && x <= self.x_max
    }

    /// Composite trapezoidal rule over the whole grid.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        debug_assert_eq!(f.len(), self.n_points);
        let n = f.len();
        let inner: f64 = f[1..n - 1].iter().sum();
        self.dx * (inner + 0.5 * (f[0] + f[n - 1]))
    }
}

/// Complex amplitudes sampled on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: Grid,
    amplitudes: Vec<Complex64>,
}

impl WaveFunction {
    pub fn new(grid: Grid, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.n_points() {
            return Err(Error::GridMismatch(format!(
                "{} amplitudes for a grid of {} points",
                amplitudes.len(),
                grid.n_points()
            )));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite amplitude".into()));
        }
        Ok(Self { grid, amplitudes })
    }

    pub fn from_real(grid: Grid, values: &[f64]) -> Result<Self> {
        Self::new(grid, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Self {
        let amplitudes = grid.points().map(f).collect();
        Self { grid, amplitudes }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// `ρ = |ψ|²`.
    pub fn density(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    /// `S = ħ·arg ψ`, wrapped to `(−πħ, πħ]`.
    pub fn phase(&self, consts: &PhysicalConstants) -> Vec<f64> {
        self.amplitudes.iter().map(|z| consts.hbar * z.arg()).collect()
    }

    /// Trapezoidal L2 norm.
    pub fn norm(&self) -> f64 {
        self.grid.integrate(&self.density()).sqrt()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm();
        if !(n > 0.0) {
            return Err(Error::InvalidParameter("cannot normalize a zero state".into()));
        }
        for z in &mut self.amplitudes {
            *z /= n;
        }
        Ok(self)
    }

    /// Trapezoidal `⟨self|other⟩`.
    pub fn inner(&self, other: &WaveFunction) -> Complex64 {
        let n = self.amplitudes.len();
        let term = |i: usize| self.amplitudes[i].conj() * other.amplitudes[i];
        let inner: Complex64 = (1..n - 1).map(term).sum();
        (inner + 0.5 * (term(0) + term(n - 1))) * self.grid.dx()
    }

    pub fn mean_position(&self) -> f64 {
        let rho = self.density();
        let xr: Vec<f64> = self.grid.points().zip(&rho).map(|(x, r)| x * r).collect();
        self.grid.integrate(&xr) / self.grid.integrate(&rho)
    }

    /// Standard deviation of `x` under `ρ`.
    pub fn width(&self) -> f64 {
        let rho = self.density();
        let norm = self.grid.integrate(&rho);
        let mean = self.mean_position();
        let var: Vec<f64> = self
            .grid
            .points()
            .zip(&rho)
            .map(|(x, r)| (x - mean) * (x - mean) * r)
            .collect();
        (self.grid.integrate(&var) / norm).sqrt()
    }

    /// Probability on `x < 0` minus probability on `x > 0`, normalized by the
    /// total; the node at `x = 0`, if any, is split evenly.
    pub fn left_right_imbalance(&self) -> f64 {
        let rho = self.density();
        let signed: Vec<f64> = self
            .grid
            .points()
            .zip(&rho)
            .map(|(x, r)| if x < 0.0 { *r } else if x > 0.0 { -*r } else { 0.0 })
            .collect();
        self.grid.integrate(&signed) / self.grid.integrate(&rho)
    }
}
