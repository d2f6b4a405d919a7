use crate::solver::tridiag;
use crate::{Error, Grid, InterpolationParam, PhysicalConstants, PotentialSpec, Result, WaveFunction};

/// `(1 − λ)Ĥ₀ + V` on the interior nodes of a grid, second-order central
/// differences, `ψ = 0` on both end nodes.
///
/// `diagonal` has `n_points − 2` entries and `off_diagonal` one fewer.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteHamiltonian {
    grid: Grid,
    diagonal: Vec<f64>,
    off_diagonal: Vec<f64>,
    lambda: InterpolationParam,
}

impl DiscreteHamiltonian {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.off_diagonal
    }

    pub fn lambda(&self) -> InterpolationParam {
        self.lambda
    }

    /// Number of unknowns (interior nodes).
    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// `H x` for a vector over the interior nodes.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut y = self.diagonal[i] * x[i];
                if i > 0 {
                    y += self.off_diagonal[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.off_diagonal[i] * x[i + 1];
                }
                y
            })
            .collect()
    }
}

pub fn build_hamiltonian(
    grid: &Grid,
    potential: &PotentialSpec,
    lambda: InterpolationParam,
    consts: &PhysicalConstants,
) -> Result<DiscreteHamiltonian> {
    let v = potential.sample(grid)?;
    Ok(assemble(grid, &v, lambda, consts))
}

pub(crate) fn assemble(
    grid: &Grid,
    v: &[f64],
    lambda: InterpolationParam,
    consts: &PhysicalConstants,
) -> DiscreteHamiltonian {
    let n = grid.n_points();
    let hop = lambda.quantum_weight() * consts.kinetic_scale() / (grid.dx() * grid.dx());
    DiscreteHamiltonian {
        grid: *grid,
        diagonal: v[1..n - 1].iter().map(|vi| 2.0 * hop + vi).collect(),
        off_diagonal: vec![-hop; n - 3],
        lambda,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenstate {
    pub energy: f64,
    pub state: WaveFunction,
}

/// The `k` lowest eigenpairs, ascending in energy. States are real,
/// trapezoidal-normalized and include the zero wall nodes.
pub fn solve_eigenstates(h: &DiscreteHamiltonian, k: usize) -> Result<Vec<Eigenstate>> {
    if k > h.dim() {
        return Err(Error::InvalidParameter(format!(
            "asked for {k} states but the grid has {} interior nodes",
            h.dim()
        )));
    }
    let pairs = tridiag::lowest_eigenpairs(&h.diagonal, &h.off_diagonal, k)?;
    let scale = 1.0 / h.grid.dx().sqrt();
    pairs
        .into_iter()
        .map(|(energy, v)| {
            let mut full = Vec::with_capacity(h.grid.n_points());
            full.push(0.0);
            full.extend(v.iter().map(|x| x * scale));
            full.push(0.0);
            Ok(Eigenstate {
                energy,
                state: WaveFunction::from_real(h.grid, &full)?,
            })
        })
        .collect()
}
