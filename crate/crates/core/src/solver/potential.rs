use serde::{Deserialize, Serialize};

use crate::double_well::DoubleWellSpec;
use crate::{Error, Grid, PhysicalConstants, Result};

/// External potential `V(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    /// Infinite square well on `[−L/2, L/2]`; the grid must span exactly this
    /// interval so that its end nodes are the walls.
    Box { length: f64 },
    /// `V = ½ K x²`. `K = 0` is the free particle.
    Harmonic { stiffness: f64 },
    /// `V = V₀ (x² − a²)²`.
    DoubleWell { v0: f64, a: f64 },
    /// One value per grid node.
    Tabulated { samples: Vec<f64> },
}

impl PotentialSpec {
    pub fn harmonic_from_omega(omega: f64, consts: &PhysicalConstants) -> Self {
        Self::Harmonic {
            stiffness: consts.mass * omega * omega,
        }
    }

    pub fn free() -> Self {
        Self::Harmonic { stiffness: 0.0 }
    }

    pub fn double_well(spec: DoubleWellSpec) -> Self {
        Self::DoubleWell {
            v0: spec.v0(),
            a: spec.a(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Box { length } if !(*length > 0.0 && length.is_finite()) => Err(
                Error::InvalidParameter(format!("box length must be positive, got {length}")),
            ),
            Self::Harmonic { stiffness } if !(*stiffness >= 0.0 && stiffness.is_finite()) => {
                Err(Error::InvalidParameter(format!(
                    "spring constant must be non-negative, got {stiffness}"
                )))
            }
            Self::DoubleWell { v0, a } => DoubleWellSpec::new(*v0, *a).map(|_| ()),
            Self::Tabulated { samples } if samples.iter().any(|v| !v.is_finite()) => Err(
                Error::InvalidParameter("tabulated potential has non-finite samples".into()),
            ),
            _ => Ok(()),
        }
    }

    /// `V` at every grid node.
    pub fn sample(&self, grid: &Grid) -> Result<Vec<f64>> {
        self.validate()?;
        match self {
            Self::Box { length } => {
                check_box_grid(*length, grid)?;
                Ok(vec![0.0; grid.n_points()])
            }
            Self::Harmonic { stiffness } => {
                Ok(grid.points().map(|x| 0.5 * stiffness * x * x).collect())
            }
            Self::DoubleWell { v0, a } => Ok(grid
                .points()
                .map(|x| {
                    let s = x * x - a * a;
                    v0 * s * s
                })
                .collect()),
            Self::Tabulated { samples } => {
                if samples.len() != grid.n_points() {
                    return Err(Error::GridMismatch(format!(
                        "{} tabulated samples for a grid of {} points",
                        samples.len(),
                        grid.n_points()
                    )));
                }
                Ok(samples.clone())
            }
        }
    }
}

pub(crate) fn check_box_grid(length: f64, grid: &Grid) -> Result<()> {
    let tol = 1e-9 * length;
    if (grid.x_min() + 0.5 * length).abs() > tol || (grid.x_max() - 0.5 * length).abs() > tol {
        return Err(Error::GridMismatch(format!(
            "box of length {length} needs a grid on [{}, {}], got [{}, {}]",
            -0.5 * length,
            0.5 * length,
            grid.x_min(),
            grid.x_max()
        )));
    }
    Ok(())
}
