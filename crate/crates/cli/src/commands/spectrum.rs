//! Grid eigenvalues against the closed forms for the box and the harmonic well.

use rayon::prelude::*;

use qcinterp::box_model::{box_energy, BoxSpec};
use qcinterp::solver::{build_hamiltonian, solve_eigenstates};
use qcinterp::{InterpolationParam, PhysicalConstants, PotentialSpec};

use super::{Flags, Outcome};
use crate::config::{require, LoadedConfig};
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Table};

/// Closed-form level `index` (0-based), when one exists.
fn analytic(
    potential: &PotentialSpec,
    index: usize,
    lambda: InterpolationParam,
    consts: &PhysicalConstants,
) -> CliResult<Option<f64>> {
    match potential {
        PotentialSpec::Box { length } => {
            let spec = BoxSpec::new(*length, index as u32 + 1)?;
            Ok(Some(box_energy(index as i64 + 1, &spec, lambda, consts)?))
        }
        PotentialSpec::Harmonic { stiffness } if *stiffness > 0.0 => {
            let omega = (stiffness / consts.mass).sqrt();
            Ok(Some(
                (index as f64 + 0.5) * consts.hbar * omega * lambda.quantum_weight().sqrt(),
            ))
        }
        _ => Ok(None),
    }
}

/// Box levels are labelled from 1, all others from 0.
fn label(potential: &PotentialSpec, index: usize) -> usize {
    match potential {
        PotentialSpec::Box { .. } => index + 1,
        _ => index,
    }
}

pub fn run(cfg: &LoadedConfig, flags: &Flags) -> CliResult<Outcome> {
    let sc = require(&cfg.scenario.spectrum, "spectrum")?;
    let consts = cfg.constants;
    let lambdas = sc.lambda.values()?;
    sc.potential.sample(&sc.grid).map_err(CliError::invalid)?;
    if sc.n_levels == 0 || sc.n_levels > sc.grid.n_points() - 2 {
        return Err(CliError::Config(format!(
            "n_levels must be in 1..={}, got {}",
            sc.grid.n_points() - 2,
            sc.n_levels
        )));
    }
    let tolerance = flags.tolerance.unwrap_or(sc.tolerance);

    let blocks: Vec<Vec<(usize, Option<f64>, f64)>> = lambdas
        .par_iter()
        .map(|&lambda| -> CliResult<_> {
            let h = build_hamiltonian(&sc.grid, &sc.potential, lambda, &consts)?;
            let states = solve_eigenstates(&h, sc.n_levels)?;
            states
                .iter()
                .enumerate()
                .map(|(i, s)| Ok((i, analytic(&sc.potential, i, lambda, &consts)?, s.energy)))
                .collect()
        })
        .collect::<CliResult<_>>()?;

    let columns = ["lambda", "n", "E_analytic", "E_grid", "rel_error"];
    let mut out = Outcome::new(Table::new(columns.iter().map(|s| s.to_string()).collect()));
    out.table.meta(
        "rel_error",
        "|E_grid - E_analytic| / |E_analytic|, absolute where E_analytic = 0",
    );
    out.table.meta("tolerance", crate::output::format_float(tolerance));
    for (lambda, block) in lambdas.iter().zip(blocks) {
        for (i, exact, grid_e) in block {
            let err = exact.map(|e| {
                let d = (grid_e - e).abs();
                if e == 0.0 {
                    d
                } else {
                    d / e.abs()
                }
            });
            if let Some(err) = err {
                if !(err <= tolerance) {
                    out.fail(format!(
                        "lambda {} level {}: rel_error {err:e} exceeds {tolerance:e}",
                        lambda.value(),
                        label(&sc.potential, i)
                    ));
                }
            }
            out.table.push(vec![
                Cell::Num(lambda.value()),
                Cell::from(label(&sc.potential, i)),
                Cell::from(exact),
                Cell::Num(grid_e),
                Cell::from(err),
            ]);
        }
    }
    Ok(out)
}
