//! Tunneling quench across a `λ` sweep: Gaussian two-level quantities next
//! to the full-grid doublet.

use rayon::prelude::*;

use qcinterp::double_well::{
    density_matrix_for, grid_splitting_oracle, harmonic_params, overlap, tunneling_coefficient,
    two_level_from_approx, well_probability, commutator_max, HarmonicApprox,
};
use qcinterp::{Error, InterpolationParam};

use super::{lambda_tag, Flags, Outcome};
use crate::config::{require, well_spec, LoadedConfig};
use crate::error::{CliError, CliResult};
use crate::output::{format_float, Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RowStatus {
    Ok,
    /// `λ` is in the classical branch; Gaussian quantities do not exist.
    Singular,
    /// The grid is too coarse or too short for the Gaussian states.
    Unresolved,
}

impl RowStatus {
    fn as_str(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Singular => "singular",
            RowStatus::Unresolved => "unresolved",
        }
    }
}

struct Row {
    lambda: InterpolationParam,
    status: RowStatus,
    approx: Option<HarmonicApprox>,
    overlap: Option<f64>,
    delta: Option<f64>,
    two_level_gap: Option<f64>,
    grid_gap: Option<f64>,
    commutator: Option<f64>,
    samples: Vec<Option<f64>>,
}

pub fn run(cfg: &LoadedConfig, flags: &Flags) -> CliResult<Outcome> {
    let dc = require(&cfg.scenario.doublewell, "doublewell")?;
    let consts = cfg.constants;
    let well = well_spec(&dc.well)?;
    let lambdas = dc.lambda.values()?;
    let grid = dc.grid;
    if let Some(t) = dc.times.iter().find(|t| !t.is_finite()) {
        return Err(CliError::Config(format!("sample time {t} is not finite")));
    }
    if dc.grid_oracle && (grid.n_points() % 2 == 0 || (grid.x_min() + grid.x_max()).abs() > 1e-12 * grid.x_max().abs()) {
        return Err(CliError::Config(
            "grid_oracle needs a grid symmetric about 0 with an odd n_points".into(),
        ));
    }
    dc.mixing.weight(InterpolationParam::CLASSICAL).map_err(CliError::invalid)?;
    let tolerance = flags.tolerance.or(dc.gap_tolerance);

    let rows: Vec<Row> = lambdas
        .par_iter()
        .map(|&lambda| -> CliResult<Row> {
            let grid_gap = if dc.grid_oracle {
                Some(grid_splitting_oracle(&well, lambda, &grid, &consts)?.gap)
            } else {
                None
            };
            let rho = density_matrix_for(lambda, &dc.mixing)?;
            let mut row = Row {
                lambda,
                status: RowStatus::Ok,
                approx: None,
                overlap: None,
                delta: None,
                two_level_gap: None,
                grid_gap,
                commutator: None,
                samples: vec![None; dc.times.len()],
            };
            let approx = match harmonic_params(&well, lambda, &consts) {
                Ok(a) => a,
                Err(Error::ClassicalSingularity { .. }) => {
                    row.status = RowStatus::Singular;
                    row.two_level_gap = Some(0.0);
                    // frozen in the starting well
                    row.samples = vec![Some(1.0); dc.times.len()];
                    return Ok(row);
                }
                Err(e) => return Err(e.into()),
            };
            row.approx = Some(approx);
            row.overlap = Some(overlap(&approx));
            let delta = match tunneling_coefficient(&approx, &grid, &consts) {
                Ok(d) => d,
                Err(Error::GridMismatch(_)) => {
                    row.status = RowStatus::Unresolved;
                    return Ok(row);
                }
                Err(e) => return Err(e.into()),
            };
            let sys = two_level_from_approx(&approx, delta, 0.0, &consts);
            row.delta = Some(delta);
            row.two_level_gap = Some(lambda.quantum_weight() * delta.abs());
            row.commutator = Some(commutator_max(&sys.matrix(), &rho.matrix));
            row.samples = dc.times.iter().map(|&t| Some(well_probability(t, &sys, &consts))).collect();
            Ok(row)
        })
        .collect::<CliResult<_>>()?;

    let mut columns: Vec<String> = [
        "lambda",
        "status",
        "omega",
        "alpha",
        "overlap",
        "delta",
        "two_level_gap",
        "grid_gap",
        "gap_ratio",
        "deep_well",
        "commutator_max",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    columns.extend(dc.times.iter().map(|t| format!("P_t_{}", format_float(*t))));
    let mut out = Outcome::new(Table::new(columns));
    out.table.meta(
        "well",
        format!("V0 = {}, a = {}", format_float(well.v0()), format_float(well.a())),
    );
    out.table.meta(
        "deep_well",
        format!("V0 a^4 >= {} hbar omega(lambda)", format_float(dc.deep_well_ratio)),
    );

    let depth = well.v0() * well.a().powi(4);
    let mut previous: Option<(f64, f64)> = None;
    for row in &rows {
        let lam = row.lambda.value();
        let deep = row
            .approx
            .map(|a| depth >= dc.deep_well_ratio * consts.hbar * a.omega);
        let ratio = match (row.two_level_gap, row.grid_gap) {
            (Some(t), Some(g)) if g != 0.0 => Some(t / g),
            _ => None,
        };
        if row.status == RowStatus::Singular {
            out.event(format!("lambda {}: classical branch, Gaussian quantities singular", format_float(lam)));
        }
        if row.status == RowStatus::Unresolved {
            out.warn(format!(
                "lambda {}: grid does not resolve the Gaussian states (dx must be <= sigma/2 and the grid must cover 6 sigma)",
                format_float(lam)
            ));
        }
        if let (Some(tol), Some(true), Some(r)) = (tolerance, deep, ratio) {
            if !((r - 1.0).abs() <= tol) {
                out.fail(format!(
                    "{}: two-level gap {} vs grid gap {} (ratio {}) outside {}",
                    lambda_tag(lam),
                    format_float(row.two_level_gap.unwrap_or(f64::NAN)),
                    format_float(row.grid_gap.unwrap_or(f64::NAN)),
                    format_float(r),
                    format_float(tol)
                ));
            }
        }
        if let (Some((pl, pg)), Some(g)) = (previous, row.two_level_gap) {
            if lam > pl && !(g < pg) {
                out.warn(format!(
                    "two-level gap does not decrease from lambda {} to {}",
                    format_float(pl),
                    format_float(lam)
                ));
            }
        }
        if let Some(g) = row.two_level_gap {
            previous = Some((lam, g));
        }

        let mut cells = vec![
            Cell::Num(lam),
            Cell::from(row.status.as_str()),
            Cell::from(row.approx.map(|a| a.omega)),
            Cell::from(row.approx.map(|a| a.alpha)),
            Cell::from(row.overlap),
            Cell::from(row.delta),
            Cell::from(row.two_level_gap),
            Cell::from(row.grid_gap),
            Cell::from(ratio),
            deep.map_or(Cell::Empty, Cell::Bool),
            Cell::from(row.commutator),
        ];
        cells.extend(row.samples.iter().map(|p| Cell::from(*p)));
        out.table.push(cells);
    }
    Ok(out)
}
