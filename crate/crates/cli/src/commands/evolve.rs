//! Time series of the interpolating equation: norm, width, mean position,
//! left-well probability and optional Bohmian paths.

use num_complex::Complex64;
use rayon::prelude::*;

use qcinterp::params::make_lambda;
use qcinterp::solver::bohm::crossing_time;
use qcinterp::solver::{evolve_with, gaussian_packet, integrate_trajectories, EvolveOptions, Evolution, TrajectorySet};
use qcinterp::{PotentialSpec, WaveFunction};

use super::{Flags, Outcome};
use crate::config::{positive, require, PacketConfig, PacketMode, LoadedConfig};
use crate::error::{CliError, CliResult};
use crate::output::{format_float, Cell, Table};

struct Branch {
    evolution: Evolution,
    /// Free-packet width law, where one applies.
    sigma0: Option<f64>,
    paths: Option<TrajectorySet>,
}

pub fn run(cfg: &LoadedConfig, flags: &Flags) -> CliResult<Outcome> {
    let ec = require(&cfg.scenario.evolve, "evolve")?;
    let consts = cfg.constants;
    let grid = ec.grid;
    let lambda = make_lambda(ec.lambda).map_err(CliError::invalid)?;
    ec.potential.sample(&grid).map_err(CliError::invalid)?;
    positive("dt", ec.dt)?;
    positive("norm_tolerance", ec.norm_tolerance)?;
    positive("width_tolerance", ec.width_tolerance)?;
    if ec.steps == 0 || ec.record_every == 0 {
        return Err(CliError::Config("steps and record_every must be at least 1".into()));
    }
    if ec.packets.is_empty() {
        return Err(CliError::Config("evolve needs at least one packet".into()));
    }
    for p in &ec.packets {
        positive("packet sigma", p.sigma)?;
        if !grid.contains(p.center) || !p.momentum.is_finite() {
            return Err(CliError::Config(format!("packet at {} is outside the grid", p.center)));
        }
    }
    let seeds = flags.seed_positions.clone().unwrap_or_else(|| ec.seeds.clone());
    if let Some(s) = seeds.iter().find(|s| !grid.contains(**s)) {
        return Err(CliError::Config(format!("seed {s} is outside the grid")));
    }
    let mut opts = EvolveOptions::new(ec.dt, ec.steps).record_every(ec.record_every);
    if let Some(t) = ec.picard_tolerance {
        opts.picard_tolerance = positive("picard_tolerance", t)?;
    }
    if let Some(n) = ec.max_picard_iterations {
        opts.max_picard_iterations = n.max(1);
    }
    let norm_tolerance = flags.tolerance.unwrap_or(ec.norm_tolerance);

    let packet = |p: &PacketConfig| gaussian_packet(grid, p.center, p.sigma, p.momentum, &consts);
    let free = matches!(ec.potential, PotentialSpec::Harmonic { stiffness } if stiffness == 0.0);
    let law = |p: &PacketConfig| (free && (lambda.value() == 0.0 || lambda.value() == 1.0)).then_some(p.sigma);

    // (initial state, seeds, width law) per branch
    let setups: Vec<(WaveFunction, Vec<f64>, Option<f64>)> = match ec.mode {
        PacketMode::Superpose => {
            let mut amps = vec![Complex64::new(0.0, 0.0); grid.n_points()];
            for p in &ec.packets {
                for (a, b) in amps.iter_mut().zip(packet(p)?.amplitudes()) {
                    *a += b;
                }
            }
            let psi = WaveFunction::new(grid, amps)?.normalized().map_err(CliError::invalid)?;
            let sigma = if ec.packets.len() == 1 { law(&ec.packets[0]) } else { None };
            vec![(psi, seeds.clone(), sigma)]
        }
        PacketMode::Branches => {
            let mut own: Vec<Vec<f64>> = vec![Vec::new(); ec.packets.len()];
            if seeds.is_empty() {
                for (k, p) in ec.packets.iter().enumerate() {
                    own[k].push(p.center);
                }
            } else {
                for &s in &seeds {
                    let nearest = (0..ec.packets.len())
                        .min_by(|&i, &j| {
                            let di = (ec.packets[i].center - s).abs();
                            let dj = (ec.packets[j].center - s).abs();
                            di.total_cmp(&dj)
                        })
                        .expect("packets are non-empty");
                    own[nearest].push(s);
                }
            }
            ec.packets
                .iter()
                .zip(own)
                .map(|(p, s)| Ok((packet(p)?, s, law(p))))
                .collect::<CliResult<_>>()?
        }
    };

    let branches: Vec<Branch> = setups
        .par_iter()
        .map(|(psi, seeds, sigma0)| -> CliResult<Branch> {
            let evolution = evolve_with(psi, &ec.potential, lambda, &consts, &opts)?;
            let paths = if seeds.is_empty() {
                None
            } else {
                Some(integrate_trajectories(&evolution, seeds, &consts)?)
            };
            Ok(Branch {
                evolution,
                sigma0: *sigma0,
                paths,
            })
        })
        .collect::<CliResult<_>>()?;

    let multi = branches.len() > 1;
    let suffix = |b: usize| if multi { format!("_b{b}") } else { String::new() };
    let mut columns = vec!["t".to_string()];
    for (b, br) in branches.iter().enumerate() {
        for name in ["norm", "width", "mean_x", "p_left"] {
            columns.push(format!("{name}{}", suffix(b)));
        }
        if br.sigma0.is_some() {
            columns.push(format!("width_analytic{}", suffix(b)));
        }
    }
    // (branch, seed, path)
    let mut paths: Vec<(usize, f64, &[f64])> = Vec::new();
    for (b, br) in branches.iter().enumerate() {
        if let Some(ts) = &br.paths {
            for (seed, path) in ts.seeds.iter().zip(&ts.positions) {
                paths.push((b, *seed, path));
            }
        }
    }
    columns.extend((0..paths.len()).map(|k| format!("x_{k}")));
    let mut out = Outcome::new(Table::new(columns));
    out.table.meta("lambda", format_float(lambda.value()));
    out.table.meta(
        "mode",
        match ec.mode {
            PacketMode::Superpose => "superpose",
            PacketMode::Branches => "branches",
        },
    );
    for (k, (b, seed, _)) in paths.iter().enumerate() {
        out.table.meta("trajectory", format!("x_{k}: seed {} in branch {b}", format_float(*seed)));
    }

    let times = &branches[0].evolution.times;
    let mut worst_norm = 0.0f64;
    let mut worst_width: Option<(f64, usize)> = None;
    for (j, &t) in times.iter().enumerate() {
        let mut row = vec![Cell::Num(t)];
        for (b, br) in branches.iter().enumerate() {
            let psi = &br.evolution.states[j];
            let norm = psi.norm();
            let width = psi.width();
            worst_norm = worst_norm.max((norm - br.evolution.states[0].norm()).abs());
            row.push(Cell::Num(norm));
            row.push(Cell::Num(width));
            row.push(Cell::Num(psi.mean_position()));
            row.push(Cell::Num(0.5 * (1.0 + psi.left_right_imbalance())));
            if let Some(s0) = br.sigma0 {
                let expected = if lambda.value() == 0.0 {
                    let r = consts.hbar * t / (2.0 * consts.mass * s0 * s0);
                    s0 * (1.0 + r * r).sqrt()
                } else {
                    s0
                };
                let rel = (width - expected).abs() / expected;
                if worst_width.is_none_or(|(w, _)| rel > w) {
                    worst_width = Some((rel, b));
                }
                row.push(Cell::Num(expected));
            }
        }
        row.extend(paths.iter().map(|(_, _, p)| Cell::Num(p[j])));
        out.table.push(row);
    }

    out.table.meta("max_norm_drift", format_float(worst_norm));
    if !(worst_norm < norm_tolerance) {
        out.fail(format!(
            "norm drift {} exceeds {}",
            format_float(worst_norm),
            format_float(norm_tolerance)
        ));
    }
    if let Some((rel, b)) = worst_width {
        out.table.meta("max_width_error", format_float(rel));
        if !(rel <= ec.width_tolerance) {
            out.fail(format!(
                "branch {b}: width deviates from the free-packet law by {} (tolerance {})",
                format_float(rel),
                format_float(ec.width_tolerance)
            ));
        }
    }
    for a in 0..paths.len() {
        for c in a + 1..paths.len() {
            if let Some(tc) = crossing_time(times, paths[a].2, paths[c].2, ec.crossing_tolerance) {
                out.event(format!(
                    "trajectory crossing: x_{a} (seed {}, branch {}) and x_{c} (seed {}, branch {}) meet at t = {}",
                    format_float(paths[a].1),
                    paths[a].0,
                    format_float(paths[c].1),
                    paths[c].0,
                    format_float(tc)
                ));
            }
        }
    }
    Ok(out)
}
