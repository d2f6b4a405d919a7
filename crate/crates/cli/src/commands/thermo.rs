//! `F/kT` and `S/k` against `u = ħω/kT`, one column block per `λ`.

use rayon::prelude::*;

use qcinterp::thermo::{entropy_zero, free_energy, thermo_curve, ThermoPoint, Variant};
use qcinterp::{Error, PhysicalConstants};

use super::{lambda_tag, Flags, Outcome};
use crate::config::{require, LoadedConfig};
use crate::error::CliResult;
use crate::output::{format_float, Cell, Table};

fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::ZpeOnly => "zpe_only",
        Variant::Full => "full",
    }
}

pub fn run(cfg: &LoadedConfig, _flags: &Flags) -> CliResult<Outcome> {
    let tc = require(&cfg.scenario.thermo, "thermo")?;
    let lambdas = tc.lambda.values()?;
    let u = tc.u.values()?;

    let curves = lambdas
        .par_iter()
        .map(|&l| thermo_curve(l, &u, tc.variant))
        .collect::<Result<Vec<_>, _>>()?;

    let mut columns = vec!["u".to_string()];
    columns.extend(curves.iter().map(|c| format!("F_over_kT_{}", lambda_tag(c.lambda))));
    columns.extend(curves.iter().map(|c| format!("S_over_k_{}", lambda_tag(c.lambda))));
    if tc.heat_capacity {
        columns.extend(curves.iter().map(|c| format!("Cv_over_k_{}", lambda_tag(c.lambda))));
    }
    let mut out = Outcome::new(Table::new(columns));
    out.table.meta("variant", variant_name(tc.variant));

    let natural = PhysicalConstants::natural();
    for &l in &lambdas {
        let lam = format_float(l.value());
        match entropy_zero(l, tc.variant) {
            Ok(root) => {
                let above = u.iter().position(|&x| x > root);
                let bracket = match above {
                    Some(k) if k > 0 => format!(", between grid rows u = {} and u = {}", format_float(u[k - 1]), format_float(u[k])),
                    _ => String::new(),
                };
                out.table.meta("entropy_zero", format!("lambda = {lam}: S/k = 0 at u* = {}{bracket}", format_float(root)));
                if l.value() == 1.0 {
                    out.table.meta(
                        "marker",
                        format!("u* = e = {} for lambda = 1 (computed {})", format_float(std::f64::consts::E), format_float(root)),
                    );
                }
            }
            Err(Error::NoRootInBracket { lo, hi }) => out.table.meta(
                "entropy_zero",
                format!("lambda = {lam}: S/k has no zero in ({}, {})", format_float(lo), format_float(hi)),
            ),
            Err(e) => return Err(e.into()),
        }
        let f1 = free_energy(&ThermoPoint::from_u(l, 1.0, &natural)?, tc.variant);
        out.table.meta("free_energy_at_u1", format!("lambda = {lam}: F/kT(u=1) = {}", format_float(f1)));
        if l.value() < 1.0 {
            out.warn(format!(
                "F/kT(u=1) = {} at lambda = {lam} is nonzero: the free energy vanishes at u = 1 only in the classical limit lambda = 1",
                format_float(f1)
            ));
        }
    }

    for (k, &uk) in u.iter().enumerate() {
        let mut row = vec![Cell::Num(uk)];
        row.extend(curves.iter().map(|c| Cell::Num(c.f_over_kt[k])));
        row.extend(curves.iter().map(|c| Cell::Num(c.s_over_k[k])));
        if tc.heat_capacity {
            row.extend(curves.iter().map(|c| Cell::Num(c.cv_over_k[k])));
        }
        out.table.push(row);
    }
    Ok(out)
}
