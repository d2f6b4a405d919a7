use qcinterp::ldl_hdl::{equality_report_with, oscillation_series, Regime};

use super::{Flags, Outcome};
use crate::config::{drive_spec, positive, require, LoadedConfig};
use crate::error::{CliError, CliResult};
use crate::output::{format_float, Cell, Table};

pub fn run(cfg: &LoadedConfig, _flags: &Flags) -> CliResult<Outcome> {
    let oc = require(&cfg.scenario.oscillate, "oscillate")?;
    let drive = drive_spec(&oc.drive)?;
    positive("u", oc.u)?;
    positive("equality_tolerance", oc.equality_tolerance)?;
    let series = oscillation_series(&drive, oc.u, oc.variant).map_err(CliError::invalid)?;
    let eq = equality_report_with(oc.u, oc.equality_tolerance)?;

    let columns = ["t", "lambda", "label", "F_over_kT", "S_over_k", "E_over_kT", "balanced"];
    let mut out = Outcome::new(Table::new(columns.iter().map(|s| s.to_string()).collect()));
    out.table.meta("drive_period", format_float(drive.period()));
    out.table.meta(
        "equality",
        format!(
            "u = {}: zpe/kT = {}, thermal/kT = {}, regime = {}",
            format_float(eq.u),
            format_float(eq.zpe_over_kt),
            format_float(eq.thermal_over_kt),
            match eq.regime {
                Regime::Balanced => "balanced",
                Regime::ThermalDominated => "thermal_dominated",
                Regime::QuantumDominated => "quantum_dominated",
            }
        ),
    );
    for i in 0..series.len() {
        out.table.push(vec![
            Cell::Num(series.times[i]),
            Cell::Num(series.lambdas[i]),
            Cell::from(series.labels[i].as_str()),
            Cell::Num(series.f_over_kt[i]),
            Cell::Num(series.s_over_k[i]),
            Cell::Num(series.mean_energy[i]),
            Cell::Bool(series.balanced[i]),
        ]);
    }
    Ok(out)
}
