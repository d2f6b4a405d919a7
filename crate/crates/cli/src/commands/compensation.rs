//! Residuals of `ΔH = T_c ΔS + ½ħω` over a measured table.

use std::path::Path;

use qcinterp::thermo::{molar_zpe_from_wavenumber, CompensationRecord};

use super::{Flags, Outcome};
use crate::config::{positive, require, LoadedConfig, ZpeSource};
use crate::error::{CliError, CliResult};
use crate::output::{format_float, Cell, Table};

/// `(ΔH, ΔS)` pairs read from a CSV with `delta_H` and `delta_S` columns.
/// Rows are numbered from 1, not counting the header.
pub fn read_table(bytes: &[u8]) -> CliResult<Vec<(f64, f64)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(bytes);
    let header = rdr
        .headers()
        .map_err(|e| CliError::Parse {
            row: 0,
            message: e.to_string(),
        })?
        .clone();
    let col = |name: &str| {
        header.iter().position(|h| h == name).ok_or_else(|| CliError::Parse {
            row: 0,
            message: format!("header has no `{name}` column"),
        })
    };
    let (ih, is) = (col("delta_H")?, col("delta_S")?);
    let mut rows = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let row = k + 1;
        let rec = rec.map_err(|e| CliError::Parse {
            row,
            message: e.to_string(),
        })?;
        let field = |i: usize, name: &str| -> CliResult<f64> {
            let s = rec.get(i).unwrap_or("");
            if s.is_empty() {
                return Err(CliError::Parse {
                    row,
                    message: format!("{name} is missing"),
                });
            }
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Parse {
                    row,
                    message: format!("{name} = `{s}` is not a finite number"),
                })
        };
        rows.push((field(ih, "delta_H")?, field(is, "delta_S")?));
    }
    Ok(rows)
}

pub fn run(cfg: &LoadedConfig, flags: &Flags) -> CliResult<Outcome> {
    let cc = require(&cfg.scenario.compensation, "compensation")?;
    let t_c = positive("t_c", cc.t_c)?;
    let source = cc.zpe_source()?;
    let path = match (&flags.input, &cc.input) {
        (Some(p), _) => p.clone(),
        (None, Some(p)) => cfg.resolve(p),
        (None, None) => return Err(CliError::Config("compensation needs an input table (config `input` or --input)".into())),
    };
    let tolerance = flags.tolerance.or(cc.residual_tolerance);
    let bytes = std::fs::read(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let rows = read_table(&bytes)?;

    let (zpe, units) = match source {
        ZpeSource::Direct(z) => (z, "table units"),
        ZpeSource::Omega(w) => (0.5 * cfg.constants.hbar * w, "hbar units of the config"),
        ZpeSource::Wavenumber(k) => (molar_zpe_from_wavenumber(k), "J/mol"),
    };
    let records: Vec<CompensationRecord> = rows
        .iter()
        .map(|&(dh, ds)| CompensationRecord::from_measured(dh, ds, t_c, zpe))
        .collect();

    let columns = ["row", "delta_H", "delta_S", "T_c", "zpe", "residual"];
    let mut out = Outcome::new(Table::new(columns.iter().map(|s| s.to_string()).collect()));
    out.table.meta("input", display_name(&path));
    out.table.meta("input_sha256", crate::config::sha256_hex(&bytes));
    out.table.meta("zpe", format!("{} ({units})", format_float(zpe)));
    let n = records.len();
    let mean = if n == 0 { 0.0 } else { records.iter().map(|r| r.residual).sum::<f64>() / n as f64 };
    let max_abs = records.iter().map(|r| r.residual.abs()).fold(0.0, f64::max);
    out.table.meta("mean_residual", format_float(mean));
    out.table.meta("max_abs_residual", format_float(max_abs));
    for (k, r) in records.iter().enumerate() {
        if let Some(tol) = tolerance {
            if !(r.residual.abs() <= tol) {
                out.fail(format!("row {}: residual {} exceeds {}", k + 1, format_float(r.residual), format_float(tol)));
            }
        }
        out.table.push(vec![
            Cell::from(k + 1),
            Cell::Num(r.delta_h),
            Cell::Num(r.delta_s),
            Cell::Num(r.t_c),
            Cell::Num(r.zpe),
            Cell::Num(r.residual),
        ]);
    }
    Ok(out)
}

/// File name only, so the output does not depend on where the input lives.
fn display_name(p: &Path) -> String {
    p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned())
}
