//! Oscillator ensembles driven between the quantum (LDL-like) and classical
//! (HDL-like) extremes by `λ(t) = |sin Ωt|`.
//!
//! Thermodynamic quantities are evaluated quasi-statically: each sample uses
//! the equilibrium expressions at the instantaneous `λ`, with `u` fixed.

use serde::{Deserialize, Serialize};

use crate::params::lambda_drive;
use crate::thermo::{entropy_for, free_energy, mean_energy_over_kt, ThermoPoint, Variant};
use crate::{DriveSpec, Error, InterpolationParam, PhysicalConstants, Result};

/// Below this `λ` a sample is LDL-like.
pub const LDL_THRESHOLD: f64 = 0.1;
/// Above this `λ` a sample is HDL-like.
pub const HDL_THRESHOLD: f64 = 0.9;
/// Relative tolerance on `(1 − λ)u/2 = λ` for the per-sample balance flag.
pub const BALANCE_TOLERANCE: f64 = 1e-6;
/// Default tolerance on `|u/2 − 1|` in [`equality_report`].
pub const EQUALITY_TOLERANCE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StateLabel {
    #[serde(rename = "LDL-like")]
    LdlLike,
    #[serde(rename = "HDL-like")]
    HdlLike,
    #[serde(rename = "mixed")]
    Mixed,
}

impl StateLabel {
    pub fn classify(lambda: f64) -> Self {
        if lambda < LDL_THRESHOLD {
            Self::LdlLike
        } else if lambda > HDL_THRESHOLD {
            Self::HdlLike
        } else {
            Self::Mixed
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::LdlLike => "LDL-like",
            Self::HdlLike => "HDL-like",
            Self::Mixed => "mixed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OscillationSeries {
    pub u: f64,
    pub variant: Variant,
    pub times: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub f_over_kt: Vec<f64>,
    pub s_over_k: Vec<f64>,
    /// `⟨E⟩/kT`.
    pub mean_energy: Vec<f64>,
    pub labels: Vec<StateLabel>,
    /// The zero-point term `(1 − λ)u/2` equals the thermal term `λ`.
    pub balanced: Vec<bool>,
}

impl OscillationSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

fn is_balanced(lambda: f64, u: f64) -> bool {
    let zpe = (1.0 - lambda) * 0.5 * u;
    let thermal = lambda;
    let scale = zpe.abs().max(thermal.abs());
    scale > 0.0 && (zpe - thermal).abs() <= BALANCE_TOLERANCE * scale
}

pub fn oscillation_series(drive: &DriveSpec, u: f64, variant: Variant) -> Result<OscillationSeries> {
    drive.validate()?;
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::OutOfRange {
            what: "u",
            value: u,
            range: "(0, inf)",
        });
    }
    let consts = PhysicalConstants::natural();
    let times = drive.times();
    let lambdas: Vec<InterpolationParam> = times.iter().map(|&t| lambda_drive(drive, t)).collect();
    let points = lambdas
        .iter()
        .map(|&l| ThermoPoint::from_u(l, u, &consts))
        .collect::<Result<Vec<_>>>()?;
    Ok(OscillationSeries {
        u,
        variant,
        lambdas: lambdas.iter().map(|l| l.value()).collect(),
        f_over_kt: points.iter().map(|p| free_energy(p, variant)).collect(),
        s_over_k: points.iter().map(|p| entropy_for(p, variant)).collect(),
        mean_energy: points.iter().map(|p| mean_energy_over_kt(p, variant)).collect(),
        labels: lambdas.iter().map(|l| StateLabel::classify(l.value())).collect(),
        balanced: lambdas.iter().map(|l| is_balanced(l.value(), u)).collect(),
        times,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Balanced,
    ThermalDominated,
    QuantumDominated,
}

/// Zero-point energy `½ħω` against `kT`, both in units of `kT`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EqualityReport {
    pub u: f64,
    pub zpe_over_kt: f64,
    pub thermal_over_kt: f64,
    pub ratio: f64,
    pub regime: Regime,
}

pub fn equality_report(u: f64) -> Result<EqualityReport> {
    equality_report_with(u, EQUALITY_TOLERANCE)
}

pub fn equality_report_with(u: f64, tolerance: f64) -> Result<EqualityReport> {
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::OutOfRange {
            what: "u",
            value: u,
            range: "(0, inf)",
        });
    }
    let zpe = 0.5 * u;
    let regime = if (zpe - 1.0).abs() < tolerance {
        Regime::Balanced
    } else if zpe < 1.0 {
        Regime::ThermalDominated
    } else {
        Regime::QuantumDominated
    };
    Ok(EqualityReport {
        u,
        zpe_over_kt: zpe,
        thermal_over_kt: 1.0,
        ratio: zpe,
        regime,
    })
}
