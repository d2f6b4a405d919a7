//! Scenario configuration: one JSON document with a versioned schema.
//!
//! Every struct rejects unknown keys, and [`LoadedConfig::load`] checks
//! values before any command starts computing.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};

use qcinterp::double_well::{DoubleWellSpec, MixingMap};
use qcinterp::params::make_lambda;
use qcinterp::thermo::Variant;
use qcinterp::{DriveSpec, Grid, InterpolationParam, PhysicalConstants, PotentialSpec};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub constants: ConstantsConfig,
    /// Default output path; `--out` takes precedence.
    #[serde(default)]
    pub output: Option<PathBuf>,
    pub spectrum: Option<SpectrumConfig>,
    pub doublewell: Option<DoubleWellConfig>,
    pub thermo: Option<ThermoConfig>,
    pub evolve: Option<EvolveConfig>,
    pub oscillate: Option<OscillateConfig>,
    pub compensation: Option<CompensationConfig>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsConfig {
    pub hbar: f64,
    pub mass: f64,
    pub k_b: f64,
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        let c = PhysicalConstants::natural();
        Self {
            hbar: c.hbar,
            mass: c.mass,
            k_b: c.k_b,
        }
    }
}

/// A single `λ` or a list of them.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum LambdaSet {
    One(f64),
    Many(Vec<f64>),
}

impl LambdaSet {
    pub fn values(&self) -> CliResult<Vec<InterpolationParam>> {
        let raw = match self {
            LambdaSet::One(x) => vec![*x],
            LambdaSet::Many(v) => v.clone(),
        };
        if raw.is_empty() {
            return Err(CliError::Config("lambda list is empty".into()));
        }
        raw.into_iter().map(|x| make_lambda(x).map_err(CliError::invalid)).collect()
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub potential: PotentialSpec,
    pub grid: Grid,
    pub lambda: LambdaSet,
    #[serde(default = "default_levels")]
    pub n_levels: usize,
    /// Largest accepted `rel_error`.
    #[serde(default = "default_spectrum_tolerance")]
    pub tolerance: f64,
}

fn default_levels() -> usize {
    5
}

fn default_spectrum_tolerance() -> f64 {
    1e-3
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WellConfig {
    pub v0: f64,
    pub a: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoubleWellConfig {
    pub well: WellConfig,
    pub grid: Grid,
    pub lambda: LambdaSet,
    /// Times at which `P(t)` is sampled.
    #[serde(default)]
    pub times: Vec<f64>,
    #[serde(default = "yes")]
    pub grid_oracle: bool,
    /// Rows with `V₀a⁴ ≥ deep_well_ratio · ħω(λ)` count as deep.
    #[serde(default = "default_deep_ratio")]
    pub deep_well_ratio: f64,
    /// When set, deep rows must satisfy `|two-level / grid − 1| ≤ gap_tolerance`.
    #[serde(default)]
    pub gap_tolerance: Option<f64>,
    #[serde(default)]
    pub mixing: MixingMap,
}

fn yes() -> bool {
    true
}

fn default_deep_ratio() -> f64 {
    10.0
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct URange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum USpec {
    // before Range: serde also reads a three-element array as a struct
    Values(Vec<f64>),
    Range(URange),
}

impl USpec {
    pub fn values(&self) -> CliResult<Vec<f64>> {
        let v = match self {
            USpec::Values(v) => v.clone(),
            USpec::Range(URange { start, stop, step }) => {
                if !(*step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
                    return Err(CliError::Config(format!(
                        "u range needs start <= stop and step > 0, got {start}..{stop} step {step}"
                    )));
                }
                let span = (stop - start) / step;
                let n = span.round();
                if (span - n).abs() > 1e-9 * n.max(1.0) {
                    return Err(CliError::Config(format!(
                        "u range {start}..{stop} is not a whole number of steps of {step}"
                    )));
                }
                (0..=n as usize).map(|k| start + k as f64 * step).collect()
            }
        };
        if v.is_empty() {
            return Err(CliError::Config("u grid is empty".into()));
        }
        if let Some(bad) = v.iter().find(|u| !(**u > 0.0 && u.is_finite())) {
            return Err(CliError::Config(format!("u must be positive, got {bad}")));
        }
        if v.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(CliError::Config("u grid must be strictly increasing".into()));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermoConfig {
    #[serde(default = "default_thermo_lambdas")]
    pub lambda: LambdaSet,
    pub u: USpec,
    #[serde(default)]
    pub variant: Variant,
    /// Append `C_V/k` columns after the `S/k` block.
    #[serde(default)]
    pub heat_capacity: bool,
}

fn default_thermo_lambdas() -> LambdaSet {
    LambdaSet::Many(vec![0.0, 0.25, 0.5, 0.75, 1.0])
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketConfig {
    pub center: f64,
    pub sigma: f64,
    #[serde(default)]
    pub momentum: f64,
}

#[derive(Debug, Clone, Copy, Deserialize, Default, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum PacketMode {
    /// One run on the normalized sum of all packets.
    #[default]
    Superpose,
    /// One run per packet; trajectories from different runs may cross.
    Branches,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    pub potential: PotentialSpec,
    pub grid: Grid,
    pub lambda: f64,
    pub dt: f64,
    pub steps: usize,
    #[serde(default = "one")]
    pub record_every: usize,
    pub packets: Vec<PacketConfig>,
    #[serde(default)]
    pub mode: PacketMode,
    /// Trajectory seeds; `--seed-positions` replaces them.
    #[serde(default)]
    pub seeds: Vec<f64>,
    #[serde(default)]
    pub picard_tolerance: Option<f64>,
    #[serde(default)]
    pub max_picard_iterations: Option<usize>,
    #[serde(default = "default_norm_tolerance")]
    pub norm_tolerance: f64,
    /// Relative tolerance of the width against the free-packet law.
    #[serde(default = "default_width_tolerance")]
    pub width_tolerance: f64,
    /// Separation below which two paths count as crossed.
    #[serde(default = "default_crossing_tolerance")]
    pub crossing_tolerance: f64,
}

fn one() -> usize {
    1
}

fn default_norm_tolerance() -> f64 {
    1e-8
}

fn default_width_tolerance() -> f64 {
    5e-3
}

fn default_crossing_tolerance() -> f64 {
    1e-9
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveConfig {
    pub omega_drive: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub n_samples: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillateConfig {
    pub drive: DriveConfig,
    pub u: f64,
    #[serde(default)]
    pub variant: Variant,
    #[serde(default = "default_equality_tolerance")]
    pub equality_tolerance: f64,
}

fn default_equality_tolerance() -> f64 {
    qcinterp::ldl_hdl::EQUALITY_TOLERANCE
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompensationConfig {
    pub t_c: f64,
    /// `½ħω` given directly, in the units of the table.
    #[serde(default)]
    pub zpe: Option<f64>,
    /// `ω`, converted with the configured `ħ`.
    #[serde(default)]
    pub omega: Option<f64>,
    /// IR band in cm⁻¹; `½ħω` in J/mol.
    #[serde(default)]
    pub wavenumber_cm: Option<f64>,
    /// CSV with `delta_H` and `delta_S` columns, relative to the config file.
    #[serde(default)]
    pub input: Option<PathBuf>,
    #[serde(default)]
    pub residual_tolerance: Option<f64>,
}

/// Where the zero-point energy comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZpeSource {
    Direct(f64),
    Omega(f64),
    Wavenumber(f64),
}

impl CompensationConfig {
    pub fn zpe_source(&self) -> CliResult<ZpeSource> {
        let src = match (self.zpe, self.omega, self.wavenumber_cm) {
            (Some(z), None, None) => ZpeSource::Direct(z),
            (None, Some(w), None) => ZpeSource::Omega(w),
            (None, None, Some(k)) => ZpeSource::Wavenumber(k),
            (None, None, None) => ZpeSource::Direct(0.0),
            _ => {
                return Err(CliError::Config(
                    "give at most one of zpe, omega and wavenumber_cm".into(),
                ))
            }
        };
        let v = match src {
            ZpeSource::Direct(v) | ZpeSource::Omega(v) | ZpeSource::Wavenumber(v) => v,
        };
        if !(v >= 0.0 && v.is_finite()) {
            return Err(CliError::Config(format!("zero-point source must be finite and >= 0, got {v}")));
        }
        Ok(src)
    }
}

/// A parsed config with its raw bytes and location.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub path: PathBuf,
    pub sha256: String,
    pub raw: serde_json::Value,
    pub scenario: ScenarioConfig,
    pub constants: PhysicalConstants,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl LoadedConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let bytes = std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_bytes(path, &bytes)
    }

    pub fn from_bytes(path: &Path, bytes: &[u8]) -> CliResult<Self> {
        let raw: serde_json::Value =
            serde_json::from_slice(bytes).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let scenario: ScenarioConfig =
            serde_json::from_value(raw.clone()).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if scenario.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                scenario.schema_version
            )));
        }
        let c = scenario.constants;
        let constants = PhysicalConstants::new(c.hbar, c.mass, c.k_b).map_err(CliError::invalid)?;
        Ok(Self {
            path: path.to_path_buf(),
            sha256: sha256_hex(bytes),
            raw,
            scenario,
            constants,
        })
    }

    /// Resolves a path from the config relative to the config's directory.
    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            return p.to_path_buf();
        }
        match self.path.parent() {
            Some(dir) => dir.join(p),
            None => p.to_path_buf(),
        }
    }
}

pub fn require<'a, T>(section: &'a Option<T>, name: &str) -> CliResult<&'a T> {
    section
        .as_ref()
        .ok_or_else(|| CliError::Config(format!("config has no `{name}` section")))
}

pub fn well_spec(w: &WellConfig) -> CliResult<DoubleWellSpec> {
    DoubleWellSpec::new(w.v0, w.a).map_err(CliError::invalid)
}

pub fn drive_spec(d: &DriveConfig) -> CliResult<DriveSpec> {
    DriveSpec::new(d.omega_drive, d.t_start, d.t_end, d.n_samples).map_err(CliError::invalid)
}

pub fn positive(what: &str, v: f64) -> CliResult<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{what} must be positive, got {v}")))
    }
}
