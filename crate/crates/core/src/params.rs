//! Physical constants, the interpolation parameter and its periodic drive.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// ħ, m and k_B. Every formula in the crate takes them explicitly; the
/// default is the dimensionless system ħ = m = k_B = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub mass: f64,
    pub k_b: f64,
}

impl PhysicalConstants {
    pub fn new(hbar: f64, mass: f64, k_b: f64) -> Result<Self> {
        for (what, v) in [("hbar", hbar), ("mass", mass), ("k_B", k_b)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::OutOfRange {
                    what,
                    value: v,
                    range: "(0, inf)",
                });
            }
        }
        Ok(Self { hbar, mass, k_b })
    }

    /// Dimensionless units.
    pub const fn natural() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            k_b: 1.0,
        }
    }

    /// SI values of ħ [J s] and k_B [J/K], with a unit mass [kg].
    pub const fn si() -> Self {
        Self {
            hbar: HBAR_SI,
            mass: 1.0,
            k_b: K_B_SI,
        }
    }

    /// `ħ² / 2m`, the kinetic prefactor.
    pub fn kinetic_scale(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::natural()
    }
}

pub const HBAR_SI: f64 = 1.054_571_817e-34;
pub const K_B_SI: f64 = 1.380_649e-23;
pub const AVOGADRO: f64 = 6.022_140_76e23;
/// Speed of light in cm/s, for converting IR wavenumbers.
pub const SPEED_OF_LIGHT_CM: f64 = 2.997_924_58e10;

/// Angular frequency [rad/s] of a vibrational band given in cm⁻¹.
pub fn omega_from_wavenumber(wavenumber_cm: f64) -> f64 {
    2.0 * std::f64::consts::PI * SPEED_OF_LIGHT_CM * wavenumber_cm
}

/// The interpolation parameter `λ ∈ [0, 1]`; 0 is quantum, 1 is classical.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct InterpolationParam(f64);

impl InterpolationParam {
    pub const QUANTUM: Self = Self(0.0);
    pub const CLASSICAL: Self = Self(1.0);

    pub fn new(lambda: f64) -> Result<Self> {
        make_lambda(lambda)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 − λ`, the fraction of quantum kinetic energy retained.
    pub fn quantum_weight(self) -> f64 {
        1.0 - self.0
    }
}

impl TryFrom<f64> for InterpolationParam {
    type Error = Error;

    fn try_from(x: f64) -> Result<Self> {
        make_lambda(x)
    }
}

impl From<InterpolationParam> for f64 {
    fn from(l: InterpolationParam) -> f64 {
        l.0
    }
}

pub fn make_lambda(x: f64) -> Result<InterpolationParam> {
    if (0.0..=1.0).contains(&x) {
        Ok(InterpolationParam(x))
    } else {
        Err(Error::OutOfRange {
            what: "lambda",
            value: x,
            range: "[0, 1]",
        })
    }
}

/// Sampling window for `λ(t) = |sin Ωt|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveSpec {
    pub omega_drive: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub n_samples: usize,
}

impl DriveSpec {
    pub fn new(omega_drive: f64, t_start: f64, t_end: f64, n_samples: usize) -> Result<Self> {
        let spec = Self {
            omega_drive,
            t_start,
            t_end,
            n_samples,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_drive > 0.0 && self.omega_drive.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "drive frequency must be positive, got {}",
                self.omega_drive
            )));
        }
        if !(self.t_end > self.t_start) || !self.t_start.is_finite() || !self.t_end.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "drive window [{}, {}] is empty",
                self.t_start, self.t_end
            )));
        }
        if self.n_samples < 2 {
            return Err(Error::InvalidParameter(format!(
                "drive needs at least 2 samples, got {}",
                self.n_samples
            )));
        }
        Ok(())
    }

    /// Half-period of `|sin Ωt|`.
    pub fn period(&self) -> f64 {
        std::f64::consts::PI / self.omega_drive
    }

    /// Uniform sample times, both endpoints included.
    pub fn times(&self) -> Vec<f64> {
        let step = (self.t_end - self.t_start) / (self.n_samples - 1) as f64;
        (0..self.n_samples)
            .map(|i| {
                if i + 1 == self.n_samples {
                    self.t_end
                } else {
                    self.t_start + step * i as f64
                }
            })
            .collect()
    }
}

/// `λ(t) = |sin Ωt|`.
///
/// The value at `t = π/(4Ω)` is `√2/2`, not the `½` one might read off a
/// quarter-period; the formula is applied literally.
pub fn lambda_drive(drive: &DriveSpec, t: f64) -> InterpolationParam {
    // |sin| can exceed 1 by an ulp on some libm builds
    InterpolationParam((drive.omega_drive * t).sin().abs().min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn lambda_domain() {
        assert_eq!(make_lambda(0.0).unwrap().value(), 0.0);
        assert_eq!(make_lambda(1.0).unwrap().value(), 1.0);
        assert!(matches!(make_lambda(1.5), Err(Error::OutOfRange { .. })));
        assert!(make_lambda(-1e-300).is_err());
        assert!(make_lambda(f64::NAN).is_err());
    }

    #[test]
    fn lambda_deserializes_with_validation() {
        let ok: InterpolationParam = serde_json::from_str("0.25").unwrap();
        assert_eq!(ok.value(), 0.25);
        assert!(serde_json::from_str::<InterpolationParam>("2.0").is_err());
    }

    #[test]
    fn constants_must_be_positive() {
        assert!(PhysicalConstants::new(1.0, 0.0, 1.0).is_err());
        assert!(PhysicalConstants::new(-1.0, 1.0, 1.0).is_err());
        assert!(PhysicalConstants::new(1.0, 1.0, f64::INFINITY).is_err());
        assert_eq!(PhysicalConstants::new(1.0, 1.0, 1.0).unwrap(), PhysicalConstants::default());
    }

    #[test]
    fn drive_values() {
        let d = DriveSpec::new(1.0, 0.0, 2.0 * PI, 11).unwrap();
        assert_eq!(lambda_drive(&d, 0.0).value(), 0.0);
        assert!((lambda_drive(&d, FRAC_PI_2).value() - 1.0).abs() < 1e-15);
        assert!((lambda_drive(&d, FRAC_PI_4).value() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((lambda_drive(&d, FRAC_PI_4).value() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn drive_validation() {
        assert!(DriveSpec::new(0.0, 0.0, 1.0, 3).is_err());
        assert!(DriveSpec::new(1.0, 1.0, 1.0, 3).is_err());
        assert!(DriveSpec::new(1.0, 0.0, 1.0, 1).is_err());
        let d = DriveSpec::new(2.0, 0.0, 1.0, 2).unwrap();
        assert_eq!(d.times(), vec![0.0, 1.0]);
    }

    #[test]
    fn wavenumber_conversion() {
        // 1 cm^-1 corresponds to 2πc·100 rad/s with c in m/s
        let w = omega_from_wavenumber(1.0);
        assert!((w - 2.0 * PI * 299_792_458.0 * 100.0).abs() / w < 1e-15);
    }

    proptest::proptest! {
        #[test]
        fn drive_in_unit_interval(t in -1e3f64..1e3, omega in 1e-3f64..1e2) {
            let d = DriveSpec::new(omega, -1e3, 1e3, 2).unwrap();
            let l = lambda_drive(&d, t).value();
            proptest::prop_assert!((0.0..=1.0).contains(&l));
        }

        #[test]
        fn drive_is_pi_over_omega_periodic(t in -50.0f64..50.0, omega in 0.1f64..10.0) {
            let d = DriveSpec::new(omega, -1e3, 1e3, 2).unwrap();
            let a = lambda_drive(&d, t).value();
            let b = lambda_drive(&d, t + d.period()).value();
            // |Ωt| ≲ 500 so the argument carries ~1e-13 absolute rounding
            proptest::prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
