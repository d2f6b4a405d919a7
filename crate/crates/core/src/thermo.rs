//! Interpolated thermodynamics of a harmonic-oscillator ensemble.
//!
//! With `u = ħω/kT` the interpolated partition function is
//! `ln Z = (1 − λ) ln Z_qm + λ ln Z_cl`, `Z_cl = 1/u`. Two quantum partition
//! functions are supported:
//!
//! * [`Variant::ZpeOnly`]: `Z_qm = e^{−u/2}`, zero-point energy only;
//! * [`Variant::Full`]: `Z_qm = e^{−u/2} / (1 − e^{−u})`.
//!
//! `λ` is held independent of `T` in every derivative, so each quantity is
//! the same convex combination of its quantum and classical values.

use serde::{Deserialize, Serialize};

use crate::params::{omega_from_wavenumber, AVOGADRO, HBAR_SI};
use crate::{Error, InterpolationParam, PhysicalConstants, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    ZpeOnly,
    #[default]
    Full,
}

/// A state point with `u = ħω/k_B T` kept consistent with `ω` and `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoPoint {
    pub lambda: InterpolationParam,
    pub u: f64,
    pub omega: f64,
    pub temperature: f64,
}

fn check_positive(what: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what,
            value: v,
            range: "(0, inf)",
        })
    }
}

impl ThermoPoint {
    /// Point at `u` on the scale `k_B T = 1`.
    pub fn from_u(lambda: InterpolationParam, u: f64, consts: &PhysicalConstants) -> Result<Self> {
        Self::from_u_temperature(lambda, u, 1.0 / consts.k_b, consts)
    }

    pub fn from_u_temperature(
        lambda: InterpolationParam,
        u: f64,
        temperature: f64,
        consts: &PhysicalConstants,
    ) -> Result<Self> {
        check_positive("u", u)?;
        check_positive("T", temperature)?;
        Ok(Self {
            lambda,
            u,
            omega: u * consts.k_b * temperature / consts.hbar,
            temperature,
        })
    }

    pub fn from_omega_temperature(
        lambda: InterpolationParam,
        omega: f64,
        temperature: f64,
        consts: &PhysicalConstants,
    ) -> Result<Self> {
        check_positive("omega", omega)?;
        check_positive("T", temperature)?;
        let u = consts.hbar * omega / (consts.k_b * temperature);
        check_positive("u", u)?;
        Ok(Self {
            lambda,
            u,
            omega,
            temperature,
        })
    }

    /// `β = 1/k_B T`.
    pub fn beta(&self, consts: &PhysicalConstants) -> f64 {
        1.0 / (consts.k_b * self.temperature)
    }

    fn weights(&self) -> (f64, f64) {
        (self.lambda.quantum_weight(), self.lambda.value())
    }
}

/// `⟨n⟩ = 1/(e^u − 1)`.
pub fn bose_occupation(point: &ThermoPoint) -> f64 {
    1.0 / point.u.exp_m1()
}

/// `ħω(⟨n⟩ + ½)`.
pub fn mean_energy_qm(point: &ThermoPoint, consts: &PhysicalConstants) -> f64 {
    consts.hbar * point.omega * (bose_occupation(point) + 0.5)
}

/// `k_B T`.
pub fn mean_energy_cl(temperature: f64, consts: &PhysicalConstants) -> f64 {
    consts.k_b * temperature
}

/// `ln(1 − e^{−u})`, accurate for small and large `u`.
fn ln_one_minus_exp(u: f64) -> f64 {
    (-(-u).exp_m1()).ln()
}

/// `F/kT = −ln Z / …`.
pub fn free_energy(point: &ThermoPoint, variant: Variant) -> f64 {
    let (q, c) = point.weights();
    let u = point.u;
    let quantum = match variant {
        Variant::ZpeOnly => 0.5 * u,
        Variant::Full => 0.5 * u + ln_one_minus_exp(u),
    };
    q * quantum + c * u.ln()
}

/// `S/k` of the full partition function.
pub fn entropy(point: &ThermoPoint) -> f64 {
    entropy_for(point, Variant::Full)
}

/// `S/k = −(F/kT) + u ∂(F/kT)/∂u`; the zero-point term drops out.
pub fn entropy_for(point: &ThermoPoint, variant: Variant) -> f64 {
    let (q, c) = point.weights();
    let u = point.u;
    let quantum = match variant {
        Variant::ZpeOnly => 0.0,
        Variant::Full => -ln_one_minus_exp(u) + u / u.exp_m1(),
    };
    q * quantum + c * (1.0 - u.ln())
}

/// `C_V/k` of the full partition function.
pub fn heat_capacity(point: &ThermoPoint) -> f64 {
    heat_capacity_for(point, Variant::Full)
}

pub fn heat_capacity_for(point: &ThermoPoint, variant: Variant) -> f64 {
    let (q, c) = point.weights();
    let u = point.u;
    let quantum = match variant {
        Variant::ZpeOnly => 0.0,
        Variant::Full => {
            // u² e^u / (e^u − 1)², written to stay finite for large u
            let x = u / (2.0 * (0.5 * u).sinh());
            x * x
        }
    };
    q * quantum + c
}

/// `⟨E⟩/kT = u ∂(F/kT)/∂u`.
pub fn mean_energy_over_kt(point: &ThermoPoint, variant: Variant) -> f64 {
    let (q, c) = point.weights();
    let u = point.u;
    let quantum = match variant {
        Variant::ZpeOnly => 0.5 * u,
        Variant::Full => u * (0.5 + bose_occupation(point)),
    };
    q * quantum + c
}

/// `G/kT`. The `V ∂F/∂V` correction is not modeled, so `G = F`.
pub fn gibbs_energy(point: &ThermoPoint, variant: Variant) -> f64 {
    free_energy(point, variant)
}

pub const ENTROPY_ZERO_BRACKET: (f64, f64) = (1.0, 1e3);
pub const ENTROPY_ZERO_TOLERANCE: f64 = 1e-10;

/// Root `u*` of `S/k(u) = 0` on `(1, 10³)` by bisection.
///
/// At `λ = 0` the entropy only approaches zero as `u → ∞` and the call
/// returns [`Error::NoRootInBracket`].
pub fn entropy_zero(lambda: InterpolationParam, variant: Variant) -> Result<f64> {
    let consts = PhysicalConstants::natural();
    let s = |u: f64| -> Result<f64> { Ok(entropy_for(&ThermoPoint::from_u(lambda, u, &consts)?, variant)) };
    let (mut lo, mut hi) = ENTROPY_ZERO_BRACKET;
    let (s_lo, s_hi) = (s(lo)?, s(hi)?);
    if !(s_lo > 0.0 && s_hi < 0.0) {
        return Err(Error::NoRootInBracket { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = s(mid)?;
        if v.abs() < ENTROPY_ZERO_TOLERANCE || hi - lo <= f64::EPSILON * mid {
            return Ok(mid);
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `F/kT`, `S/k` and `C_V/k` over a sweep of `u` at fixed `λ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThermoCurve {
    pub lambda: f64,
    pub variant: Variant,
    pub u_values: Vec<f64>,
    pub f_over_kt: Vec<f64>,
    pub s_over_k: Vec<f64>,
    pub cv_over_k: Vec<f64>,
}

pub fn thermo_curve(lambda: InterpolationParam, u_grid: &[f64], variant: Variant) -> Result<ThermoCurve> {
    if u_grid.is_empty() {
        return Err(Error::InvalidParameter("empty u grid".into()));
    }
    if u_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("u grid must be strictly increasing".into()));
    }
    let consts = PhysicalConstants::natural();
    let points = u_grid
        .iter()
        .map(|&u| ThermoPoint::from_u(lambda, u, &consts))
        .collect::<Result<Vec<_>>>()?;
    Ok(ThermoCurve {
        lambda: lambda.value(),
        variant,
        u_values: u_grid.to_vec(),
        f_over_kt: points.iter().map(|p| free_energy(p, variant)).collect(),
        s_over_k: points.iter().map(|p| entropy_for(p, variant)).collect(),
        cv_over_k: points.iter().map(|p| heat_capacity_for(p, variant)).collect(),
    })
}

/// One entry of an entropy-enthalpy compensation table,
/// `ΔH = T_c ΔS + ZPE + residual`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompensationRecord {
    pub delta_h: f64,
    pub delta_s: f64,
    pub t_c: f64,
    pub zpe: f64,
    pub residual: f64,
}

impl CompensationRecord {
    /// Record for a measured `ΔH`; the residual is whatever the relation
    /// leaves over.
    pub fn from_measured(delta_h: f64, delta_s: f64, t_c: f64, zpe: f64) -> Self {
        Self {
            delta_h,
            delta_s,
            t_c,
            zpe,
            residual: delta_h - (t_c * delta_s + zpe),
        }
    }
}

/// `ΔH = T_c ΔS + ½ħω`. `ω = 0` reduces to classical compensation.
pub fn compensation_enthalpy(t_c: f64, delta_s: f64, omega: f64, consts: &PhysicalConstants) -> Result<CompensationRecord> {
    check_positive("T_c", t_c)?;
    if !(omega >= 0.0 && omega.is_finite()) {
        return Err(Error::OutOfRange {
            what: "omega",
            value: omega,
            range: "[0, inf)",
        });
    }
    let zpe = 0.5 * consts.hbar * omega;
    Ok(compensation_with_zpe(t_c, delta_s, zpe))
}

pub fn compensation_with_zpe(t_c: f64, delta_s: f64, zpe: f64) -> CompensationRecord {
    let delta_h = t_c * delta_s + zpe;
    CompensationRecord {
        delta_h,
        delta_s,
        t_c,
        zpe,
        residual: 0.0,
    }
}

/// Molar zero-point energy `½ħω N_A` [J/mol] of an IR band given in cm⁻¹.
pub fn molar_zpe_from_wavenumber(wavenumber_cm: f64) -> f64 {
    0.5 * HBAR_SI * omega_from_wavenumber(wavenumber_cm) * AVOGADRO
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::make_lambda;
    use std::f64::consts::E;

    fn pt(lambda: f64, u: f64) -> ThermoPoint {
        ThermoPoint::from_u(make_lambda(lambda).unwrap(), u, &PhysicalConstants::natural()).unwrap()
    }

    #[test]
    fn point_consistency() {
        let c = PhysicalConstants::new(2.0, 1.0, 0.5).unwrap();
        let p = ThermoPoint::from_omega_temperature(InterpolationParam::QUANTUM, 3.0, 4.0, &c).unwrap();
        assert!((p.u - 3.0).abs() < 1e-15);
        let q = ThermoPoint::from_u_temperature(InterpolationParam::QUANTUM, 3.0, 4.0, &c).unwrap();
        assert!((q.omega - 3.0).abs() < 1e-15);
        assert!((p.beta(&c) - 0.5).abs() < 1e-15);
        assert!(ThermoPoint::from_u(InterpolationParam::QUANTUM, 0.0, &c).is_err());
        assert!(ThermoPoint::from_omega_temperature(InterpolationParam::QUANTUM, 1.0, -1.0, &c).is_err());
    }

    #[test]
    fn occupation_and_energies() {
        let c = PhysicalConstants::natural();
        assert!((bose_occupation(&pt(0.0, 2f64.ln())) - 1.0).abs() < 1e-14);
        assert!((bose_occupation(&pt(0.0, 1.0)) - 0.581_977).abs() < 1e-6);
        assert!((bose_occupation(&pt(0.0, 1.0)) - 1.0 / (E - 1.0)).abs() < 1e-15);
        assert_eq!(bose_occupation(&pt(0.0, 800.0)), 0.0);
        assert!((mean_energy_qm(&pt(0.0, 1.0), &c) - 1.081_977).abs() < 1e-6);
        let cold = ThermoPoint::from_u_temperature(InterpolationParam::QUANTUM, 60.0, 1.0, &c).unwrap();
        assert!((mean_energy_qm(&cold, &c) - 30.0).abs() < 1e-9);
        let hot = ThermoPoint::from_u_temperature(InterpolationParam::QUANTUM, 1e-4, 1.0, &c).unwrap();
        assert!((mean_energy_qm(&hot, &c) - 1.0).abs() < 1e-8);
        assert_eq!(mean_energy_cl(1.0, &c), 1.0);
        assert_eq!(mean_energy_cl(2.0, &c), 2.0);
    }

    #[test]
    fn free_energy_values() {
        assert!(free_energy(&pt(1.0, 1.0), Variant::Full).abs() < 1e-15);
        assert!(free_energy(&pt(1.0, 1.0), Variant::ZpeOnly).abs() < 1e-15);
        assert!((free_energy(&pt(0.0, 2.0), Variant::ZpeOnly) - 1.0).abs() < 1e-15);
        let f = free_energy(&pt(0.0, 1.0), Variant::Full);
        assert!((f - (0.5 + (1.0 - (-1.0f64).exp()).ln())).abs() < 1e-15);
        assert!((f - 0.041_325).abs() < 1e-6);
        assert_eq!(gibbs_energy(&pt(0.0, 1.0), Variant::Full), f);
        assert!((free_energy(&pt(1.0, 3.0), Variant::Full) - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn entropy_values() {
        assert!(entropy(&pt(1.0, E)).abs() < 1e-15);
        assert!((entropy(&pt(1.0, 1.0)) - 1.0).abs() < 1e-15);
        let s = entropy(&pt(0.0, 10.0));
        let direct = -(1.0 - (-10.0f64).exp()).ln() + 10.0 * (-10.0f64).exp() / (1.0 - (-10.0f64).exp());
        assert!((s - direct).abs() < 1e-15);
        assert!((s - 4.994e-4).abs() < 1e-6);
        assert_eq!(entropy_for(&pt(0.0, 3.0), Variant::ZpeOnly), 0.0);
    }

    #[test]
    fn heat_capacity_values() {
        assert_eq!(heat_capacity(&pt(1.0, 0.3)), 1.0);
        assert!((heat_capacity(&pt(0.0, 1e-4)) - 1.0).abs() < 1e-8);
        let e10 = 10.0f64.exp();
        let einstein = 100.0 * e10 / ((e10 - 1.0) * (e10 - 1.0));
        assert!((heat_capacity(&pt(0.0, 10.0)) - einstein).abs() < 1e-15);
        assert!((einstein - 4.54e-3).abs() < 1e-5);
        assert_eq!(heat_capacity(&pt(0.0, 2000.0)), 0.0);
        assert_eq!(heat_capacity_for(&pt(0.25, 2.0), Variant::ZpeOnly), 0.25);
    }

    #[test]
    fn entropy_zero_crossings() {
        let u1 = entropy_zero(InterpolationParam::CLASSICAL, Variant::Full).unwrap();
        assert!((u1 - E).abs() < 1e-6);
        let mut prev = u1;
        for l in [0.75, 0.5, 0.25] {
            let u = entropy_zero(make_lambda(l).unwrap(), Variant::Full).unwrap();
            assert!(u > prev, "lambda {l}: {u} <= {prev}");
            assert!(entropy(&pt(l, u)).abs() < 1e-10);
            prev = u;
        }
        assert!(matches!(
            entropy_zero(InterpolationParam::QUANTUM, Variant::Full),
            Err(Error::NoRootInBracket { .. })
        ));
        let uz = entropy_zero(make_lambda(0.3).unwrap(), Variant::ZpeOnly).unwrap();
        assert!((uz - E).abs() < 1e-6);
    }

    #[test]
    fn quantum_entropy_positive_everywhere() {
        let mut u = 0.01;
        while u < 700.0 {
            assert!(entropy(&pt(0.0, u)) > 0.0, "u = {u}");
            u *= 1.05;
        }
    }

    #[test]
    fn curves() {
        let grid: Vec<f64> = (1..=120).map(|k| 0.05 * k as f64).collect();
        let curve = thermo_curve(make_lambda(0.5).unwrap(), &grid, Variant::Full).unwrap();
        assert_eq!(curve.s_over_k.len(), 120);
        assert_eq!(curve.f_over_kt[19], free_energy(&pt(0.5, grid[19]), Variant::Full));
        let single = thermo_curve(InterpolationParam::QUANTUM, &[1.0], Variant::Full).unwrap();
        assert_eq!(single.cv_over_k.len(), 1);
        assert!(thermo_curve(InterpolationParam::QUANTUM, &[1.0, 1.0], Variant::Full).is_err());
        assert!(thermo_curve(InterpolationParam::QUANTUM, &[0.0, 1.0], Variant::Full).is_err());
        assert!(thermo_curve(InterpolationParam::QUANTUM, &[], Variant::Full).is_err());
    }

    #[test]
    fn curves_converge_at_high_temperature() {
        let s1 = entropy(&pt(1.0, 0.05));
        for l in [0.0, 0.25, 0.5, 0.75] {
            assert!((entropy(&pt(l, 0.05)) - s1).abs() < 0.05);
        }
    }

    #[test]
    fn compensation() {
        let r = compensation_with_zpe(300.0, 2.0, 10.0);
        assert_eq!(r.delta_h, 610.0);
        assert_eq!(r.residual, 0.0);
        let c = PhysicalConstants::natural();
        let r = compensation_enthalpy(300.0, 0.0, 20.0, &c).unwrap();
        assert_eq!(r.delta_h, 10.0);
        let r = compensation_enthalpy(300.0, 1.5, 0.0, &c).unwrap();
        assert_eq!(r.delta_h, 450.0);
        assert!(compensation_enthalpy(0.0, 1.5, 1.0, &c).is_err());
        let m = CompensationRecord::from_measured(612.5, 2.0, 300.0, 10.0);
        assert_eq!(m.residual, 2.5);
    }

    #[test]
    fn molar_zpe_of_an_ir_band() {
        // 3400 cm⁻¹ O-H stretch: ½ h c ν̃ N_A ≈ 20.34 kJ/mol
        let z = molar_zpe_from_wavenumber(3400.0);
        let h = 2.0 * std::f64::consts::PI * HBAR_SI;
        assert!((z - 0.5 * h * 2.997_924_58e10 * 3400.0 * AVOGADRO).abs() < 1e-9 * z);
        assert!((z / 1000.0 - 20.336).abs() < 0.01);
    }

    /// `−∂(F/kT · kT)/∂T / k` at fixed ω by a five-point stencil in T.
    fn entropy_by_fd(lambda: f64, u: f64, variant: Variant) -> f64 {
        let f_of_t = |t: f64| t * free_energy(&pt(lambda, u / t), variant);
        let h = 1e-3;
        -(-f_of_t(1.0 + 2.0 * h) + 8.0 * f_of_t(1.0 + h) - 8.0 * f_of_t(1.0 - h) + f_of_t(1.0 - 2.0 * h)) / (12.0 * h)
    }

    fn cv_by_fd(lambda: f64, u: f64, variant: Variant) -> f64 {
        let s_of_t = |t: f64| entropy_for(&pt(lambda, u / t), variant);
        let h = 1e-3;
        (-s_of_t(1.0 + 2.0 * h) + 8.0 * s_of_t(1.0 + h) - 8.0 * s_of_t(1.0 - h) + s_of_t(1.0 - 2.0 * h)) / (12.0 * h)
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    proptest::proptest! {
        #[test]
        fn entropy_is_minus_free_energy_slope(u in 0.1f64..10.0, l in 0.0f64..=1.0) {
            let s = entropy(&pt(l, u));
            proptest::prop_assume!(s.abs() > 1e-3);
            proptest::prop_assert!(rel(entropy_by_fd(l, u, Variant::Full), s) < 1e-6);
        }

        #[test]
        fn heat_capacity_is_entropy_slope(u in 0.1f64..10.0, l in 0.0f64..=1.0) {
            let cv = heat_capacity(&pt(l, u));
            proptest::prop_assert!(rel(cv_by_fd(l, u, Variant::Full), cv) < 1e-6);
        }

        #[test]
        fn linear_mixing(u in 0.01f64..50.0, l in 0.0f64..=1.0) {
            for v in [Variant::Full, Variant::ZpeOnly] {
                let mix = |f: &dyn Fn(&ThermoPoint) -> f64| (1.0 - l) * f(&pt(0.0, u)) + l * f(&pt(1.0, u));
                let tol = 1e-12;
                proptest::prop_assert!((free_energy(&pt(l, u), v) - mix(&|p| free_energy(p, v))).abs() < tol * (1.0 + u));
                proptest::prop_assert!((entropy_for(&pt(l, u), v) - mix(&|p| entropy_for(p, v))).abs() < tol * (1.0 + u));
                proptest::prop_assert!((heat_capacity_for(&pt(l, u), v) - mix(&|p| heat_capacity_for(p, v))).abs() < tol);
            }
        }

        #[test]
        fn entropy_positive_below_e(u in 1e-3f64..E, l in 0.0f64..=1.0) {
            proptest::prop_assert!(entropy(&pt(l, u)) > 0.0);
        }

        #[test]
        fn nernst_monotone(u in 1.0f64..30.0, du in 1e-3f64..1.0) {
            proptest::prop_assert!(entropy(&pt(0.0, u + du)) < entropy(&pt(0.0, u)));
        }

        #[test]
        fn zpe_variant_entropy_has_no_quantum_part(u in 0.1f64..10.0, l in 0.0f64..=1.0) {
            let fd = entropy_by_fd(l, u, Variant::ZpeOnly);
            let s = entropy_for(&pt(l, u), Variant::ZpeOnly);
            proptest::prop_assert!((fd - s).abs() < 1e-9);
        }
    }

    #[test]
    fn equality_point_at_half() {
        let p = pt(0.5, 2.0);
        let zpe_term = 0.5 * p.u * p.lambda.quantum_weight();
        let thermal = p.lambda.value();
        assert_eq!(zpe_term, thermal);
        assert_ne!(0.5 * 2.1 * 0.5, 0.5);
    }
}
