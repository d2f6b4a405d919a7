//! Symmetric quartic double well `V = V₀(x² − a²)²` under the interpolating
//! dynamics.
//!
//! Around each minimum the well is replaced by a harmonic one with spring
//! constant `K = 8V₀a²`. Renormalizing the mass to `m/(1 − λ)` gives
//! `ω(λ) = √(K(1 − λ)/m)` and Gaussian ground states `∝ exp(−α(λ)(x ∓ a)²)`
//! with `α(λ) = m(λ)ω(λ)/2ħ`. The two Gaussians are coupled by the tunneling
//! coefficient `Δ(λ)`; the resulting two-level Hamiltonian has off-diagonal
//! element `(1 − λ)Δ(λ)/2`, which vanishes in the classical limit.
//!
//! `Δ` is the full-line matrix element
//! `½Δ = −(ħ²/2m) ∫ ψ₋ ∂²ψ₊ dx`, evaluated by quadrature with the second
//! derivative of `ψ₊` taken analytically. For well-separated minima it is
//! negative, so the symmetric combination is the lower level.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::solver::{assemble, tridiag};
use crate::{Error, Grid, InterpolationParam, PhysicalConstants, Result, WaveFunction};

/// `λ` beyond which `α(λ)` is treated as divergent.
pub const CLASSICAL_CUTOFF: f64 = 1.0 - 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoubleWellSpec {
    v0: f64,
    a: f64,
}

impl DoubleWellSpec {
    pub fn new(v0: f64, a: f64) -> Result<Self> {
        if !(v0 > 0.0 && v0.is_finite()) || !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "double well needs V0 > 0 and a > 0, got V0 = {v0}, a = {a}"
            )));
        }
        Ok(Self { v0, a })
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `V₀a⁴`, the barrier at `x = 0`.
    pub fn barrier_height(&self) -> f64 {
        self.v0 * self.a.powi(4)
    }

    /// `K = 8V₀a²`, the curvature at either minimum.
    pub fn stiffness(&self) -> f64 {
        8.0 * self.v0 * self.a * self.a
    }

    pub fn potential(&self, x: f64) -> f64 {
        let s = x * x - self.a * self.a;
        self.v0 * s * s
    }
}

/// Harmonic approximation around the minima at a given `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicApprox {
    pub well: DoubleWellSpec,
    pub stiffness: f64,
    pub omega: f64,
    pub alpha: f64,
    pub mass: f64,
    pub lambda: InterpolationParam,
}

impl HarmonicApprox {
    /// Standard deviation of `|ψ±|²`.
    pub fn width(&self) -> f64 {
        0.5 / self.alpha.sqrt()
    }

    /// `½ħω(λ)`.
    pub fn zero_point_energy(&self, consts: &PhysicalConstants) -> f64 {
        0.5 * consts.hbar * self.omega
    }

    fn gaussian(&self, side: WellSide, x: f64) -> f64 {
        let d = x - side.sign() * self.well.a;
        (2.0 * self.alpha / std::f64::consts::PI).powf(0.25) * (-self.alpha * d * d).exp()
    }
}

pub fn harmonic_params(
    well: &DoubleWellSpec,
    lambda: InterpolationParam,
    consts: &PhysicalConstants,
) -> Result<HarmonicApprox> {
    if lambda.value() > CLASSICAL_CUTOFF {
        return Err(Error::ClassicalSingularity {
            lambda: lambda.value(),
        });
    }
    let stiffness = well.stiffness();
    let mass = consts.mass / lambda.quantum_weight();
    let omega = (stiffness / mass).sqrt();
    Ok(HarmonicApprox {
        well: *well,
        stiffness,
        omega,
        alpha: mass * omega / (2.0 * consts.hbar),
        mass,
        lambda,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WellSide {
    /// Centered on `x = +a`.
    Plus,
    /// Centered on `x = −a`.
    Minus,
}

impl WellSide {
    fn sign(self) -> f64 {
        match self {
            Self::Plus => 1.0,
            Self::Minus => -1.0,
        }
    }

    fn other(self) -> Self {
        match self {
            Self::Plus => Self::Minus,
            Self::Minus => Self::Plus,
        }
    }
}

/// Gaussian widths (density standard deviations) a grid must cover on each
/// side of a well center.
pub const COVERAGE_WIDTHS: f64 = 6.0;

fn check_covers(approx: &HarmonicApprox, grid: &Grid, centers: &[f64]) -> Result<()> {
    let reach = COVERAGE_WIDTHS * approx.width();
    for c in centers {
        if grid.x_min() > c - reach || grid.x_max() < c + reach {
            return Err(Error::GridMismatch(format!(
                "grid [{}, {}] does not cover {c} ± {reach}",
                grid.x_min(),
                grid.x_max()
            )));
        }
    }
    Ok(())
}

fn check_resolves(approx: &HarmonicApprox, grid: &Grid) -> Result<()> {
    if grid.dx() > 0.5 * approx.width() {
        return Err(Error::GridMismatch(format!(
            "grid spacing {} does not resolve Gaussians of width {}",
            grid.dx(),
            approx.width()
        )));
    }
    Ok(())
}

/// `ψ±(x) = (2α/π)^{1/4} exp(−α(x ∓ a)²)` sampled and renormalized on `grid`.
pub fn gaussian_state(approx: &HarmonicApprox, side: WellSide, grid: &Grid) -> Result<WaveFunction> {
    check_covers(approx, grid, &[side.sign() * approx.well.a])?;
    WaveFunction::from_fn(*grid, |x| Complex64::new(approx.gaussian(side, x), 0.0)).normalized()
}

/// `P = ∫ψ₊ψ₋ dx = exp(−2αa²)`.
pub fn overlap(approx: &HarmonicApprox) -> f64 {
    (-2.0 * approx.alpha * approx.well.a * approx.well.a).exp()
}

/// Grid quadrature of `∫ψ₊ψ₋ dx` with the analytic Gaussians.
pub fn overlap_quadrature(approx: &HarmonicApprox, grid: &Grid) -> Result<f64> {
    check_covers(approx, grid, &[approx.well.a, -approx.well.a])?;
    check_resolves(approx, grid)?;
    let f: Vec<f64> = grid
        .points()
        .map(|x| approx.gaussian(WellSide::Plus, x) * approx.gaussian(WellSide::Minus, x))
        .collect();
    Ok(grid.integrate(&f))
}

/// `−(ħ²/2m) ∫ ψ_other ∂²ψ_side dx` over the whole grid; `ψ_side''` is
/// analytic: `(4α²d² − 2α) ψ_side` with `d = x ∓ a`.
pub fn kinetic_cross_element(
    approx: &HarmonicApprox,
    differentiated: WellSide,
    grid: &Grid,
    consts: &PhysicalConstants,
) -> Result<f64> {
    check_covers(approx, grid, &[approx.well.a, -approx.well.a])?;
    check_resolves(approx, grid)?;
    let alpha = approx.alpha;
    let a = approx.well.a;
    let norm2 = (2.0 * alpha / std::f64::consts::PI).sqrt();
    let s = differentiated.sign();
    let o = differentiated.other().sign();
    let integrand: Vec<f64> = grid
        .points()
        .map(|x| {
            let d = x - s * a;
            let e = x - o * a;
            norm2 * (4.0 * alpha * alpha * d * d - 2.0 * alpha) * (-alpha * (d * d + e * e)).exp()
        })
        .collect();
    Ok(-consts.kinetic_scale() * grid.integrate(&integrand))
}

/// `Δ(λ) = 2 · [−(ħ²/2m) ∫ ψ₋ ∂²ψ₊ dx]`.
pub fn tunneling_coefficient(approx: &HarmonicApprox, grid: &Grid, consts: &PhysicalConstants) -> Result<f64> {
    Ok(2.0 * kinetic_cross_element(approx, WellSide::Plus, grid, consts)?)
}

/// `(1 − λ)|Δ(λ)|`, the doublet splitting of the two-level model; zero in
/// the classical branch `λ > 1 − 10⁻⁶`.
pub fn two_level_gap(
    well: &DoubleWellSpec,
    lambda: InterpolationParam,
    grid: &Grid,
    consts: &PhysicalConstants,
) -> Result<f64> {
    match harmonic_params(well, lambda, consts) {
        Ok(approx) => Ok(lambda.quantum_weight() * tunneling_coefficient(&approx, grid, consts)?.abs()),
        Err(Error::ClassicalSingularity { .. }) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// Two-level Hamiltonian in the `{|+a⟩, |−a⟩}` basis:
/// `[[ΔH + ε, (1−λ)Δ/2], [(1−λ)Δ/2, ΔH + ε]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelSystem {
    pub eps: f64,
    pub delta: f64,
    pub enthalpy_offset: f64,
    pub lambda: InterpolationParam,
}

pub type Matrix2 = [[f64; 2]; 2];

impl TwoLevelSystem {
    pub fn diagonal(&self) -> f64 {
        self.enthalpy_offset + self.eps
    }

    pub fn coupling(&self) -> f64 {
        0.5 * self.lambda.quantum_weight() * self.delta
    }

    pub fn matrix(&self) -> Matrix2 {
        let (d, c) = (self.diagonal(), self.coupling());
        [[d, c], [c, d]]
    }

    /// `e^{−iHt/ħ} state`, via the eigenbasis `(1, ±1)/√2`.
    pub fn propagate(&self, state: [Complex64; 2], t: f64, consts: &PhysicalConstants) -> [Complex64; 2] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let sym = s * (state[0] + state[1]);
        let anti = s * (state[0] - state[1]);
        let phase = |e: f64| Complex64::from_polar(1.0, -e * t / consts.hbar);
        let sym = sym * phase(self.diagonal() + self.coupling());
        let anti = anti * phase(self.diagonal() - self.coupling());
        [s * (sym + anti), s * (sym - anti)]
    }
}

pub fn two_level_hamiltonian(eps: f64, delta: f64, enthalpy_offset: f64, lambda: InterpolationParam) -> TwoLevelSystem {
    TwoLevelSystem {
        eps,
        delta,
        enthalpy_offset,
        lambda,
    }
}

/// Two-level model built from the harmonic approximation: `ε = ½ħω(λ)`.
pub fn two_level_from_approx(
    approx: &HarmonicApprox,
    delta: f64,
    enthalpy_offset: f64,
    consts: &PhysicalConstants,
) -> TwoLevelSystem {
    two_level_hamiltonian(approx.zero_point_energy(consts), delta, enthalpy_offset, approx.lambda)
}

/// Eigen-decomposition of a two-level system.
///
/// `e_plus ≤ e_minus`, `e_minus − e_plus = (1 − λ)|Δ|`. When `Δ < 0` (the
/// physical sign for separated wells) the lower state is the symmetric one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Splitting {
    pub e_plus: f64,
    pub e_minus: f64,
    pub lower_state: [f64; 2],
    pub upper_state: [f64; 2],
    pub symmetric_energy: f64,
    pub antisymmetric_energy: f64,
}

impl Splitting {
    pub fn gap(&self) -> f64 {
        self.e_minus - self.e_plus
    }
}

pub fn splitting(sys: &TwoLevelSystem) -> Splitting {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let sym = [s, s];
    let anti = [s, -s];
    let e_sym = sys.diagonal() + sys.coupling();
    let e_anti = sys.diagonal() - sys.coupling();
    let (lower, upper, e_lo, e_hi) = if e_sym <= e_anti {
        (sym, anti, e_sym, e_anti)
    } else {
        (anti, sym, e_anti, e_sym)
    };
    Splitting {
        e_plus: e_lo,
        e_minus: e_hi,
        lower_state: lower,
        upper_state: upper,
        symmetric_energy: e_sym,
        antisymmetric_energy: e_anti,
    }
}

/// `P(t) = cos((1 − λ)Δt/ħ)`: left-well minus right-well probability for a
/// particle starting in the left well.
pub fn well_probability(t: f64, sys: &TwoLevelSystem, consts: &PhysicalConstants) -> f64 {
    (sys.lambda.quantum_weight() * sys.delta * t / consts.hbar).cos()
}

/// `2πħ / ((1 − λ)|Δ|)`; infinite when the tunneling is quenched.
pub fn oscillation_period(sys: &TwoLevelSystem, consts: &PhysicalConstants) -> f64 {
    let rate = (sys.lambda.quantum_weight() * sys.delta).abs();
    if rate == 0.0 {
        f64::INFINITY
    } else {
        2.0 * std::f64::consts::PI * consts.hbar / rate
    }
}

/// `ρ = (p/2) I + ((1 − p)/2)(|+a⟩ + |−a⟩)(⟨+a| + ⟨−a|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelDensityMatrix {
    pub p: f64,
    pub matrix: Matrix2,
}

impl TwoLevelDensityMatrix {
    pub fn trace(&self) -> f64 {
        self.matrix[0][0] + self.matrix[1][1]
    }

    /// Eigenvalues `(1, p)/…`: `1 − p/2·…`; computed directly from the 2×2 form.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let [[a, b], [_, d]] = self.matrix;
        let mean = 0.5 * (a + d);
        let r = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        [mean - r, mean + r]
    }
}

pub fn density_matrix(p: f64) -> Result<TwoLevelDensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            what: "p",
            value: p,
            range: "[0, 1]",
        });
    }
    let diag = 0.5 * p + 0.5 * (1.0 - p);
    let off = 0.5 * (1.0 - p);
    Ok(TwoLevelDensityMatrix {
        p,
        matrix: [[diag, off], [off, diag]],
    })
}

/// Map from `λ` to the classical mixing weight `p`; must satisfy
/// `p(0) = 0` and `p(1) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MixingMap {
    /// `p = λ`.
    #[default]
    Linear,
    /// `p = λ^exponent`, `exponent > 0`.
    Power { exponent: f64 },
}

impl MixingMap {
    pub fn weight(&self, lambda: InterpolationParam) -> Result<f64> {
        match *self {
            Self::Linear => Ok(lambda.value()),
            Self::Power { exponent } if exponent > 0.0 => Ok(lambda.value().powf(exponent)),
            Self::Power { exponent } => Err(Error::InvalidParameter(format!(
                "mixing exponent must be positive, got {exponent}"
            ))),
        }
    }
}

pub fn density_matrix_for(lambda: InterpolationParam, map: &MixingMap) -> Result<TwoLevelDensityMatrix> {
    density_matrix(map.weight(lambda)?)
}

/// `max |[A, B]_{ij}|`.
pub fn commutator_max(a: &Matrix2, b: &Matrix2) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let ab: f64 = (0..2).map(|k| a[i][k] * b[k][j]).sum();
            let ba: f64 = (0..2).map(|k| b[i][k] * a[k][j]).sum();
            worst = worst.max((ab - ba).abs());
        }
    }
    worst
}

/// Lowest doublet of the full finite-difference quartic Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSplitting {
    pub e0: f64,
    pub e1: f64,
    /// `E1 − E0`, from the discrete Wronskian of the two states (see
    /// [`grid_splitting_oracle`]); matches the plain difference where that is
    /// resolvable and stays accurate where it is not.
    pub gap: f64,
    pub ground: WaveFunction,
    pub excited: WaveFunction,
}

/// Two lowest eigenpairs of `(1 − λ)Ĥ₀ + V₀(x² − a²)²` on a grid symmetric
/// about 0 with a node at the origin.
///
/// The problem is split by parity: even states on the half grid with the
/// mirror condition `ψ(−dx) = ψ(dx)`, odd states with `ψ(0) = 0`. The ground
/// state is the lowest even state and the first excited the lowest odd one.
///
/// In deep wells `E1 − E0` falls far below the rounding error of either
/// eigenvalue, so the gap is taken from the exact discrete identity
/// `E1 − E0 = h ψ₀(0) ψ₁(dx) / Σ_{x>0} ψ₀ψ₁` with `h = (1 − λ)ħ²/2m dx²`,
/// which only involves tail amplitudes that inverse iteration delivers with
/// small relative error.
pub fn grid_splitting_oracle(
    well: &DoubleWellSpec,
    lambda: InterpolationParam,
    grid: &Grid,
    consts: &PhysicalConstants,
) -> Result<GridSplitting> {
    let n = grid.n_points();
    let scale = grid.x_max().abs().max(grid.x_min().abs());
    if n.is_multiple_of(2) || (grid.x_min() + grid.x_max()).abs() > 1e-12 * scale {
        return Err(Error::GridMismatch(
            "parity-split eigensolve needs a grid symmetric about 0 with an odd point count".into(),
        ));
    }
    let c = n / 2;
    let v: Vec<f64> = grid.points().map(|x| well.potential(x)).collect();
    // interior nodes 1..n-1 -> H indices 0..n-3; node c is H index c-1
    let h = assemble(grid, &v, lambda, consts);
    let hop = -h.off_diagonal().first().copied().unwrap_or(0.0);

    // even sector: nodes c..=n-2, symmetrized mirror coupling at the center
    let even_diag = h.diagonal()[c - 1..].to_vec();
    let mut even_off = h.off_diagonal()[c - 1..].to_vec();
    even_off[0] *= std::f64::consts::SQRT_2;
    // odd sector: nodes c+1..=n-2
    let odd_diag = h.diagonal()[c..].to_vec();
    let odd_off = h.off_diagonal()[c..].to_vec();

    let (e0, mut even) = tridiag::lowest_eigenpairs(&even_diag, &even_off, 1)?.remove(0);
    let (e1, odd) = tridiag::lowest_eigenpairs(&odd_diag, &odd_off, 1)?.remove(0);
    even[0] *= std::f64::consts::SQRT_2;

    // even[k] is node c+k, odd[k] is node c+1+k
    let overlap: f64 = odd.iter().zip(&even[1..]).map(|(a, b)| a * b).sum();
    let gap = if hop == 0.0 {
        0.0
    } else if overlap != 0.0 {
        hop * even[0] * odd[0] / overlap
    } else {
        e1 - e0
    };

    let mut ground = vec![0.0; n];
    let mut excited = vec![0.0; n];
    for (k, &val) in even.iter().enumerate() {
        ground[c + k] = val;
        ground[c - k] = val;
    }
    for (k, &val) in odd.iter().enumerate() {
        excited[c + 1 + k] = val;
        excited[c - 1 - k] = -val;
    }
    Ok(GridSplitting {
        e0,
        e1,
        gap,
        ground: WaveFunction::from_real(*grid, &ground)?.normalized()?,
        excited: WaveFunction::from_real(*grid, &excited)?.normalized()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::make_lambda;
    use crate::solver::{build_hamiltonian, solve_eigenstates};
    use crate::PotentialSpec;

    fn c() -> PhysicalConstants {
        PhysicalConstants::natural()
    }

    fn unit_well() -> DoubleWellSpec {
        DoubleWellSpec::new(1.0, 1.0).unwrap()
    }

    fn lam(x: f64) -> InterpolationParam {
        make_lambda(x).unwrap()
    }

    #[test]
    fn harmonic_parameters() {
        let h = harmonic_params(&unit_well(), InterpolationParam::QUANTUM, &c()).unwrap();
        assert!((h.omega - 8f64.sqrt()).abs() < 1e-14);
        assert!((h.omega - 2.828_43).abs() < 1e-5);
        assert!((h.alpha - 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(h.stiffness, 8.0);
        let h = harmonic_params(&unit_well(), lam(0.5), &c()).unwrap();
        assert!((h.alpha - 2.0).abs() < 1e-14);
        assert!((h.mass - 2.0).abs() < 1e-14);
        // alpha agrees with the closed form √(2V₀a²m/(1−λ))/ħ
        let h = harmonic_params(&unit_well(), lam(0.3), &c()).unwrap();
        assert!((h.alpha - (2.0f64 / 0.7).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn omega_vanishes_toward_classical_limit() {
        let mut prev = f64::INFINITY;
        for l in [0.0, 0.9, 0.99, 0.9999, 0.999_999] {
            let h = harmonic_params(&unit_well(), lam(l), &c()).unwrap();
            assert!(h.omega < prev);
            prev = h.omega;
        }
        assert!(prev < 3e-3);
        assert!(matches!(
            harmonic_params(&unit_well(), lam(1.0), &c()),
            Err(Error::ClassicalSingularity { .. })
        ));
    }

    #[test]
    fn gaussian_states() {
        let well = DoubleWellSpec::new(0.5, 1.0).unwrap(); // alpha = 1 at λ = 0
        let h = harmonic_params(&well, InterpolationParam::QUANTUM, &c()).unwrap();
        assert!((h.alpha - 1.0).abs() < 1e-14);
        let g = Grid::symmetric(8.0, 1601).unwrap();
        let plus = gaussian_state(&h, WellSide::Plus, &g).unwrap();
        let minus = gaussian_state(&h, WellSide::Minus, &g).unwrap();
        assert!((plus.norm() - 1.0).abs() < 1e-8);
        assert!((plus.amplitudes()[900].re - (2.0 / std::f64::consts::PI).powf(0.25)).abs() < 1e-8);
        assert!((plus.amplitudes()[900].re - 0.893_244).abs() < 1e-5);
        for i in 0..g.n_points() {
            assert!((plus.amplitudes()[i] - minus.amplitudes()[g.n_points() - 1 - i]).norm() < 1e-14);
        }
        let narrow = Grid::new(0.0, 2.0, 101).unwrap();
        assert!(matches!(gaussian_state(&h, WellSide::Plus, &narrow), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn overlap_values() {
        let mut h = harmonic_params(&unit_well(), lam(0.5), &c()).unwrap();
        assert!((overlap(&h) - (-4.0f64).exp()).abs() < 1e-16);
        assert!((overlap(&h) - 0.018_316).abs() < 1e-6);
        h = harmonic_params(&unit_well(), InterpolationParam::QUANTUM, &c()).unwrap();
        assert!((overlap(&h) - 0.059_106).abs() < 1e-6);
        let far = harmonic_params(&DoubleWellSpec::new(1.0, 30.0).unwrap(), InterpolationParam::QUANTUM, &c()).unwrap();
        assert_eq!(overlap(&far), 0.0);
    }

    #[test]
    fn overlap_quadrature_agrees() {
        let g = Grid::symmetric(8.0, 3201).unwrap();
        for l in [0.0, 0.25, 0.5, 0.75] {
            let h = harmonic_params(&unit_well(), lam(l), &c()).unwrap();
            let q = overlap_quadrature(&h, &g).unwrap();
            assert!(((q - overlap(&h)) / overlap(&h)).abs() < 1e-6, "lambda {l}");
        }
    }

    /// Analytic value of the Gaussian integral: `Δ = (ħ²/m) α(1 − 4αa²) e^{−2αa²}`.
    fn closed_form_delta(h: &HarmonicApprox) -> f64 {
        let (al, a) = (h.alpha, h.well.a());
        al * (1.0 - 4.0 * al * a * a) * (-2.0 * al * a * a).exp()
    }

    #[test]
    fn tunneling_matches_dense_quadrature_and_closed_form() {
        let well = DoubleWellSpec::new(0.5, 1.0).unwrap(); // alpha = 1, a = 1
        let h = harmonic_params(&well, InterpolationParam::QUANTUM, &c()).unwrap();
        let coarse = Grid::symmetric(8.0, 801).unwrap();
        let dense = Grid::symmetric(8.0, 8001).unwrap();
        let d = tunneling_coefficient(&h, &coarse, &c()).unwrap();
        let oracle = tunneling_coefficient(&h, &dense, &c()).unwrap();
        assert!(((d - oracle) / oracle).abs() < 1e-6);
        assert!(((d - closed_form_delta(&h)) / d).abs() < 1e-10);
        assert!(d < 0.0);
    }

    #[test]
    fn tunneling_mirror_symmetry() {
        let g = Grid::symmetric(9.0, 1801).unwrap();
        for l in [0.0, 0.4, 0.8] {
            let h = harmonic_params(&unit_well(), lam(l), &c()).unwrap();
            let p = kinetic_cross_element(&h, WellSide::Plus, &g, &c()).unwrap();
            let m = kinetic_cross_element(&h, WellSide::Minus, &g, &c()).unwrap();
            assert!((p - m).abs() < 1e-10 * p.abs().max(1e-300));
        }
    }

    #[test]
    fn tunneling_suppressed_with_separation() {
        let g = Grid::symmetric(12.0, 4001).unwrap();
        let mut prev = f64::INFINITY;
        for a in [1.0, 1.5, 2.0, 3.0] {
            let well = DoubleWellSpec::new(0.5 / (a * a), a).unwrap(); // fixed alpha = 1
            let h = harmonic_params(&well, InterpolationParam::QUANTUM, &c()).unwrap();
            let d = tunneling_coefficient(&h, &g, &c()).unwrap().abs();
            assert!(d < prev);
            prev = d;
        }
        assert!(prev < 1e-5);
    }

    #[test]
    fn two_level_matrix() {
        let sys = two_level_hamiltonian(1.0, 0.2, 0.0, InterpolationParam::QUANTUM);
        assert_eq!(sys.matrix(), [[1.0, 0.1], [0.1, 1.0]]);
        let quenched = two_level_hamiltonian(1.0, 0.7, 0.0, InterpolationParam::CLASSICAL);
        assert_eq!(quenched.matrix()[0][1], 0.0);
        let with_offset = two_level_hamiltonian(1.0, 0.2, 3.0, lam(0.5));
        let plain = two_level_hamiltonian(1.0, 0.2, 0.0, lam(0.5));
        assert_eq!(with_offset.matrix()[0][0] - 3.0, plain.matrix()[0][0]);
        assert_eq!(with_offset.matrix()[0][1], plain.matrix()[0][1]);
    }

    /// Brute-force 2×2 eigenvalues via the characteristic polynomial.
    fn eig2(m: Matrix2) -> (f64, f64) {
        let tr = m[0][0] + m[1][1];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let disc = (tr * tr / 4.0 - det).sqrt();
        (tr / 2.0 - disc, tr / 2.0 + disc)
    }

    #[test]
    fn splitting_values() {
        let sys = two_level_hamiltonian(1.0, 0.2, 0.0, InterpolationParam::QUANTUM);
        let s = splitting(&sys);
        let (lo, hi) = eig2(sys.matrix());
        assert!((s.e_plus - 0.9).abs() < 1e-15 && (s.e_minus - 1.1).abs() < 1e-15);
        assert!((s.e_plus - lo).abs() < 1e-15 && (s.e_minus - hi).abs() < 1e-15);
        let classical = splitting(&two_level_hamiltonian(1.0, 0.2, 0.0, InterpolationParam::CLASSICAL));
        assert_eq!(classical.e_plus, 1.0);
        assert_eq!(classical.e_minus, 1.0);
        // physical sign: the symmetric state is lower
        let phys = splitting(&two_level_hamiltonian(1.0, -0.2, 0.0, InterpolationParam::QUANTUM));
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(phys.lower_state, [r, r]);
        assert_eq!(phys.e_plus, phys.symmetric_energy);
    }

    #[test]
    fn gap_is_linear_in_quantum_weight() {
        let lams = [0.0, 0.25, 0.5, 0.75];
        let gaps: Vec<f64> = lams
            .iter()
            .map(|&l| splitting(&two_level_hamiltonian(1.0, 0.2, 0.0, lam(l))).gap())
            .collect();
        // least-squares slope of gap against (1 − λ)
        let xs: Vec<f64> = lams.iter().map(|l| 1.0 - l).collect();
        let mx = xs.iter().sum::<f64>() / 4.0;
        let my = gaps.iter().sum::<f64>() / 4.0;
        let slope = xs.iter().zip(&gaps).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
            / xs.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>();
        assert!((slope - 0.2).abs() < 1e-14);
        assert!((my - slope * mx).abs() < 1e-14);
    }

    #[test]
    fn eigenvectors_are_always_symmetric_pair() {
        for (eps, delta, l) in [(3.0, 0.5, 0.1), (-2.0, 4.0, 0.9), (0.0, -1.0, 0.0)] {
            let sys = two_level_hamiltonian(eps, delta, 0.3, lam(l));
            let s = splitting(&sys);
            for (v, e) in [(s.lower_state, s.e_plus), (s.upper_state, s.e_minus)] {
                let m = sys.matrix();
                for i in 0..2 {
                    let hv = m[i][0] * v[0] + m[i][1] * v[1];
                    assert!((hv - e * v[i]).abs() < 1e-14);
                }
                assert!((v[0].abs() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
                assert!((v[1].abs() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn well_probability_law() {
        let sys = two_level_hamiltonian(1.0, 0.3, 0.0, lam(0.2));
        assert_eq!(well_probability(0.0, &sys, &c()), 1.0);
        let half = std::f64::consts::PI / (0.8 * 0.3);
        assert!((well_probability(half, &sys, &c()) + 1.0).abs() < 1e-14);
        let frozen = two_level_hamiltonian(1.0, 0.3, 0.0, InterpolationParam::CLASSICAL);
        assert_eq!(well_probability(123.4, &frozen, &c()), 1.0);
        assert_eq!(oscillation_period(&frozen, &c()), f64::INFINITY);
        let period = oscillation_period(&sys, &c());
        for t in [0.1, 1.7, 40.0] {
            let p = well_probability(t, &sys, &c());
            assert!((-1.0..=1.0).contains(&p));
            assert!((p - well_probability(t + period, &sys, &c())).abs() < 1e-12);
        }
    }

    #[test]
    fn propagation_reproduces_cosine() {
        let sys = two_level_hamiltonian(1.3, -0.05, 0.2, lam(0.4));
        let left = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        for k in 0..200 {
            let t = k as f64 * 1.7;
            let st = sys.propagate(left, t, &c());
            let p = st[0].norm_sqr() - st[1].norm_sqr();
            assert!((p - well_probability(t, &sys, &c())).abs() < 1e-12);
        }
    }

    #[test]
    fn density_matrices() {
        let rho = density_matrix(1.0).unwrap();
        assert_eq!(rho.matrix, [[0.5, 0.0], [0.0, 0.5]]);
        let rho = density_matrix(0.0).unwrap();
        assert_eq!(rho.matrix, [[0.5, 0.5], [0.5, 0.5]]);
        let [lo, hi] = rho.eigenvalues();
        assert!(lo.abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
        let rho = density_matrix(0.5).unwrap();
        assert_eq!(rho.matrix, [[0.5, 0.25], [0.25, 0.5]]);
        assert!(matches!(density_matrix(1.2), Err(Error::OutOfRange { .. })));
        assert_eq!(MixingMap::default().weight(InterpolationParam::CLASSICAL).unwrap(), 1.0);
        assert_eq!(MixingMap::Power { exponent: 2.0 }.weight(InterpolationParam::QUANTUM).unwrap(), 0.0);
        assert!(MixingMap::Power { exponent: -1.0 }.weight(lam(0.5)).is_err());
    }

    #[test]
    fn density_matrix_commutes_with_hamiltonian() {
        for i in 0..=10 {
            let l = lam(i as f64 / 10.0);
            let sys = two_level_hamiltonian(0.7, -0.31, 0.05, l);
            for p in [0.0, 0.5, 1.0] {
                let rho = density_matrix(p).unwrap();
                assert!(commutator_max(&sys.matrix(), &rho.matrix) < 1e-12);
                assert!((rho.trace() - 1.0).abs() < 1e-15);
                assert!(rho.eigenvalues()[0] >= -1e-15);
            }
        }
    }

    #[test]
    fn parity_split_matches_full_eigensolve() {
        let well = DoubleWellSpec::new(1.0, 1.6).unwrap();
        let g = Grid::symmetric(4.5, 1801).unwrap();
        for l in [0.0, 0.5] {
            let split = grid_splitting_oracle(&well, lam(l), &g, &c()).unwrap();
            let h = build_hamiltonian(&g, &PotentialSpec::double_well(well), lam(l), &c()).unwrap();
            let full = solve_eigenstates(&h, 2).unwrap();
            assert!((split.e0 - full[0].energy).abs() < 1e-9);
            assert!((split.e1 - full[1].energy).abs() < 1e-9);
            let direct = full[1].energy - full[0].energy;
            assert!(((split.gap - direct) / direct).abs() < 1e-6, "{} vs {direct}", split.gap);
        }
    }

    #[test]
    fn doublet_parity() {
        let well = DoubleWellSpec::new(1.0, 1.5).unwrap();
        let g = Grid::symmetric(4.0, 801).unwrap();
        let s = grid_splitting_oracle(&well, InterpolationParam::QUANTUM, &g, &c()).unwrap();
        let n = g.n_points();
        for i in 0..n {
            let (gi, gm) = (s.ground.amplitudes()[i].re, s.ground.amplitudes()[n - 1 - i].re);
            let (ei, em) = (s.excited.amplitudes()[i].re, s.excited.amplitudes()[n - 1 - i].re);
            assert_eq!(gi, gm);
            assert_eq!(ei, -em);
        }
        assert!(s.ground.amplitudes().iter().all(|z| z.re >= 0.0));
        assert!(s.e1 > s.e0 && s.gap > 0.0);
        assert!(matches!(
            grid_splitting_oracle(&well, InterpolationParam::QUANTUM, &Grid::symmetric(4.0, 800).unwrap(), &c()),
            Err(Error::GridMismatch(_))
        ));
    }

    #[test]
    fn quenching_lowers_grid_gap() {
        let well = DoubleWellSpec::new(1.0, 1.5).unwrap();
        let g = Grid::symmetric(4.0, 801).unwrap();
        let g0 = grid_splitting_oracle(&well, InterpolationParam::QUANTUM, &g, &c()).unwrap().gap;
        let g9 = grid_splitting_oracle(&well, lam(0.9), &g, &c()).unwrap().gap;
        assert!(g9 < g0);
        let g1 = grid_splitting_oracle(&well, InterpolationParam::CLASSICAL, &g, &c()).unwrap().gap;
        assert_eq!(g1, 0.0);
    }
}
