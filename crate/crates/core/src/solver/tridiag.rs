//! Real symmetric tridiagonal eigenproblems and banded solves.
//!
//! Eigenvalues come from Sturm-sequence bisection, eigenvectors from inverse
//! iteration with a partially pivoted tridiagonal LU. Vectors belonging to
//! eigenvalues closer than `1e-3·‖T‖` are reorthogonalized against each other.

use num_complex::Complex64;

use crate::{Error, Result};

const MAX_BISECTION: usize = 256;
const MAX_INVERSE_ITERATIONS: usize = 8;
/// Relative residual `‖Tx − λx‖∞ / ‖T‖` an eigenpair must reach.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Infinity norm of the symmetric tridiagonal matrix.
pub fn norm_inf(diag: &[f64], off: &[f64]) -> f64 {
    let n = diag.len();
    (0..n)
        .map(|i| {
            let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { off[i].abs() } else { 0.0 };
            diag[i].abs() + left + right
        })
        .fold(0.0, f64::max)
}

/// Number of eigenvalues strictly below `x` (count of negative LDLᵀ pivots).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let guard = f64::MIN_POSITIVE.sqrt() * norm_inf(diag, off).max(1.0);
    let mut count = 0;
    let mut q = diag[0] - x;
    for i in 0..diag.len() {
        if i > 0 {
            let q_prev = if q.abs() < guard { guard.copysign(q) } else { q };
            q = (diag[i] - x) - off[i - 1] * off[i - 1] / q_prev;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let pad = f64::EPSILON * (hi - lo).max(hi.abs()).max(lo.abs()).max(1.0);
    (lo - pad, hi + pad)
}

/// The `k` smallest eigenvalues, ascending.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], k: usize) -> Vec<f64> {
    assert_eq!(off.len() + 1, diag.len(), "off-diagonal must be one shorter than diagonal");
    let (lo0, hi0) = gershgorin(diag, off);
    let mut values: Vec<f64> = Vec::with_capacity(k);
    for j in 0..k.min(diag.len()) {
        // eigenvalue j lies where the count steps from j to j+1
        let (mut lo, mut hi) = (lo0, hi0);
        for _ in 0..MAX_BISECTION {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) || mid <= lo || mid >= hi {
                break;
            }
            if sturm_count(diag, off, mid) <= j {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        values.push(0.5 * (lo + hi));
    }
    values
}

/// LU factors of a general tridiagonal matrix with partial pivoting.
struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(sub: &[f64], diag: &[f64], sup: &[f64], pivot_floor: f64) -> Self {
        let n = diag.len();
        let mut dl = sub.to_vec();
        let mut d = diag.to_vec();
        let mut du = sup.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i].abs() < pivot_floor {
                    d[i] = pivot_floor;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        if d[n - 1].abs() < pivot_floor {
            d[n - 1] = pivot_floor;
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

fn residual_inf(diag: &[f64], off: &[f64], lambda: f64, x: &[f64]) -> f64 {
    let n = diag.len();
    (0..n)
        .map(|i| {
            let mut r = (diag[i] - lambda) * x[i];
            if i > 0 {
                r += off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                r += off[i] * x[i + 1];
            }
            r.abs()
        })
        .fold(0.0, f64::max)
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    norm
}

/// Deterministic start vector in (−1, 1).
fn start_vector(n: usize) -> Vec<f64> {
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    (0..n)
        .map(|_| {
            state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        })
        .collect()
}

/// Flip the sign so the first non-negligible component is positive.
fn fix_sign(x: &mut [f64]) {
    let max = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some(first) = x.iter().find(|v| v.abs() > 1e-8 * max) {
        if *first < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

/// The `k` lowest eigenpairs with unit Euclidean eigenvectors.
pub fn lowest_eigenpairs(diag: &[f64], off: &[f64], k: usize) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = diag.len();
    if k > n {
        return Err(Error::InvalidParameter(format!(
            "requested {k} eigenpairs of a {n}x{n} matrix"
        )));
    }
    let tnorm = norm_inf(diag, off);
    if tnorm == 0.0 {
        return Ok((0..k)
            .map(|j| {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                (0.0, e)
            })
            .collect());
    }
    let values = lowest_eigenvalues(diag, off, k);
    let scale = tnorm.max(f64::MIN_POSITIVE);
    let cluster_gap = 1e-3 * scale;
    let pivot_floor = f64::EPSILON * scale;

    let mut pairs: Vec<(f64, Vec<f64>)> = Vec::with_capacity(k);
    for (j, &lambda) in values.iter().enumerate() {
        let shifted: Vec<f64> = diag.iter().map(|d| d - lambda).collect();
        let lu = TridiagLu::factor(off, &shifted, off, pivot_floor);
        let cluster: Vec<usize> = (0..j)
            .filter(|&i| (values[i] - lambda).abs() < cluster_gap)
            .collect();

        let mut x = start_vector(n);
        normalize(&mut x);
        let mut converged_once = false;
        let mut residual = f64::INFINITY;
        for _ in 0..MAX_INVERSE_ITERATIONS {
            lu.solve(&mut x);
            for &i in &cluster {
                let prev = &pairs[i].1;
                let dot: f64 = x.iter().zip(prev).map(|(a, b)| a * b).sum();
                x.iter_mut().zip(prev).for_each(|(a, b)| *a -= dot * b);
            }
            if normalize(&mut x) == 0.0 {
                x = start_vector(n);
                normalize(&mut x);
                continue;
            }
            residual = residual_inf(diag, off, lambda, &x) / scale;
            if residual <= RESIDUAL_TOLERANCE {
                if converged_once {
                    break;
                }
                converged_once = true;
            }
        }
        if !(residual <= RESIDUAL_TOLERANCE) {
            return Err(Error::ConvergenceFailure(format!(
                "eigenvector {j} (E = {lambda}) stalled at relative residual {residual:e}"
            )));
        }
        fix_sign(&mut x);
        pairs.push((lambda, x));
    }
    Ok(pairs)
}

/// Solve a complex tridiagonal system by the Thomas algorithm; `sub` and
/// `sup` have length `n − 1`. Returns `None` on a vanishing pivot.
pub fn solve_complex_tridiagonal(
    sub: &[Complex64],
    diag: &[Complex64],
    sup: &[Complex64],
    rhs: &[Complex64],
) -> Option<Vec<Complex64>> {
    let n = diag.len();
    let mut c_prime = vec![Complex64::new(0.0, 0.0); n];
    let mut d_prime = vec![Complex64::new(0.0, 0.0); n];
    let mut denom = diag[0];
    if denom.norm() == 0.0 {
        return None;
    }
    if n > 1 {
        c_prime[0] = sup[0] / denom;
    }
    d_prime[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - sub[i - 1] * c_prime[i - 1];
        if denom.norm() == 0.0 {
            return None;
        }
        if i + 1 < n {
            c_prime[i] = sup[i] / denom;
        }
        d_prime[i] = (rhs[i] - sub[i - 1] * d_prime[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        let next = d_prime[i + 1];
        d_prime[i] -= c_prime[i] * next;
    }
    Some(d_prime)
}
