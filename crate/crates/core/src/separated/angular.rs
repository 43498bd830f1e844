//! Angular (eta) equation in the even-l Legendre basis.
//!
//! With p^2 = -E R^2 / 2 the angular equation reads
//! d/deta[(1 - eta^2) dY/deta] + p^2 eta^2 Y = A Y,
//! which in orthonormal even Legendre functions is the symmetric tridiagonal
//! matrix -diag(l(l+1)) + p^2 T, T being the matrix of eta^2.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::legendre::{legendre_all, norm_factor};

/// Upper bound on the automatically grown truncation.
pub const L_MAX_CAP: usize = 600;

/// Ground angular eigenpair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularSolution {
    pub p_sq: f64,
    pub a: f64,
    /// Coefficients of orthonormal P_l for l = 0, 2, ..., l_max.
    pub coeffs: Vec<f64>,
    pub l_max: usize,
    /// Infinity-norm residual of (M - A) c scaled by max(1, |M|).
    pub residual: f64,
}

/// <l|eta^2|l> in the orthonormal basis.
pub fn eta2_diagonal(l: usize) -> f64 {
    let l = l as f64;
    (2.0 * l * l + 2.0 * l - 1.0) / ((2.0 * l - 1.0) * (2.0 * l + 3.0))
}

/// <l+2|eta^2|l> in the orthonormal basis.
pub fn eta2_offdiagonal(l: usize) -> f64 {
    let l = l as f64;
    (l + 1.0) * (l + 2.0) / ((2.0 * l + 3.0) * ((2.0 * l + 1.0) * (2.0 * l + 5.0)).sqrt())
}

/// Diagonal and off-diagonal of the even-l angular matrix.
pub fn angular_matrix(p_sq: f64, l_max: usize) -> (Vec<f64>, Vec<f64>) {
    let n = l_max / 2 + 1;
    let diag = (0..n)
        .map(|k| {
            let l = 2 * k;
            -((l * (l + 1)) as f64) + p_sq * eta2_diagonal(l)
        })
        .collect();
    let off = (0..n - 1).map(|k| p_sq * eta2_offdiagonal(2 * k)).collect();
    (diag, off)
}

/// Number of eigenvalues of the tridiagonal matrix strictly less than `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0f64;
    for i in 0..diag.len() {
        let b2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { b2 / q };
        if q == 0.0 {
            q = f64::EPSILON * (diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Solve (T - shift) x = b by the Thomas algorithm. Only called with a shift
/// above the top of the spectrum, where T - shift is negative definite and
/// elimination without pivoting is stable.
fn tridiag_solve(diag: &[f64], off: &[f64], shift: f64, b: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut d: Vec<f64> = diag.iter().map(|v| v - shift).collect();
    let mut rhs = b.to_vec();
    for i in 1..n {
        let m = off[i - 1] / d[i - 1];
        d[i] -= m * off[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    let mut x = vec![0.0; n];
    x[n - 1] = rhs[n - 1] / d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = (rhs[i] - off[i] * x[i + 1]) / d[i];
    }
    x
}

/// Largest eigenvalue and its eigenvector at a fixed truncation.
pub fn angular_eigenvalue(p_sq: f64, l_max: usize) -> Result<AngularSolution> {
    if !(p_sq >= 0.0 && p_sq.is_finite()) {
        return Err(Error::Domain(format!("p_sq must be finite and >= 0, got {p_sq}")));
    }
    if l_max < 8 || !l_max.is_multiple_of(2) {
        return Err(Error::Domain(format!("l_max must be even and >= 8, got {l_max}")));
    }
    let (diag, off) = angular_matrix(p_sq, l_max);
    let n = diag.len();

    // Gershgorin interval
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    // bisect for the largest eigenvalue: count(x) < n means the top one is >= x
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(&diag, &off, mid) < n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a = 0.5 * (lo + hi);

    let scale = diag.iter().chain(off.iter()).fold(1.0f64, |m, v| m.max(v.abs()));
    let mut v = vec![1.0; n];
    for _ in 0..4 {
        v = tridiag_solve(&diag, &off, a + scale * 1e-13, &v);
        let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= nrm);
    }
    if v[0] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    // Rayleigh quotient refines A to working precision
    let mv = tridiag_mul(&diag, &off, &v);
    let a = mv.iter().zip(&v).map(|(x, y)| x * y).sum::<f64>();
    let residual = mv
        .iter()
        .zip(&v)
        .map(|(m, c)| (m - a * c).abs())
        .fold(0.0f64, f64::max)
        / scale;
    Ok(AngularSolution { p_sq, a, coeffs: v, l_max, residual })
}

fn tridiag_mul(diag: &[f64], off: &[f64], v: &[f64]) -> Vec<f64> {
    let n = diag.len();
    (0..n)
        .map(|i| {
            let mut s = diag[i] * v[i];
            if i > 0 {
                s += off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                s += off[i] * v[i + 1];
            }
            s
        })
        .collect()
}

/// Starting truncation for a given p^2: the coefficients fall off once
/// l(l+1) dominates p^2.
pub fn initial_l_max(p_sq: f64) -> usize {
    let p = p_sq.sqrt();
    let l = (2.0 * p + 24.0).ceil() as usize;
    (l + l % 2).max(16)
}

/// Grow l_max in steps of 8 until A and the coefficients stop changing.
pub fn angular_converged(p_sq: f64) -> Result<AngularSolution> {
    let mut l_max = initial_l_max(p_sq);
    let mut prev = angular_eigenvalue(p_sq, l_max)?;
    loop {
        l_max += 8;
        if l_max > L_MAX_CAP {
            return Err(Error::Truncation(format!(
                "angular eigenvalue not stable at l_max = {L_MAX_CAP} (p^2 = {p_sq})"
            )));
        }
        let next = angular_eigenvalue(p_sq, l_max)?;
        let tail = next.coeffs[prev.coeffs.len()..].iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if (next.a - prev.a).abs() <= 1e-13 * next.a.abs().max(1.0) && tail < 1e-15 {
            return Ok(next);
        }
        prev = next;
    }
}

impl AngularSolution {
    /// Y(eta) and its first two derivatives.
    pub fn eval(&self, eta: f64) -> (f64, f64, f64) {
        let eta = eta.clamp(-1.0, 1.0);
        let p = legendre_all(self.l_max + 1, eta);
        let mut y = 0.0;
        let mut dy = 0.0;
        let one_m = 1.0 - eta * eta;
        let mut lap = 0.0; // sum c_l * (-l(l+1)) P_l = ((1-eta^2)Y')'
        for (k, c) in self.coeffs.iter().enumerate() {
            let l = 2 * k;
            let s = c * norm_factor(l);
            y += s * p[l];
            // (1 - x^2) P_l' = l (P_{l-1} - x P_l)
            if l > 0 {
                dy += s * (l as f64) * (p[l - 1] - eta * p[l]);
            }
            lap -= s * ((l * (l + 1)) as f64) * p[l];
        }
        if one_m > 1e-12 {
            let d1 = dy / one_m;
            // (1 - x^2) Y'' - 2x Y' = lap
            let d2 = (lap + 2.0 * eta * d1) / one_m;
            (y, d1, d2)
        } else {
            // endpoint: derivative from the series directly
            let d1: f64 = self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    let l = (2 * k) as f64;
                    c * norm_factor(2 * k) * 0.5 * l * (l + 1.0) * eta.signum()
                })
                .sum();
            (y, d1, f64::NAN)
        }
    }

    /// Y(0), Y'(0), Y''(0) via the Legendre values at the origin.
    pub fn midpoint(&self) -> (f64, f64, f64) {
        let p = legendre_all(self.l_max, 0.0);
        let mut y = 0.0;
        let mut d2 = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let l = 2 * k;
            let s = c * norm_factor(l) * p[l];
            y += s;
            // P_l''(0) = -l(l+1) P_l(0) from the Legendre equation at 0
            d2 -= ((l * (l + 1)) as f64) * s;
        }
        // odd-parity terms absent: Y'(0) vanishes identically
        (y, 0.0, d2)
    }

    /// Integral of Y^2 eta^2 over [-1, 1]; Y^2 integrates to 1.
    pub fn eta2_moment(&self) -> f64 {
        let c = &self.coeffs;
        let mut s = 0.0;
        for k in 0..c.len() {
            s += c[k] * c[k] * eta2_diagonal(2 * k);
            if k + 1 < c.len() {
                s += 2.0 * c[k] * c[k + 1] * eta2_offdiagonal(2 * k);
            }
        }
        s
    }
}
