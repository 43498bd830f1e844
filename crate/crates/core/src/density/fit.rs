use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::separated::SigmaGSolution;

pub const DEFAULT_WINDOW: f64 = 0.1;
const N_SAMPLES: usize = 41;

/// Least-squares fit of c1 exp(-sqrt(A) eta) + c2 exp(sqrt(A) eta) on [0, window].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eq4Fit {
    pub window: f64,
    pub sqrt_a: f64,
    pub c1: f64,
    pub c2: f64,
    /// -sqrt(A) (c1 - c2).
    pub slope: f64,
    /// Derivative of the fitted model at 0+, evaluated from the cosh/sinh form.
    pub model_slope: f64,
    /// RMS deviation of the model from the samples.
    pub residual: f64,
}

impl Eq4Fit {
    pub fn balance(&self) -> f64 {
        (self.c1 - self.c2).abs() / (self.c1 + self.c2).abs()
    }

    pub fn model(&self, eta: f64) -> f64 {
        self.c1 * (-self.sqrt_a * eta).exp() + self.c2 * (self.sqrt_a * eta).exp()
    }
}

/// Fit samples (eta_i, y_i) with the exponent rate `sqrt_a`.
pub fn fit_two_exponential(eta: &[f64], y: &[f64], sqrt_a: f64) -> Result<Eq4Fit> {
    if eta.len() != y.len() || eta.len() < 2 {
        return Err(Error::Domain("fit needs at least two samples".into()));
    }
    let window = eta.iter().copied().fold(0.0, f64::max);
    let x = sqrt_a * window;
    if !(x >= 1e-6) {
        return Err(Error::IllConditionedFit(x));
    }
    // columns cosh(s eta) and sinh(s eta)/x keep the system well scaled
    let n = eta.len();
    let m = DMatrix::from_fn(n, 2, |i, j| {
        let t = sqrt_a * eta[i];
        if j == 0 {
            t.cosh()
        } else {
            t.sinh() / x
        }
    });
    let rhs = DVector::from_column_slice(y);
    let svd = m.clone().svd(true, true);
    let sol = svd.solve(&rhs, 1e-15).map_err(|e| Error::Domain(e.to_string()))?;
    let u = sol[0];
    let v = sol[1] / x;
    let c1 = 0.5 * (u - v);
    let c2 = 0.5 * (u + v);
    let fitted = &m * &sol;
    let residual = ((fitted - rhs).norm_squared() / n as f64).sqrt();
    Ok(Eq4Fit { window, sqrt_a, c1, c2, slope: -sqrt_a * (c1 - c2), model_slope: sqrt_a * v, residual })
}

/// Fit `f(eta)` sampled uniformly on [0, window] with separation constant `a`.
pub fn segment_fit(f: impl Fn(f64) -> f64, a: f64, window: f64) -> Result<Eq4Fit> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("fit needs A > 0, got {a}")));
    }
    if !(window > 0.0 && window <= 0.2) {
        return Err(Error::Domain(format!("window must lie in (0, 0.2], got {window}")));
    }
    let eta: Vec<f64> = (0..N_SAMPLES).map(|k| window * k as f64 / (N_SAMPLES - 1) as f64).collect();
    let y: Vec<f64> = eta.iter().map(|&e| f(e)).collect();
    fit_two_exponential(&eta, &y, a.sqrt())
}

/// Two-exponential fit of the exact angular function near the midpoint.
pub fn midpoint_fit(sol: &SigmaGSolution, window: f64) -> Result<Eq4Fit> {
    segment_fit(|e| sol.angular.eval(e).0, sol.a, window)
}
