use crate::error::{Error, Result};

/// Crossover between the Maclaurin series and the erf closed form.
pub const T_SWITCH: f64 = 1e-3;

/// Zeroth-order Boys function F0(t) = \int_0^1 exp(-t u^2) du.
pub fn boys_f0(t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("Boys function argument must be >= 0, got {t}")));
    }
    Ok(boys_f0_unchecked(t))
}

#[inline]
pub(crate) fn boys_f0_unchecked(t: f64) -> f64 {
    if t <= T_SWITCH {
        // sum (-t)^k / (k! (2k+1)); at t = 1e-3 the t^6 term is below 1e-19
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..7 {
            term *= -t / k as f64;
            sum += term / (2 * k + 1) as f64;
        }
        sum
    } else {
        let st = t.sqrt();
        0.5 * (std::f64::consts::PI / t).sqrt() * libm::erf(st)
    }
}
