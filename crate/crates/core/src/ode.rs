//! Dormand-Prince 5(4) integrator for two-component first-order systems.

use crate::error::{Error, Result};

pub type State = [f64; 2];

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rtol: 1e-12, atol: 1e-300 }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b - b_hat
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[inline]
fn axpy(y: &State, terms: &[(f64, &State)], h: f64) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// Integrate `y' = f(x, y)` from `x0` to `x1` (either direction).
///
/// `observe` is called after every accepted step with the new (x, y). It
/// returns `false` to abort integration early (the last accepted state is
/// returned in that case).
pub fn integrate<F, O>(
    f: F,
    x0: f64,
    y0: State,
    x1: f64,
    tol: Tolerance,
    h_init: f64,
    mut observe: O,
) -> Result<(f64, State)>
where
    F: Fn(f64, &State) -> State,
    O: FnMut(f64, &State) -> bool,
{
    let span = x1 - x0;
    if span == 0.0 {
        return Ok((x0, y0));
    }
    let dir = span.signum();
    let mut h = h_init.abs().min(span.abs()).max(span.abs() * 1e-14) * dir;
    let mut x = x0;
    let mut y = y0;
    let mut k1 = f(x, &y);
    let h_min = span.abs() * 1e-15;
    let mut steps = 0usize;

    while (x1 - x) * dir > 0.0 {
        steps += 1;
        if steps > 2_000_000 {
            return Err(Error::Integrator { xi: x, reason: "step limit exceeded".into() });
        }
        if (x + h - x1) * dir > 0.0 {
            h = x1 - x;
        }
        let k2 = f(x + C2 * h, &axpy(&y, &[(A21, &k1)], h));
        let k3 = f(x + C3 * h, &axpy(&y, &[(A31, &k1), (A32, &k2)], h));
        let k4 = f(x + C4 * h, &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h));
        let k5 = f(
            x + C5 * h,
            &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
        );
        let k6 = f(
            x + h,
            &axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h),
        );
        let y_new = axpy(&y, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], h);
        let k7 = f(x + h, &y_new);

        let mut err = 0.0f64;
        for i in 0..2 {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = tol.atol + tol.rtol * y[i].abs().max(y_new[i].abs());
            err = err.max((e / sc).abs());
        }
        if !err.is_finite() || !y_new[0].is_finite() || !y_new[1].is_finite() {
            if h.abs() <= h_min {
                return Err(Error::Integrator { xi: x, reason: "non-finite state (overflow)".into() });
            }
            h *= 0.25;
            continue;
        }
        if err <= 1.0 {
            x += h;
            y = y_new;
            k1 = k7;
            if !observe(x, &y) {
                return Ok((x, y));
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            if h.abs() < h_min {
                return Err(Error::Integrator { xi: x, reason: "step size underflow".into() });
            }
        }
    }
    Ok((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let f = |_x: f64, y: &State| [y[1], -y[0]];
        let (x, y) = integrate(f, 0.0, [0.0, 1.0], 10.0, Tolerance::default(), 0.1, |_, _| true).unwrap();
        assert_eq!(x, 10.0);
        assert!((y[0] - 10f64.sin()).abs() < 1e-10);
        assert!((y[1] - 10f64.cos()).abs() < 1e-10);
    }

    #[test]
    fn backward_exponential() {
        let f = |_x: f64, y: &State| [y[1], y[0]];
        let (_, y) = integrate(f, 5.0, [1.0, -1.0], 0.0, Tolerance::default(), 0.1, |_, _| true).unwrap();
        assert!((y[0] / 5f64.exp() - 1.0).abs() < 1e-10);
    }
}
