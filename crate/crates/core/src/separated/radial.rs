//! Radial (xi) equation and its two-sided shooting.
//!
//! (xi^2 - 1) X'' + 2 xi X' + (-p^2 xi^2 + 2 R xi + A) X = 0, with
//! p^2 = -E R^2 / 2. The attractive two-center term enters as +2 R xi.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{integrate, State, Tolerance};

type Knots = Vec<[f64; 3]>;

const SERIES_MAX_TERMS: usize = 600;

/// Frobenius data at the regular singular point xi = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrobeniusSeries {
    /// Coefficients of (xi - 1)^k with X(1) = 1.
    pub coeffs: Vec<f64>,
    /// Largest t = xi - 1 at which the series is used.
    pub t_max: f64,
}

impl FrobeniusSeries {
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let mut x = 0.0;
        let mut dx = 0.0;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if k > 0 {
                dx = dx * t + (k as f64) * c;
            }
            x = x * t + c;
        }
        (x, dx)
    }
}

/// Coefficients of the radial ODE for a trial (E, A) at separation R.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProblem {
    pub e_elec: f64,
    pub a: f64,
    pub r: f64,
    pub p: f64,
}

impl RadialProblem {
    pub fn new(e_elec: f64, a: f64, r: f64) -> Result<Self> {
        if !(e_elec < 0.0) {
            return Err(Error::Domain(format!("E_elec must be negative, got {e_elec}")));
        }
        if !(r > 0.0) {
            return Err(Error::Domain(format!("R must be positive, got {r}")));
        }
        let p = r * (-0.5 * e_elec).sqrt();
        Ok(Self { e_elec, a, r, p })
    }

    #[inline]
    pub fn p_sq(&self) -> f64 {
        self.p * self.p
    }

    #[inline]
    pub fn potential(&self, xi: f64) -> f64 {
        -self.p_sq() * xi * xi + 2.0 * self.r * xi + self.a
    }

    /// X'' from the ODE (valid for xi > 1).
    #[inline]
    pub fn second_derivative(&self, xi: f64, x: f64, dx: f64) -> f64 {
        -(2.0 * xi * dx + self.potential(xi) * x) / ((xi - 1.0) * (xi + 1.0))
    }

    fn rhs(&self, xi: f64, y: &State) -> State {
        [y[1], self.second_derivative(xi, y[0], y[1])]
    }

    /// Outer root of the potential term: where the radial solution turns
    /// from oscillatory-like to decaying.
    pub fn turning_point(&self) -> f64 {
        let p2 = self.p_sq();
        (self.r + (self.r * self.r + p2 * self.a.max(0.0)).sqrt()) / p2
    }

    /// Power series about xi = 1 valid for t <= t_max.
    pub fn series(&self, t_max: f64) -> FrobeniusSeries {
        let p2 = self.p_sq();
        let q0 = -p2 + 2.0 * self.r + self.a;
        let q1 = -2.0 * p2 + 2.0 * self.r;
        let q2 = -p2;
        let mut c = vec![1.0];
        let mut small = 0;
        for k in 0..SERIES_MAX_TERMS {
            let kf = k as f64;
            let ak = c[k];
            let am1 = if k >= 1 { c[k - 1] } else { 0.0 };
            let am2 = if k >= 2 { c[k - 2] } else { 0.0 };
            let next = -((kf * (kf + 1.0) + q0) * ak + q1 * am1 + q2 * am2) / (2.0 * (kf + 1.0).powi(2));
            c.push(next);
            let term = (next * t_max.powi(k as i32 + 1)).abs();
            if term < 1e-18 {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
        }
        FrobeniusSeries { coeffs: c, t_max }
    }
}

/// Regular start at xi = 1: X(1) = 1 and X'(1) from the ODE at the singular point.
pub fn radial_start(e_elec: f64, a: f64, r: f64) -> (f64, f64) {
    (1.0, -(0.5 * e_elec * r * r + 2.0 * r + a) / 2.0)
}

/// Matching and cutoff points used for shooting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingGrid {
    pub xi_match: f64,
    pub xi_max: f64,
}

impl ShootingGrid {
    /// Defaults for a given p and turning point: xi_max = 1 + 40/p, and
    /// xi_match = 1 + max(1, 2/p) capped at 5, pulled in to the turning
    /// point when that lies closer to xi = 1.
    pub fn for_problem(prob: &RadialProblem) -> Self {
        let p = prob.p;
        let nominal = (1.0 + (2.0 / p).max(1.0)).min(5.0);
        let xi_match = nominal.min(prob.turning_point().max(1.02));
        let xi_max = (1.0 + 40.0 / p).max(xi_match + 1.0);
        Self { xi_match, xi_max }
    }
}

/// Detailed outcome of one shooting pass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootOutcome {
    /// Outward minus inward logarithmic derivative at the match point.
    pub mismatch: f64,
    pub log_deriv_out: f64,
    pub log_deriv_in: f64,
    pub nodes_out: usize,
    pub nodes_in: usize,
}

impl ShootOutcome {
    /// +1 when the trial energy lies below the eigenvalue, -1 above.
    ///
    /// Any node means the trial energy is above the nodeless ground state;
    /// this also removes the poles of the log-derivative difference.
    pub fn side(&self) -> f64 {
        if self.nodes_out + self.nodes_in > 0 || self.mismatch < 0.0 {
            -1.0
        } else if self.mismatch > 0.0 {
            1.0
        } else {
            0.0
        }
    }
}

/// Sampled radial solution: (xi, X, X') knots with quintic Hermite
/// interpolation between them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialFunction {
    pub series: FrobeniusSeries,
    pub knots: Vec<[f64; 3]>,
    pub grid: ShootingGrid,
    pub p: f64,
    pub r: f64,
    pub e_elec: f64,
    pub a: f64,
}

impl RadialFunction {
    fn problem(&self) -> RadialProblem {
        RadialProblem { e_elec: self.e_elec, a: self.a, r: self.r, p: self.p }
    }

    /// X(xi). Returns `(value, extrapolated)`; past xi_max the asymptotic
    /// form e^{-p xi} xi^{R/p - 1} is continued from the last knot.
    pub fn eval(&self, xi: f64) -> (f64, bool) {
        let t = xi - 1.0;
        if t <= self.series.t_max {
            return (self.series.eval(t.max(0.0)).0, false);
        }
        let last = self.knots[self.knots.len() - 1];
        if xi > last[0] {
            let expo = self.r / self.p - 1.0;
            let v = last[1] * (-self.p * (xi - last[0])).exp() * (xi / last[0]).powf(expo);
            return (v, true);
        }
        let idx = self.knots.partition_point(|k| k[0] <= xi).max(1).min(self.knots.len() - 1);
        let k0 = self.knots[idx - 1];
        let k1 = self.knots[idx];
        let prob = self.problem();
        let s0 = prob.second_derivative(k0[0], k0[1], k0[2]);
        let s1 = prob.second_derivative(k1[0], k1[1], k1[2]);
        (hermite5(k0[0], k1[0], [k0[1], k0[2], s0], [k1[1], k1[2], s1], xi), false)
    }

    /// Largest xi covered by tabulated data.
    pub fn xi_end(&self) -> f64 {
        self.knots[self.knots.len() - 1][0]
    }
}

/// Quintic Hermite interpolation using value, first and second derivative.
pub fn hermite5(x0: f64, x1: f64, f0: [f64; 3], f1: [f64; 3], x: f64) -> f64 {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t3 * t;
    let t5 = t4 * t;
    let h00 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    let h01 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    let h02 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    let h10 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    let h11 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    let h12 = 0.5 * t3 - t4 + 0.5 * t5;
    h00 * f0[0] + h * h01 * f0[1] + h * h * h02 * f0[2] + h10 * f1[0] + h * h11 * f1[1] + h * h * h12 * f1[2]
}

pub(crate) struct Shooter {
    pub prob: RadialProblem,
    pub grid: ShootingGrid,
    pub tol: Tolerance,
}

impl Shooter {
    pub fn new(prob: RadialProblem, grid: ShootingGrid, tol: Tolerance) -> Result<Self> {
        if !(1.0 < grid.xi_match && grid.xi_match < grid.xi_max) {
            return Err(Error::Domain(format!(
                "need 1 < xi_match < xi_max, got {} and {}",
                grid.xi_match, grid.xi_max
            )));
        }
        if prob.p * grid.xi_max < 25.0 {
            return Err(Error::Domain(format!(
                "p * xi_max = {} < 25: asymptotic tail not decayed",
                prob.p * grid.xi_max
            )));
        }
        Ok(Self { prob, grid, tol })
    }

    fn series_end(&self) -> f64 {
        (0.5 * (self.grid.xi_match - 1.0)).min(0.25)
    }

    /// Returns the outcome and, when `record` is set, the knots of the
    /// outward and (unscaled) inward solutions.
    fn run(&self, record: bool) -> Result<(ShootOutcome, FrobeniusSeries, Knots, Knots)> {
        let prob = self.prob;
        let t0 = self.series_end();
        let series = prob.series(t0);
        let (x0, dx0) = series.eval(t0);
        let xi0 = 1.0 + t0;
        let rhs = |xi: f64, y: &State| prob.rhs(xi, y);

        let mut out_knots = Vec::new();
        if record {
            out_knots.push([xi0, x0, dx0]);
        }
        let mut nodes_out = 0usize;
        let mut last_sign = x0.signum();
        let h0 = (self.grid.xi_match - xi0) * 0.01;
        let (_, y_out) = integrate(rhs, xi0, [x0, dx0], self.grid.xi_match, self.tol, h0, |xi, y| {
            if y[0].signum() != last_sign && y[0] != 0.0 {
                nodes_out += 1;
                last_sign = y[0].signum();
            }
            if record {
                out_knots.push([xi, y[0], y[1]]);
            }
            true
        })?;

        let xm = self.grid.xi_max;
        let l_start = -prob.p + (prob.r / prob.p - 1.0) / xm;
        let mut in_knots = Vec::new();
        if record {
            in_knots.push([xm, 1.0, l_start]);
        }
        let mut nodes_in = 0usize;
        let mut last_sign = 1.0;
        let h0 = -(xm - self.grid.xi_match) * 0.001;
        let (_, y_in) = integrate(rhs, xm, [1.0, l_start], self.grid.xi_match, self.tol, h0, |xi, y| {
            if y[0].signum() != last_sign && y[0] != 0.0 {
                nodes_in += 1;
                last_sign = y[0].signum();
            }
            if record {
                in_knots.push([xi, y[0], y[1]]);
            }
            true
        })?;

        let l_out = y_out[1] / y_out[0];
        let l_in = y_in[1] / y_in[0];
        let outcome = ShootOutcome {
            mismatch: l_out - l_in,
            log_deriv_out: l_out,
            log_deriv_in: l_in,
            nodes_out,
            nodes_in,
        };
        Ok((outcome, series, out_knots, in_knots))
    }

    pub fn outcome(&self) -> Result<ShootOutcome> {
        Ok(self.run(false)?.0)
    }

    /// Tabulate the matched solution, scaling the inward branch onto the
    /// outward value at the match point.
    pub fn tabulate(&self) -> Result<(ShootOutcome, RadialFunction)> {
        let (outcome, series, mut knots, mut inward) = self.run(true)?;
        let x_match_out = knots.last().map(|k| k[1]).unwrap_or(1.0);
        inward.reverse();
        let scale = x_match_out / inward[0][1];
        // the outward knot at xi_match is replaced by the inward one
        knots.pop();
        knots.extend(inward.into_iter().map(|k| [k[0], k[1] * scale, k[2] * scale]));
        Ok((
            outcome,
            RadialFunction {
                series,
                knots,
                grid: self.grid,
                p: self.prob.p,
                r: self.prob.r,
                e_elec: self.prob.e_elec,
                a: self.prob.a,
            },
        ))
    }
}

/// Difference of logarithmic derivatives (outward minus inward) at `xi_match`.
pub fn radial_mismatch(e_elec: f64, a: f64, r: f64, xi_match: f64, xi_max: f64) -> Result<f64> {
    let prob = RadialProblem::new(e_elec, a, r)?;
    let sh = Shooter::new(prob, ShootingGrid { xi_match, xi_max }, Tolerance::default())?;
    Ok(sh.outcome()?.mismatch)
}

/// Full shooting diagnostics for a trial (E, A).
pub fn radial_shoot(e_elec: f64, a: f64, r: f64, grid: ShootingGrid) -> Result<ShootOutcome> {
    let prob = RadialProblem::new(e_elec, a, r)?;
    Shooter::new(prob, grid, Tolerance::default())?.outcome()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn start_formula() {
        let (x, dx) = radial_start(-1e-12, 0.0, 1e-9);
        assert_eq!(x, 1.0);
        assert!(dx.abs() < 1e-8);
        let a = 0.001;
        let (_, dx) = radial_start(-2.0, a, 0.008);
        assert_eq!(dx, -(0.5 * -2.0 * 6.4e-5 + 0.016 + a) / 2.0);
    }

    #[test]
    fn taylor_start_consistent_to_second_order() {
        // The two-term start X = 1 + X'(1) t leaves an O(t) ODE residual from
        // the neglected curvature; adding the series t^2 term cancels it to O(t^2).
        let (e, a, r) = (-1.1, 0.8, 2.0);
        let prob = RadialProblem::new(e, a, r).unwrap();
        let (x1, d1) = radial_start(e, a, r);
        let t = 1e-6;
        let xi = 1.0 + t;
        let series = prob.series(0.1);
        assert_eq!(series.coeffs[1], d1);
        let c2 = series.coeffs[2];
        let x = x1 + d1 * t + c2 * t * t;
        let dx = d1 + 2.0 * c2 * t;
        let res = (xi * xi - 1.0) * 2.0 * c2 + 2.0 * xi * dx + prob.potential(xi) * x;
        assert!(res.abs() < 1e-9, "{res}");
        let two_term = x1 + d1 * t;
        assert!((series.eval(t).0 - two_term).abs() < 1e-9);
    }

    #[test]
    fn series_satisfies_ode() {
        let prob = RadialProblem::new(-0.6, 10.0, 8.0).unwrap();
        let s = prob.series(0.25);
        for &t in &[0.01, 0.1, 0.2, 0.25] {
            let h = 1e-5;
            let (x, dx) = s.eval(t);
            let (_, dxp) = s.eval(t + h);
            let (_, dxm) = s.eval(t - h);
            let d2 = (dxp - dxm) / (2.0 * h);
            let xi = 1.0 + t;
            let res = (xi * xi - 1.0) * d2 + 2.0 * xi * dx + prob.potential(xi) * x;
            assert!(res.abs() < 1e-7 * x.abs().max(1.0), "t={t} res={res}");
        }
    }

    #[test]
    fn mismatch_preconditions() {
        assert!(radial_mismatch(-1.1, 0.8, 2.0, 3.0, 2.5).is_err());
        assert!(radial_mismatch(-1.1, 0.8, 2.0, 0.9, 20.0).is_err());
        assert!(radial_mismatch(-1.1, 0.8, 2.0, 2.0, 5.0).is_err());
        assert!(radial_mismatch(1.0, 0.8, 2.0, 2.0, 30.0).is_err());
    }

    #[test]
    fn hermite_reproduces_quintic() {
        let f = |x: f64| 1.0 + x - 2.0 * x.powi(3) + 0.5 * x.powi(5);
        let df = |x: f64| 1.0 - 6.0 * x * x + 2.5 * x.powi(4);
        let d2f = |x: f64| -12.0 * x + 10.0 * x.powi(3);
        let (a, b) = (0.3, 1.7);
        for &x in &[0.3, 0.5, 1.0, 1.6] {
            let v = hermite5(a, b, [f(a), df(a), d2f(a)], [f(b), df(b), d2f(b)], x);
            assert!((v - f(x)).abs() < 1e-13);
        }
    }
}
