//! Ground-state (1s sigma_g) root search over the electronic energy.

use serde::{Deserialize, Serialize};

use super::angular::{angular_converged, AngularSolution};
use super::radial::{RadialFunction, RadialProblem, ShootOutcome, Shooter, ShootingGrid};
use crate::coords::Geometry;
use crate::error::{Error, Result};
use crate::legendre::GaussLegendre;
use crate::ode::Tolerance;

/// Search interval for E_elec: the united-atom (He+) and separated-atom
/// (H) energies bound the ground state for every R > 0.
pub const E_LOWER: f64 = -2.0;
pub const E_UPPER: f64 = -0.5;

/// Width at which bisection hands over to the secant phase.
const BISECTION_WIDTH: f64 = 1e-6;
const MAX_ITERATIONS: usize = 200;

pub const DEFAULT_N_ETA: usize = 64;
pub const DEFAULT_N_XI: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Convergence on E_elec between the final iterates, Hartree.
    pub tol: f64,
    /// Relative tolerance of the radial integrator.
    pub ode_rtol: f64,
    /// Override of the automatic matching/cutoff points.
    pub grid: Option<ShootingGrid>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-12, ode_rtol: 1e-12, grid: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub angular: f64,
    pub radial_mismatch: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationInfo {
    pub l_max: usize,
    pub xi_match: f64,
    pub xi_max: f64,
    pub ode_rtol: f64,
    pub iterations: usize,
}

/// Converged sigma_g ground state at one internuclear separation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaGSolution {
    pub r: f64,
    pub e_elec: f64,
    pub e_tot: f64,
    pub a: f64,
    pub p: f64,
    pub angular: AngularSolution,
    pub radial: RadialFunction,
    /// Scale of X(xi) Y(eta) giving a unit-normalized wavefunction.
    pub norm_const: f64,
    pub residuals: Residuals,
    pub truncation: TruncationInfo,
    pub diagnostics: ShootOutcome,
}

impl SigmaGSolution {
    pub fn geometry(&self) -> Geometry {
        Geometry::new(self.r).expect("solution holds a valid R")
    }

    /// Normalized wavefunction at spheroidal coordinates; the flag reports
    /// use of the asymptotic radial tail.
    pub fn psi(&self, xi: f64, eta: f64) -> (f64, bool) {
        let (x, ext) = self.radial.eval(xi);
        (self.norm_const * x * self.angular.eval(eta.abs()).0, ext)
    }
}

struct Evaluation {
    angular: AngularSolution,
    outcome: ShootOutcome,
}

fn evaluate(e: f64, r: f64, grid: Option<ShootingGrid>, rtol: f64) -> Result<Evaluation> {
    let p_sq = -0.5 * e * r * r;
    let angular = angular_converged(p_sq)?;
    let prob = RadialProblem::new(e, angular.a, r)?;
    let grid = grid.unwrap_or_else(|| ShootingGrid::for_problem(&prob));
    let outcome = Shooter::new(prob, grid, Tolerance { rtol, atol: 1e-300 })?.outcome()?;
    Ok(Evaluation { angular, outcome })
}

/// Solve for the sigma_g ground state at separation `r` to `tol` Hartree.
pub fn solve_ground(r: f64, tol: f64) -> Result<SigmaGSolution> {
    solve_ground_with(r, &SolverOptions { tol, ..SolverOptions::default() })
}

pub fn solve_ground_with(r: f64, opts: &SolverOptions) -> Result<SigmaGSolution> {
    let geom = Geometry::new(r)?;
    if !(opts.tol >= 1e-12) {
        return Err(Error::Domain(format!("tol must be >= 1e-12, got {}", opts.tol)));
    }
    let rtol = opts.ode_rtol;

    // Phase 1: node-aware bisection with per-trial shooting points.
    let (mut lo, mut hi) = (E_LOWER, E_UPPER);
    let f_lo = evaluate(lo, r, opts.grid, rtol)?.outcome;
    let f_hi = evaluate(hi, r, opts.grid, rtol)?.outcome;
    if f_lo.side() <= 0.0 || f_hi.side() >= 0.0 {
        return Err(Error::BracketNotFound { lo, hi, f_lo: f_lo.mismatch, f_hi: f_hi.mismatch });
    }
    let mut iterations = 0;
    while hi - lo > BISECTION_WIDTH {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if evaluate(mid, r, opts.grid, rtol)?.outcome.side() > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // Phase 2: freeze the shooting points and polish with a safeguarded secant.
    let mid = 0.5 * (lo + hi);
    let grid = opts.grid.unwrap_or_else(|| {
        let a = angular_converged(-0.5 * mid * r * r).map(|s| s.a).unwrap_or(0.0);
        ShootingGrid::for_problem(&RadialProblem { e_elec: mid, a, r, p: r * (-0.5 * mid).sqrt() })
    });
    let f = |e: f64| -> Result<(f64, Evaluation)> {
        let ev = evaluate(e, r, Some(grid), rtol)?;
        let s = ev.outcome.side();
        // map node-flagged trials onto the negative branch
        let v = if s < 0.0 && ev.outcome.mismatch > 0.0 { -ev.outcome.mismatch.abs() } else { ev.outcome.mismatch };
        Ok((v, ev))
    };
    let (mut f_a, _) = f(lo)?;
    let (mut f_b, _) = f(hi)?;
    if !(f_a > 0.0 && f_b < 0.0) {
        // re-bracket outward in case the frozen grid moved the crossing
        let w = hi - lo;
        lo = (lo - 4.0 * w).max(E_LOWER);
        hi = (hi + 4.0 * w).min(E_UPPER);
        f_a = f(lo)?.0;
        f_b = f(hi)?.0;
        if !(f_a > 0.0 && f_b < 0.0) {
            return Err(Error::BracketNotFound { lo, hi, f_lo: f_a, f_hi: f_b });
        }
    }
    let (mut x_prev, mut f_prev) = (lo, f_a);
    let (mut x_cur, mut f_cur) = (hi, f_b);
    let mut best = None;
    for _ in 0..MAX_ITERATIONS {
        iterations += 1;
        let mut x_new = if f_cur != f_prev {
            x_cur - f_cur * (x_cur - x_prev) / (f_cur - f_prev)
        } else {
            0.5 * (lo + hi)
        };
        if !(x_new > lo && x_new < hi) {
            x_new = 0.5 * (lo + hi);
        }
        let (f_new, ev) = f(x_new)?;
        let step = (x_new - x_cur).abs();
        if f_new > 0.0 {
            lo = x_new;
        } else if f_new < 0.0 {
            hi = x_new;
        }
        x_prev = x_cur;
        f_prev = f_cur;
        x_cur = x_new;
        f_cur = f_new;
        best = Some((x_new, ev));
        if step <= opts.tol || hi - lo <= opts.tol || f_new == 0.0 {
            break;
        }
    }
    let (e, ev) = best.ok_or(Error::RootNotConverged { iterations, width: hi - lo })?;
    if (hi - lo) > opts.tol && (x_cur - x_prev).abs() > opts.tol {
        return Err(Error::RootNotConverged { iterations, width: hi - lo });
    }

    let prob = RadialProblem::new(e, ev.angular.a, r)?;
    let (outcome, radial) = Shooter::new(prob, grid, Tolerance { rtol, atol: 1e-300 })?.tabulate()?;
    let mut sol = SigmaGSolution {
        r,
        e_elec: e,
        e_tot: e + geom.nuclear_repulsion(),
        a: ev.angular.a,
        p: prob.p,
        residuals: Residuals { angular: ev.angular.residual, radial_mismatch: outcome.mismatch },
        truncation: TruncationInfo {
            l_max: ev.angular.l_max,
            xi_match: grid.xi_match,
            xi_max: grid.xi_max,
            ode_rtol: rtol,
            iterations,
        },
        angular: ev.angular,
        radial,
        norm_const: 1.0,
        diagnostics: outcome,
    };
    sol.norm_const = normalize(&sol, DEFAULT_N_ETA, DEFAULT_N_XI)?;
    Ok(sol)
}

/// Panel boundaries in xi for quadrature of the radial factor.
fn xi_panels(sol: &SigmaGSolution) -> Vec<f64> {
    let rad = &sol.radial;
    let mut b = vec![1.0, 1.0 + rad.series.t_max, rad.grid.xi_match];
    let width = (1.0 / sol.p).min(0.25 * (rad.grid.xi_max - rad.grid.xi_match)).max(1e-3);
    let mut x = rad.grid.xi_match;
    while x + width < rad.xi_end() {
        x += width;
        b.push(x);
    }
    b.push(rad.xi_end());
    b.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    b
}

/// Normalization constant N such that 2 pi \int\int |N X Y|^2 dV = 1, using
/// Gauss-Legendre of order `n_eta` in eta and panels of order `n_xi` in xi.
pub fn normalize(sol: &SigmaGSolution, n_eta: usize, n_xi: usize) -> Result<f64> {
    if n_eta < 2 || n_xi < 2 {
        return Err(Error::Quadrature("quadrature orders must be >= 2".into()));
    }
    let q_eta = GaussLegendre::new(n_eta);
    let (mut j0, mut j2) = (0.0, 0.0);
    for (&x, &w) in q_eta.nodes.iter().zip(&q_eta.weights) {
        let y = sol.angular.eval(x).0;
        j0 += w * y * y;
        j2 += w * x * x * y * y;
    }
    let q_xi = GaussLegendre::new(n_xi);
    let panels = xi_panels(sol);
    let (mut i0, mut i2) = (0.0, 0.0);
    for win in panels.windows(2) {
        i0 += q_xi.integrate(win[0], win[1], |xi| sol.radial.eval(xi).0.powi(2));
        i2 += q_xi.integrate(win[0], win[1], |xi| (xi * sol.radial.eval(xi).0).powi(2));
    }
    let r = sol.r;
    let integral = 2.0 * std::f64::consts::PI * r * r * r / 8.0 * (i2 * j0 - i0 * j2);
    if !(integral > 0.0 && integral.is_finite()) {
        return Err(Error::Quadrature(format!("norm integral {integral} not positive")));
    }
    Ok(1.0 / integral.sqrt())
}

/// One row of an energy scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub r: f64,
    pub e_elec: f64,
    pub e_tot: f64,
    pub a: f64,
    pub p: f64,
    pub topology_class: Option<crate::density::TopologyClass>,
    pub iterations: usize,
    pub radial_mismatch: f64,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub rows: Vec<ScanRow>,
}

impl ScanResult {
    pub fn failures(&self) -> impl Iterator<Item = &ScanRow> {
        self.rows.iter().filter(|r| r.failure.is_some())
    }

    /// E_elec strictly increasing in R over the successful rows.
    pub fn is_monotone(&self) -> bool {
        let ok: Vec<_> = self.rows.iter().filter(|r| r.failure.is_none()).collect();
        ok.windows(2).all(|w| w[1].e_elec > w[0].e_elec)
    }
}

/// Solve every R in `r_list` (strictly increasing) in parallel; failures are
/// kept as rows with the error recorded.
pub fn energy_curve(r_list: &[f64], tol: f64) -> Result<ScanResult> {
    use rayon::prelude::*;
    if r_list.is_empty() {
        return Err(Error::Domain("empty R list".into()));
    }
    if r_list.iter().any(|&r| !(r > 0.0)) || r_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("R list must be positive and strictly increasing".into()));
    }
    let rows = r_list
        .par_iter()
        .map(|&r| match solve_ground(r, tol) {
            Ok(sol) => {
                let class = crate::density::exact_class(&sol).ok();
                ScanRow {
                    r,
                    e_elec: sol.e_elec,
                    e_tot: sol.e_tot,
                    a: sol.a,
                    p: sol.p,
                    topology_class: class,
                    iterations: sol.truncation.iterations,
                    radial_mismatch: sol.residuals.radial_mismatch,
                    failure: None,
                }
            }
            Err(e) => ScanRow {
                r,
                e_elec: f64::NAN,
                e_tot: f64::NAN,
                a: f64::NAN,
                p: f64::NAN,
                topology_class: None,
                iterations: 0,
                radial_mismatch: f64::NAN,
                failure: Some(e.to_string()),
            },
        })
        .collect();
    Ok(ScanResult { rows })
}
