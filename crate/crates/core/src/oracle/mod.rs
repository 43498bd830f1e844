//! Brute-force finite-difference solver for the unseparated (xi, eta)
//! problem, used as an independent check on the separated solver.
//!
//! The operator [d/dxi (xi^2-1) d/dxi + d/deta (1-eta^2) d/deta + 2 R xi]
//! is discretized in conservative form on a cell-centered grid. The radial
//! direction uses the stretched variable s in [0, 1], xi = 1 + (xi_max - 1) s^2,
//! so the scheme stays second order in the cell width while clustering
//! cells near the nuclei. The no-flux conditions at xi = 1 and |eta| = 1
//! come for free from the vanishing coefficients; psi = 0 on xi = xi_max.

mod banded;

use serde::{Deserialize, Serialize};

pub use banded::{BandCholesky, SymBand};

use crate::coords::Geometry;
use crate::error::{Error, Result};

/// Shift placed below the whole spectrum (E_elec > -2 for every R).
pub const SHIFT: f64 = -2.1;
const MAX_ITERATIONS: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_xi: usize,
    pub n_eta: usize,
    pub xi_max: f64,
}

impl GridSpec {
    pub fn new(n_xi: usize, n_eta: usize, xi_max: f64) -> Result<Self> {
        let g = Self { n_xi, n_eta, xi_max };
        g.validate()?;
        Ok(g)
    }

    /// Cutoff from the weakest possible decay, p >= R/2 (E_elec < -1/2).
    pub fn for_separation(r: f64, n_xi: usize, n_eta: usize) -> Result<Self> {
        Self::new(n_xi, n_eta, (1.0 + 48.0 / r).max(4.0))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_xi < 16 || self.n_eta < 16 {
            return Err(Error::Domain(format!(
                "grid needs n_xi, n_eta >= 16, got {} x {}",
                self.n_xi, self.n_eta
            )));
        }
        if !(self.xi_max > 3.0) {
            return Err(Error::Domain(format!("xi_max must exceed 3, got {}", self.xi_max)));
        }
        Ok(())
    }

    /// Same cutoff with every cell halved `k` times.
    pub fn refined(&self, k: u32) -> Self {
        Self { n_xi: self.n_xi << k, n_eta: self.n_eta << k, xi_max: self.xi_max }
    }

    pub fn h_s(&self) -> f64 {
        1.0 / self.n_xi as f64
    }

    pub fn h_eta(&self) -> f64 {
        2.0 / self.n_eta as f64
    }

    fn xi_of_s(&self, s: f64) -> f64 {
        1.0 + (self.xi_max - 1.0) * s * s
    }

    fn dxi_ds(&self, s: f64) -> f64 {
        2.0 * (self.xi_max - 1.0) * s
    }

    /// Cell-center xi values.
    pub fn xi_nodes(&self) -> Vec<f64> {
        (0..self.n_xi).map(|i| self.xi_of_s((i as f64 + 0.5) * self.h_s())).collect()
    }

    /// Cell-center eta values.
    pub fn eta_nodes(&self) -> Vec<f64> {
        (0..self.n_eta).map(|j| -1.0 + (j as f64 + 0.5) * self.h_eta()).collect()
    }

    /// Flat index with eta running fastest.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_eta + j
    }

    pub fn len(&self) -> usize {
        self.n_xi * self.n_eta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Discrete pencil K psi = E M psi. M is diagonal (lumped cell measure).
#[derive(Debug, Clone)]
pub struct Discretization {
    pub r: f64,
    pub spec: GridSpec,
    pub stiffness: SymBand,
    pub weight: Vec<f64>,
    /// Cell volumes ds deta (dxi/ds), for quadrature of grid functions.
    pub cell_measure: Vec<f64>,
}

impl Discretization {
    pub fn rayleigh_quotient(&self, x: &[f64]) -> f64 {
        let kx = self.stiffness.mul(x);
        let num: f64 = kx.iter().zip(x).map(|(a, b)| a * b).sum();
        let den: f64 = self.weight.iter().zip(x).map(|(w, v)| w * v * v).sum();
        num / den
    }

    /// max_i |(K x - E M x)_i| / max_i |(K x)_i|.
    pub fn residual(&self, x: &[f64], e: f64) -> f64 {
        let kx = self.stiffness.mul(x);
        let scale = kx.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        kx.iter()
            .zip(&self.weight)
            .zip(x)
            .map(|((k, w), v)| (k - e * w * v).abs())
            .fold(0.0f64, f64::max)
            / scale
    }
}

/// Assemble the discrete operator for separation `r`.
pub fn assemble(r: f64, spec: &GridSpec) -> Result<Discretization> {
    Geometry::new(r)?;
    spec.validate()?;
    let (nx, ne) = (spec.n_xi, spec.n_eta);
    let hs = spec.h_s();
    let he = spec.h_eta();
    let xs = spec.xi_nodes();
    let es = spec.eta_nodes();
    let mut k = SymBand::zeros(spec.len(), ne);
    let mut weight = vec![0.0; spec.len()];
    let mut cell_measure = vec![0.0; spec.len()];

    for i in 0..nx {
        let s = (i as f64 + 0.5) * hs;
        let jac = spec.dxi_ds(s);
        let xi = xs[i];
        // flux coefficient (xi^2 - 1)/(dxi/ds) on the upper s-face
        let s_face = (i as f64 + 1.0) * hs;
        let xi_face = spec.xi_of_s(s_face);
        let c_up = (xi_face * xi_face - 1.0) / spec.dxi_ds(s_face) * he / hs;
        for j in 0..ne {
            let id = spec.index(i, j);
            let eta = es[j];
            let vol = jac * hs * he;
            cell_measure[id] = vol;
            weight[id] = 0.5 * r * r * (xi * xi - eta * eta) * vol;
            k.add(id, id, -2.0 * r * xi * vol);

            if i + 1 < nx {
                let nb = spec.index(i + 1, j);
                k.add(id, id, c_up);
                k.add(nb, nb, c_up);
                k.add(id, nb, -c_up);
            } else {
                // Dirichlet at xi_max, half a cell away
                k.add(id, id, 2.0 * c_up);
            }
            if j + 1 < ne {
                let eta_face = -1.0 + (j as f64 + 1.0) * he;
                let c = (1.0 - eta_face * eta_face) * jac * hs / he;
                let nb = spec.index(i, j + 1);
                k.add(id, id, c);
                k.add(nb, nb, c);
                k.add(id, nb, -c);
            }
        }
    }
    Ok(Discretization { r, spec: *spec, stiffness: k, weight, cell_measure })
}

/// Lowest eigenpair on one grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridEigen {
    pub spec: GridSpec,
    pub e_elec: f64,
    pub iterations: usize,
    pub residual: f64,
    /// Eigenvector on cell centers, positive, scaled to sum(M psi^2) = 1.
    #[serde(skip)]
    pub vector: Vec<f64>,
}

impl GridEigen {
    /// Max |psi(eta) - psi(-eta)| relative to max |psi|.
    pub fn fold_difference(&self) -> f64 {
        let s = &self.spec;
        let peak = self.vector.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut d = 0.0f64;
        for i in 0..s.n_xi {
            for j in 0..s.n_eta / 2 {
                let a = self.vector[s.index(i, j)];
                let b = self.vector[s.index(i, s.n_eta - 1 - j)];
                d = d.max((a - b).abs());
            }
        }
        d / peak
    }
}

/// Inverse iteration with the fixed shift for the smallest eigenvalue.
pub fn lowest_eigenpair(disc: &Discretization) -> Result<GridEigen> {
    let shifted = disc.stiffness.shifted(-SHIFT, &disc.weight);
    let chol = BandCholesky::factor(&shifted).ok_or_else(|| {
        Error::Domain("shifted operator not positive definite: shift is not below the spectrum".into())
    })?;
    let spec = &disc.spec;
    let xs = spec.xi_nodes();
    // nodeless even start
    let mut x: Vec<f64> = (0..spec.len()).map(|id| (-(xs[id / spec.n_eta] - 1.0).sqrt()).exp()).collect();
    let mut e_prev = disc.rayleigh_quotient(&x);
    let mut residual = f64::INFINITY;
    for it in 1..=MAX_ITERATIONS {
        let rhs: Vec<f64> = x.iter().zip(&disc.weight).map(|(v, w)| v * w).collect();
        let mut z = chol.solve(&rhs);
        let nrm = z.iter().zip(&disc.weight).map(|(v, w)| w * v * v).sum::<f64>().sqrt();
        z.iter_mut().for_each(|v| *v /= nrm);
        x = z;
        let e = disc.rayleigh_quotient(&x);
        residual = disc.residual(&x, e);
        if (e - e_prev).abs() <= 1e-14 * e.abs() && residual < 1e-10 {
            if x.iter().sum::<f64>() < 0.0 {
                x.iter_mut().for_each(|v| *v = -*v);
            }
            return Ok(GridEigen { spec: *spec, e_elec: e, iterations: it, residual, vector: x });
        }
        e_prev = e;
    }
    Err(Error::Stagnation { iterations: MAX_ITERATIONS, residual })
}

/// Nested-grid estimates and their Richardson extrapolation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleResult {
    pub r: f64,
    pub grids: Vec<GridEigen>,
    /// E_elec per grid, coarse to fine.
    pub estimates: Vec<f64>,
    /// Richardson values (4 E_{k+1} - E_k)/3 for successive pairs.
    pub extrapolants: Vec<f64>,
    pub e_elec: f64,
    /// |last extrapolant - previous extrapolant|.
    pub error_estimate: f64,
}

impl OracleResult {
    pub fn e_tot(&self) -> f64 {
        self.e_elec + 1.0 / self.r
    }
}

/// Solve on each grid (coarse to fine, each halving the cell size) and
/// extrapolate assuming an O(h^2) leading error.
pub fn ground_energy(r: f64, specs: &[GridSpec]) -> Result<OracleResult> {
    use rayon::prelude::*;
    if specs.len() < 3 {
        return Err(Error::Domain("need at least three nested grids".into()));
    }
    for w in specs.windows(2) {
        if w[1].n_xi != 2 * w[0].n_xi || w[1].n_eta != 2 * w[0].n_eta || w[1].xi_max != w[0].xi_max {
            return Err(Error::Domain("grids must be nested halvings with a common xi_max".into()));
        }
    }
    let grids = specs
        .par_iter()
        .map(|s| assemble(r, s).and_then(|d| lowest_eigenpair(&d)))
        .collect::<Result<Vec<_>>>()?;
    let estimates: Vec<f64> = grids.iter().map(|g| g.e_elec).collect();
    let extrapolants: Vec<f64> = estimates.windows(2).map(|w| (4.0 * w[1] - w[0]) / 3.0).collect();
    let n = extrapolants.len();
    let e_elec = extrapolants[n - 1];
    let error_estimate = (extrapolants[n - 1] - extrapolants[n - 2]).abs();
    Ok(OracleResult { r, grids, estimates, extrapolants, e_elec, error_estimate })
}

/// Default three-grid ladder for separation `r`.
pub fn default_ladder(r: f64) -> Result<Vec<GridSpec>> {
    let base = GridSpec::for_separation(r, 40, 24)?;
    Ok((0..3).map(|k| base.refined(k)).collect())
}
