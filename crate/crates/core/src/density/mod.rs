//! Electron density evaluation and axial topology analysis.

mod fit;
mod scan;
mod topology;

use serde::{Deserialize, Serialize};

use crate::coords::{axial_to_spheroidal, Geometry};
use crate::error::{Error, Result};
use crate::gaussian::{variational_ground, BasisSpec, VariationalSolution};
use crate::separated::{solve_ground, SigmaGSolution};

pub use fit::{fit_two_exponential, midpoint_fit, segment_fit, Eq4Fit, DEFAULT_WINDOW};
pub use scan::{critical_r_scan, refine_transitions, scan_points, CriticalScan, ScanPoint, Transition};
pub use topology::{
    class_from_extrema, classify_topology, Extremum, ExtremumKind, TopologyClass, TopologyReport, EPS_FLAT,
    EPS_REL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SourceTag {
    Exact,
    Variational,
}

impl SourceTag {
    pub fn label(self) -> &'static str {
        match self {
            SourceTag::Exact => "exact",
            SourceTag::Variational => "variational",
        }
    }
}

/// A normalized one-electron wavefunction whose density can be sampled.
#[derive(Debug, Clone)]
pub enum Source {
    Exact(Box<SigmaGSolution>),
    Variational(Box<VariationalSolution>),
}

impl Source {
    pub fn tag(&self) -> SourceTag {
        match self {
            Source::Exact(_) => SourceTag::Exact,
            Source::Variational(_) => SourceTag::Variational,
        }
    }

    pub fn r(&self) -> f64 {
        match self {
            Source::Exact(s) => s.r,
            Source::Variational(s) => s.r,
        }
    }

    pub fn geometry(&self) -> Geometry {
        Geometry::new(self.r()).expect("source holds a valid R")
    }

    /// Wavefunction at a Cartesian point. The flag is set when the exact
    /// radial function was extended by its asymptotic tail.
    pub fn psi(&self, p: [f64; 3]) -> (f64, bool) {
        match self {
            Source::Exact(s) => {
                let sp = s.geometry().cartesian_to_spheroidal(p);
                s.psi(sp.xi, sp.eta)
            }
            Source::Variational(v) => (v.psi(p), false),
        }
    }

    pub fn rho(&self, p: [f64; 3]) -> (f64, bool) {
        let (v, flag) = self.psi(p);
        (v * v, flag)
    }

    /// Density on the molecular axis.
    pub fn rho_axial(&self, z: f64) -> (f64, bool) {
        match self {
            Source::Exact(s) => {
                let sp = axial_to_spheroidal(z, &s.geometry());
                let (v, flag) = s.psi(sp.xi, sp.eta);
                (v * v, flag)
            }
            Source::Variational(v) => {
                let psi = v.psi_axial(z).0;
                (psi * psi, false)
            }
        }
    }

    /// Second z-derivative of the density at the bond midpoint.
    pub fn kappa0(&self) -> f64 {
        match self {
            Source::Exact(s) => {
                let (y0, dy0, d2y0) = s.angular.midpoint();
                let x1 = s.radial.eval(1.0).0;
                let scale = 2.0 / s.r;
                2.0 * (s.norm_const * x1 * scale).powi(2) * (dy0 * dy0 + y0 * d2y0)
            }
            Source::Variational(v) => {
                let (psi, d1, d2) = v.psi_axial(0.0);
                2.0 * (d1 * d1 + psi * d2)
            }
        }
    }

    /// Two-exponential fit of the midpoint behaviour; see [`midpoint_fit`].
    pub fn eq4_fit(&self, window: f64) -> Result<Eq4Fit> {
        match self {
            Source::Exact(s) => midpoint_fit(s, window),
            Source::Variational(v) => {
                let p_sq = -0.5 * v.e_var * v.r * v.r;
                let a = crate::separated::angular_converged(p_sq)?.a;
                let half = 0.5 * v.r;
                segment_fit(|eta| v.psi_axial(half * eta).0, a, window)
            }
        }
    }
}

/// Which solver produces a source at a given R.
#[derive(Debug, Clone)]
pub enum SourceSpec {
    Exact { tol: f64 },
    Variational { basis: BasisSpec, tau: f64 },
}

impl SourceSpec {
    pub fn tag(&self) -> SourceTag {
        match self {
            SourceSpec::Exact { .. } => SourceTag::Exact,
            SourceSpec::Variational { .. } => SourceTag::Variational,
        }
    }

    pub fn build(&self, r: f64) -> Result<Source> {
        match self {
            SourceSpec::Exact { tol } => Ok(Source::Exact(Box::new(solve_ground(r, *tol)?))),
            SourceSpec::Variational { basis, tau } => {
                let g = Geometry::new(r)?;
                Ok(Source::Variational(Box::new(variational_ground(basis, &g, *tau)?)))
            }
        }
    }
}

/// Density values at Cartesian points, with the number of points that
/// needed the asymptotic radial tail.
pub fn eval_density(source: &Source, points: &[[f64; 3]]) -> (Vec<f64>, usize) {
    let mut flagged = 0;
    let rho = points
        .iter()
        .map(|&p| {
            let (v, f) = source.rho(p);
            flagged += f as usize;
            v
        })
        .collect();
    (rho, flagged)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    pub source: Option<SourceTag>,
    pub r: f64,
    pub z: Vec<f64>,
    pub rho: Vec<f64>,
    /// Analytic midpoint curvature when the source provides it.
    pub kappa0: Option<f64>,
    pub extrapolated: usize,
}

impl DensityProfile {
    /// Profile from raw samples; `z` must be a symmetric grid through 0.
    pub fn from_samples(r: f64, z: Vec<f64>, rho: Vec<f64>) -> Result<Self> {
        if z.len() != rho.len() || z.len() < 5 || z.len().is_multiple_of(2) {
            return Err(Error::Domain("profile needs an odd number (>= 5) of samples".into()));
        }
        Ok(Self { source: None, r, z, rho, kappa0: None, extrapolated: 0 })
    }

    pub fn mid(&self) -> usize {
        self.z.len() / 2
    }

    pub fn peak(&self) -> f64 {
        self.rho.iter().copied().fold(0.0, f64::max)
    }

    /// Largest |rho(z) - rho(-z)| relative to the peak.
    pub fn asymmetry(&self) -> f64 {
        let n = self.z.len();
        let peak = self.peak().max(f64::MIN_POSITIVE);
        (0..n / 2)
            .map(|i| {
                let j = n - 1 - i;
                let dz = (self.z[i] + self.z[j]).abs() / self.z[j].abs().max(1.0);
                ((self.rho[i] - self.rho[j]).abs() / peak).max(dz)
            })
            .fold(0.0, f64::max)
    }
}

/// Positive half of the axial grid: a refined block on [0, R] (or [0, R/2]
/// when R exceeds the half width) with R/2 on a node, then a uniform block.
fn half_grid(r: f64, half_width: f64, m: usize) -> Vec<f64> {
    let z_in = if r < half_width { r } else { 0.5 * r };
    let mut m_in = (m / 2).max(2);
    if z_in == r && m_in % 2 == 1 {
        m_in -= 1;
    }
    let m_out = m - m_in;
    let mut z: Vec<f64> = (1..=m_in).map(|k| z_in * k as f64 / m_in as f64).collect();
    if z_in == r {
        z[m_in / 2 - 1] = 0.5 * r;
    }
    z.extend((1..=m_out).map(|k| z_in + (half_width - z_in) * k as f64 / m_out as f64));
    z
}

pub fn axial_profile(source: &Source, half_width: f64, n: usize) -> Result<DensityProfile> {
    let r = source.r();
    if n < 201 || n.is_multiple_of(2) {
        return Err(Error::Domain(format!("profile needs an odd sample count >= 201, got {n}")));
    }
    if !(half_width >= 0.5 * r + 2.0) {
        return Err(Error::Domain(format!("half width {half_width} must be at least R/2 + 2")));
    }
    let pos = half_grid(r, half_width, n / 2);
    let mut z: Vec<f64> = pos.iter().rev().map(|v| -v).collect();
    z.push(0.0);
    z.extend(pos.iter().copied());
    let mut extrapolated = 0;
    let rho = z
        .iter()
        .map(|&zi| {
            let (v, f) = source.rho_axial(zi);
            extrapolated += f as usize;
            v
        })
        .collect();
    Ok(DensityProfile { source: Some(source.tag()), r, z, rho, kappa0: Some(source.kappa0()), extrapolated })
}

/// Topology class of the exact density at the solution's R.
pub fn exact_class(sol: &SigmaGSolution) -> Result<TopologyClass> {
    let src = Source::Exact(Box::new(sol.clone()));
    let prof = axial_profile(&src, 0.5 * sol.r + 2.0, 401)?;
    Ok(classify_topology(&prof, EPS_REL, EPS_FLAT)?.class)
}
