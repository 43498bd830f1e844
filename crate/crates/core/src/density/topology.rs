use serde::{Deserialize, Serialize};

use super::{DensityProfile, Eq4Fit, SourceTag};
use crate::error::{Error, Result};

pub const EPS_REL: f64 = 1e-8;
/// Flatness threshold on |kappa0|, multiplied by the profile's peak density.
pub const EPS_FLAT: f64 = 1e-4;
const SYMMETRY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TopologyClass {
    OneMax,
    Flat,
    TwoMax,
    ThreeMax,
}

impl TopologyClass {
    pub fn label(self) -> &'static str {
        match self {
            TopologyClass::OneMax => "ONE_MAX",
            TopologyClass::Flat => "FLAT",
            TopologyClass::TwoMax => "TWO_MAX",
            TopologyClass::ThreeMax => "THREE_MAX",
        }
    }
}

impl std::fmt::Display for TopologyClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtremumKind {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub z: f64,
    pub rho: f64,
    pub kind: ExtremumKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyReport {
    pub source: Option<SourceTag>,
    pub r: f64,
    pub class: TopologyClass,
    pub extrema: Vec<Extremum>,
    pub kappa0: f64,
    /// Absolute flatness threshold used.
    pub eps_flat_abs: f64,
    pub eq4_fit: Option<Eq4Fit>,
}

/// Strict interior extrema. Differences below `tol` count as level, and a
/// level run between a rise and a fall is reported at its middle sample.
fn extrema(z: &[f64], rho: &[f64], tol: f64) -> Vec<Extremum> {
    let mut out = Vec::new();
    // (sign, index of the first sample of the step)
    let mut last: Option<(i8, usize)> = None;
    for i in 0..rho.len() - 1 {
        let d = rho[i + 1] - rho[i];
        let s = if d > tol {
            1
        } else if d < -tol {
            -1
        } else {
            0
        };
        if s == 0 {
            continue;
        }
        if let Some((prev, j)) = last {
            if prev != s {
                // turning samples span j+1 ..= i
                let k = (j + 1 + i) / 2;
                let kind = if prev > 0 { ExtremumKind::Max } else { ExtremumKind::Min };
                out.push(Extremum { z: z[k], rho: rho[k], kind });
            }
        }
        last = Some((s, i));
    }
    out
}

/// Class implied by an extrema list; `r` locates the nuclei and
/// `flat` says whether |kappa0| is below the flatness threshold.
pub fn class_from_extrema(extrema: &[Extremum], r: f64, flat: bool) -> Result<TopologyClass> {
    let at_center = |e: &Extremum| e.z.abs() <= 1e-12 * r.max(1.0);
    let separating = extrema.iter().any(|e| !at_center(e) && e.z.abs() < 0.5 * r * (1.0 - 1e-9));
    if flat && !separating {
        return Ok(TopologyClass::Flat);
    }
    let center_max = extrema.iter().any(|e| e.kind == ExtremumKind::Max && at_center(e));
    let off_max = extrema.iter().any(|e| e.kind == ExtremumKind::Max && !at_center(e));
    match (center_max, off_max) {
        (true, false) => Ok(TopologyClass::OneMax),
        (false, true) => Ok(TopologyClass::TwoMax),
        (true, true) => Ok(TopologyClass::ThreeMax),
        (false, false) => Err(Error::Domain("profile has no interior maximum".into())),
    }
}

/// Classify the axial density. `eps_flat` is scaled by the peak density.
pub fn classify_topology(p: &DensityProfile, eps_rel: f64, eps_flat: f64) -> Result<TopologyReport> {
    let asym = p.asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(Error::AsymmetricProfile(asym));
    }
    let mid = p.mid();
    if p.z[mid].abs() > 1e-15 {
        return Err(Error::Domain("profile grid does not contain z = 0".into()));
    }
    let peak = p.peak();
    let kappa0 = p.kappa0.unwrap_or_else(|| {
        let h = p.z[mid + 1] - p.z[mid];
        (p.rho[mid + 1] - 2.0 * p.rho[mid] + p.rho[mid - 1]) / (h * h)
    });
    let eps_flat_abs = eps_flat * peak;
    let ext = extrema(&p.z, &p.rho, eps_rel * peak);
    let class = class_from_extrema(&ext, p.r, kappa0.abs() < eps_flat_abs)?;
    Ok(TopologyReport { source: p.source, r: p.r, class, extrema: ext, kappa0, eps_flat_abs, eq4_fit: None })
}
