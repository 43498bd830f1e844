use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{axial_profile, classify_topology, Eq4Fit, SourceSpec, TopologyClass, DEFAULT_WINDOW, EPS_FLAT, EPS_REL};
use crate::error::{Error, Result};

const BRACKET_WIDTH: f64 = 1e-4;
const PROFILE_SAMPLES: usize = 401;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub r: f64,
    pub kappa0: f64,
    pub class: TopologyClass,
    pub fit: Option<Eq4Fit>,
}

/// A sign change of kappa0 localized to [lo, hi].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub lo: f64,
    pub hi: f64,
    pub kappa_lo: f64,
    pub kappa_hi: f64,
}

impl Transition {
    pub fn contains(&self, r: f64) -> bool {
        self.lo <= r && r <= self.hi
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalScan {
    pub points: Vec<ScanPoint>,
    pub transitions: Vec<Transition>,
    pub three_max: Vec<f64>,
}

impl ScanPoint {
    pub fn evaluate(spec: &SourceSpec, r: f64) -> Result<Self> {
        let src = spec.build(r)?;
        let prof = axial_profile(&src, 0.5 * r + 2.0, PROFILE_SAMPLES)?;
        let rep = classify_topology(&prof, EPS_REL, EPS_FLAT)?;
        Ok(Self { r, kappa0: rep.kappa0, class: rep.class, fit: src.eq4_fit(DEFAULT_WINDOW).ok() })
    }
}

fn kappa0_at(spec: &SourceSpec, r: f64) -> Result<f64> {
    Ok(spec.build(r)?.kappa0())
}

/// Bisect every sign change of kappa0 between neighbouring points.
pub fn refine_transitions(spec: &SourceSpec, points: &[ScanPoint]) -> Result<Vec<Transition>> {
    points
        .windows(2)
        .filter(|w| (w[0].kappa0 < 0.0) != (w[1].kappa0 < 0.0))
        .map(|w| {
            let (mut lo, mut hi) = (w[0].r, w[1].r);
            let (mut klo, mut khi) = (w[0].kappa0, w[1].kappa0);
            while hi - lo > BRACKET_WIDTH {
                let mid = 0.5 * (lo + hi);
                let km = kappa0_at(spec, mid)?;
                if (km < 0.0) == (klo < 0.0) {
                    lo = mid;
                    klo = km;
                } else {
                    hi = mid;
                    khi = km;
                }
            }
            Ok(Transition { lo, hi, kappa_lo: klo, kappa_hi: khi })
        })
        .collect()
}

/// Classify at each R (in parallel) and locate kappa0 sign changes.
pub fn scan_points(spec: &SourceSpec, rs: &[f64]) -> Result<CriticalScan> {
    let points = rs.par_iter().map(|&r| ScanPoint::evaluate(spec, r)).collect::<Result<Vec<_>>>()?;
    let transitions = refine_transitions(spec, &points)?;
    let three_max = points.iter().filter(|p| p.class == TopologyClass::ThreeMax).map(|p| p.r).collect();
    Ok(CriticalScan { points, transitions, three_max })
}

/// Uniform scan of [r_lo, r_hi] with `n` points.
pub fn critical_r_scan(spec: &SourceSpec, r_lo: f64, r_hi: f64, n: usize) -> Result<CriticalScan> {
    if !(r_lo > 0.0 && r_lo < r_hi) {
        return Err(Error::Domain(format!("need 0 < R_lo < R_hi, got [{r_lo}, {r_hi}]")));
    }
    if n < 8 {
        return Err(Error::Domain(format!("scan needs at least 8 points, got {n}")));
    }
    let rs: Vec<f64> = (0..n).map(|k| r_lo + (r_hi - r_lo) * k as f64 / (n - 1) as f64).collect();
    scan_points(spec, &rs)
}
