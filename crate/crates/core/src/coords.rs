//! Prolate spheroidal coordinates for a homonuclear diatomic with nuclei at
//! z = -R/2 (A) and z = +R/2 (B).
//!
//! xi = (r1 + r2)/R and eta = (r1 - r2)/R, where r1 is the distance to A and
//! r2 the distance to B. Atomic units throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fixed nuclear frame. Both nuclear charges are 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    r: f64,
}

impl Geometry {
    pub fn new(r: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::Domain(format!(
                "internuclear separation must be finite and > 0, got {r}"
            )));
        }
        Ok(Self { r })
    }

    /// Internuclear separation in Bohr.
    #[inline]
    pub fn r(&self) -> f64 {
        self.r
    }

    #[inline]
    pub fn z_a(&self) -> f64 {
        -0.5 * self.r
    }

    #[inline]
    pub fn z_b(&self) -> f64 {
        0.5 * self.r
    }

    pub fn charges(&self) -> [f64; 2] {
        [1.0, 1.0]
    }

    /// Nuclear repulsion 1/R.
    #[inline]
    pub fn nuclear_repulsion(&self) -> f64 {
        1.0 / self.r
    }

    /// Distances (r1, r2) from a Cartesian point to nuclei A and B.
    pub fn nuclear_distances(&self, p: [f64; 3]) -> (f64, f64) {
        let rho2 = p[0] * p[0] + p[1] * p[1];
        let da = p[2] - self.z_a();
        let db = p[2] - self.z_b();
        ((rho2 + da * da).sqrt(), (rho2 + db * db).sqrt())
    }

    /// Spheroidal coordinates of an arbitrary Cartesian point.
    ///
    /// Roundoff can push xi slightly below 1 or |eta| above 1; both are clamped.
    pub fn cartesian_to_spheroidal(&self, p: [f64; 3]) -> SpheroidalPoint {
        let (r1, r2) = self.nuclear_distances(p);
        let xi = ((r1 + r2) / self.r).max(1.0);
        let eta = ((r1 - r2) / self.r).clamp(-1.0, 1.0);
        SpheroidalPoint {
            xi,
            eta,
            phi: p[1].atan2(p[0]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpheroidalPoint {
    pub xi: f64,
    pub eta: f64,
    pub phi: f64,
}

impl SpheroidalPoint {
    pub fn new(xi: f64, eta: f64, phi: f64) -> Result<Self> {
        let p = Self { xi, eta, phi };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.xi >= 1.0 && self.xi.is_finite()) {
            return Err(Error::Domain(format!("xi must be >= 1, got {}", self.xi)));
        }
        if !(self.eta.abs() <= 1.0) {
            return Err(Error::Domain(format!("|eta| must be <= 1, got {}", self.eta)));
        }
        if !self.phi.is_finite() {
            return Err(Error::Domain("phi must be finite".into()));
        }
        Ok(())
    }
}

/// Map a spheroidal point to Cartesian (x, y, z).
pub fn to_cartesian(p: SpheroidalPoint, g: &Geometry) -> Result<[f64; 3]> {
    p.validate()?;
    let half = 0.5 * g.r();
    let rho = half * ((p.xi * p.xi - 1.0) * (1.0 - p.eta * p.eta)).max(0.0).sqrt();
    Ok([rho * p.phi.cos(), rho * p.phi.sin(), half * p.xi * p.eta])
}

/// Spheroidal coordinates of a point on the internuclear axis.
pub fn axial_to_spheroidal(z: f64, g: &Geometry) -> SpheroidalPoint {
    let half = 0.5 * g.r();
    if z.abs() <= half {
        SpheroidalPoint {
            xi: 1.0,
            eta: z / half,
            phi: 0.0,
        }
    } else {
        SpheroidalPoint {
            xi: z.abs() / half,
            eta: z.signum(),
            phi: 0.0,
        }
    }
}

/// Jacobian (R^3/8)(xi^2 - eta^2) of dV = J dxi deta dphi.
pub fn volume_element(p: SpheroidalPoint, g: &Geometry) -> Result<f64> {
    p.validate()?;
    let r = g.r();
    Ok(r * r * r / 8.0 * (p.xi * p.xi - p.eta * p.eta))
}
