//! Closed-form integrals over normalized s-type Gaussians on the z-axis.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::boys::boys_f0_unchecked;
use crate::coords::Geometry;

/// Which term of the three-center expansion a primitive belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Group {
    A,
    B,
    U,
}

impl Group {
    pub fn mirror(self) -> Self {
        match self {
            Group::A => Group::B,
            Group::B => Group::A,
            Group::U => Group::U,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Group::A => "A",
            Group::B => "B",
            Group::U => "U",
        }
    }
}

/// Normalized s Gaussian (2 alpha/pi)^{3/4} exp(-alpha |r - c|^2), c on the axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Primitive {
    pub center_z: f64,
    pub exponent: f64,
    pub group: Group,
}

impl Primitive {
    pub fn new(center_z: f64, exponent: f64, group: Group) -> Self {
        Self { center_z, exponent, group }
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        (2.0 * self.exponent / PI).powf(0.75)
    }

    pub fn value(&self, p: [f64; 3]) -> f64 {
        let dz = p[2] - self.center_z;
        let r2 = p[0] * p[0] + p[1] * p[1] + dz * dz;
        self.norm() * (-self.exponent * r2).exp()
    }

    /// Value and first two z-derivatives on the axis.
    pub fn axial(&self, z: f64) -> (f64, f64, f64) {
        let a = self.exponent;
        let dz = z - self.center_z;
        let g = self.norm() * (-a * dz * dz).exp();
        (g, -2.0 * a * dz * g, (4.0 * a * a * dz * dz - 2.0 * a) * g)
    }

    pub fn mirrored(&self) -> Self {
        Self { center_z: -self.center_z, exponent: self.exponent, group: self.group.mirror() }
    }
}

struct Pair {
    gamma: f64,
    mu: f64,
    d2: f64,
    center: f64,
}

#[inline]
fn pair(a: &Primitive, b: &Primitive) -> Pair {
    let gamma = a.exponent + b.exponent;
    let mu = a.exponent * b.exponent / gamma;
    let d = a.center_z - b.center_z;
    Pair {
        gamma,
        mu,
        d2: d * d,
        center: (a.exponent * a.center_z + b.exponent * b.center_z) / gamma,
    }
}

pub fn overlap(a: &Primitive, b: &Primitive) -> f64 {
    let p = pair(a, b);
    let pre = 2.0 * (a.exponent * b.exponent).sqrt() / p.gamma;
    (-p.mu * p.d2).exp() * pre * pre.sqrt()
}

pub fn kinetic(a: &Primitive, b: &Primitive) -> f64 {
    let p = pair(a, b);
    p.mu * (3.0 - 2.0 * p.mu * p.d2) * overlap(a, b)
}

/// Attraction to both unit nuclei of `g`.
pub fn nuclear_attraction(a: &Primitive, b: &Primitive, g: &Geometry) -> f64 {
    let p = pair(a, b);
    let pre = a.norm() * b.norm() * 2.0 * PI / p.gamma * (-p.mu * p.d2).exp();
    [(g.z_a(), 1.0), (g.z_b(), 1.0)]
        .iter()
        .map(|&(zc, charge)| {
            let dc = p.center - zc;
            -charge * pre * boys_f0_unchecked(p.gamma * dc * dc)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prim(z: f64, a: f64) -> Primitive {
        Primitive::new(z, a, Group::A)
    }

    #[test]
    fn overlap_examples() {
        let a = prim(0.3, 1.7);
        assert!((overlap(&a, &a) - 1.0).abs() < 1e-15);
        assert!(overlap(&prim(0.0, 1.0), &prim(100.0, 1.0)) < 1e-300);
        let s = overlap(&prim(0.0, 1.0), &prim(1.0, 1.0));
        assert!((s - (-0.5f64).exp()).abs() < 1e-15);
        let (x, y) = (prim(0.1, 0.4), prim(-0.7, 3.0));
        assert_eq!(overlap(&x, &y), overlap(&y, &x));
        assert!(overlap(&x, &y) > 0.0 && overlap(&x, &y) <= 1.0);
    }

    #[test]
    fn kinetic_coincident() {
        let a = prim(0.0, 2.5);
        assert!((kinetic(&a, &a) - 1.5 * 2.5).abs() < 1e-14);
        let (x, y) = (prim(0.1, 0.4), prim(-0.7, 3.0));
        assert!((kinetic(&x, &y) - kinetic(&y, &x)).abs() < 1e-15);
    }

    /// Quadrature oracle for <a|b> and <a|-1/|r - c||b> in cylindrical coordinates.
    #[test]
    fn attraction_against_quadrature() {
        use crate::legendre::GaussLegendre;
        let g = Geometry::new(1.4).unwrap();
        let a = Primitive::new(-0.7, 0.8, Group::A);
        let b = Primitive::new(0.0, 1.3, Group::U);
        // spherical coordinates about each nucleus remove the 1/r singularity
        let q = GaussLegendre::new(96);
        let mut total = 0.0;
        for zc in [g.z_a(), g.z_b()] {
            let v = q.integrate(0.0, 12.0, |r| {
                q.integrate(-1.0, 1.0, |c| {
                    let s = (1.0 - c * c).sqrt();
                    let pt = [r * s, 0.0, zc + r * c];
                    -2.0 * PI * r * a.value(pt) * b.value(pt)
                })
            });
            total += v;
        }
        let got = nuclear_attraction(&a, &b, &g);
        assert!((got - total).abs() < 1e-10, "{got} vs {total}");
    }

    #[test]
    fn one_center_quotient() {
        // a lone nucleus: place the second one far away and subtract its tail
        let g = Geometry::new(1e6).unwrap();
        let alpha = 0.9;
        let a = Primitive::new(g.z_a(), alpha, Group::A);
        let q = kinetic(&a, &a) + nuclear_attraction(&a, &a, &g);
        let closed = 1.5 * alpha - (8.0 * alpha / PI).sqrt();
        assert!((q - closed).abs() < 2e-6, "{q} vs {closed}");

        // golden-section oracle on the closed form
        let f = |al: f64| 1.5 * al - (8.0 * al / PI).sqrt();
        let (mut lo, mut hi) = (1e-3, 5.0);
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..200 {
            let x1 = hi - phi * (hi - lo);
            let x2 = lo + phi * (hi - lo);
            if f(x1) < f(x2) {
                hi = x2;
            } else {
                lo = x1;
            }
        }
        let amin = 0.5 * (lo + hi);
        assert!((amin - 8.0 / (9.0 * PI)).abs() < 1e-6);
        assert!((f(amin) + 4.0 / (3.0 * PI)).abs() < 1e-14);
    }
}
