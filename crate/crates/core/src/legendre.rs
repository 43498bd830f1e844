//! Legendre polynomials and Gauss-Legendre quadrature.

/// P_0..=P_n at x by the three-term recurrence.
pub fn legendre_all(n: usize, x: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(n + 1);
    p.push(1.0);
    if n == 0 {
        return p;
    }
    p.push(x);
    for l in 1..n {
        let lf = l as f64;
        let next = ((2.0 * lf + 1.0) * x * p[l] - lf * p[l - 1]) / (lf + 1.0);
        p.push(next);
    }
    p
}

/// P_n(x) and P_n'(x).
pub fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for l in 1..n {
        let lf = l as f64;
        let p2 = ((2.0 * lf + 1.0) * x * p1 - lf * p0) / (lf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = if (1.0 - x * x).abs() < 1e-300 {
        // endpoint value n(n+1)/2 * x^(n+1)
        0.5 * nf * (nf + 1.0) * if n.is_multiple_of(2) { x } else { 1.0 }
    } else {
        nf * (p0 - x * p1) / (1.0 - x * x)
    };
    (p1, dp)
}

/// Orthonormal Legendre scale factor sqrt((2l+1)/2).
#[inline]
pub fn norm_factor(l: usize) -> f64 {
    ((2 * l + 1) as f64 / 2.0).sqrt()
}

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be >= 1");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess, then Newton
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Integrate f over [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn low_order_values() {
        let p = legendre_all(4, 0.5);
        assert_relative_eq!(p[2], 0.5 * (3.0 * 0.25 - 1.0), epsilon = 1e-15);
        assert_relative_eq!(p[3], 0.5 * (5.0 * 0.125 - 1.5), epsilon = 1e-15);
        assert_relative_eq!(p[4], (35.0 * 0.0625 - 30.0 * 0.25 + 3.0) / 8.0, epsilon = 1e-15);
        let (v, d) = legendre_with_derivative(3, 0.3);
        assert_relative_eq!(v, 0.5 * (5.0 * 0.027 - 0.9), epsilon = 1e-15);
        assert_relative_eq!(d, 0.5 * (15.0 * 0.09 - 3.0), epsilon = 1e-14);
    }

    #[test]
    fn quadrature_is_exact_for_polynomials() {
        for n in [1usize, 2, 5, 16, 33, 64] {
            let q = GaussLegendre::new(n);
            assert_relative_eq!(q.weights.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
            let deg = 2 * n - 1;
            let exact = if deg % 2 == 0 { 2.0 / (deg as f64 + 1.0) } else { 0.0 };
            let got = q.integrate(-1.0, 1.0, |x| x.powi(deg as i32) + if deg % 2 == 1 { x.powi(deg as i32 - 1) } else { 0.0 });
            let exact2 = exact + if deg % 2 == 1 { 2.0 / deg as f64 } else { 0.0 };
            assert_relative_eq!(got, exact2, epsilon = 1e-13);
        }
    }

    #[test]
    fn orthonormality() {
        let q = GaussLegendre::new(40);
        for l in (0..20).step_by(3) {
            for k in (0..20).step_by(2) {
                let v = q.integrate(-1.0, 1.0, |x| {
                    let p = legendre_all(20, x);
                    p[l] * p[k] * norm_factor(l) * norm_factor(k)
                });
                let e = if l == k { 1.0 } else { 0.0 };
                assert!((v - e).abs() < 1e-13, "l={l} k={k} v={v}");
            }
        }
    }
}
