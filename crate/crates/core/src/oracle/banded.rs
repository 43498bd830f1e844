//! Banded Cholesky factorization for symmetric positive definite matrices.

/// Symmetric band matrix stored by lower diagonals: `band[i][k]` is A(i, i-k)
/// for k = 0..=bandwidth.
#[derive(Debug, Clone)]
pub struct SymBand {
    pub n: usize,
    pub bandwidth: usize,
    band: Vec<f64>,
}

impl SymBand {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        Self { n, bandwidth, band: vec![0.0; n * (bandwidth + 1)] }
    }

    #[inline]
    fn idx(&self, i: usize, k: usize) -> usize {
        i * (self.bandwidth + 1) + k
    }

    /// A(i, j) for |i - j| <= bandwidth; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        let k = i - j;
        if k > self.bandwidth {
            0.0
        } else {
            self.band[self.idx(i, k)]
        }
    }

    /// Add to A(i, j) (and implicitly A(j, i)).
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        let k = i - j;
        assert!(k <= self.bandwidth, "entry outside band");
        let id = self.idx(i, k);
        self.band[id] += v;
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let d = self.band[self.idx(i, 0)];
            y[i] += d * x[i];
            for k in 1..=self.bandwidth.min(i) {
                let a = self.band[self.idx(i, k)];
                y[i] += a * x[i - k];
                y[i - k] += a * x[i];
            }
        }
        y
    }

    /// `self + s * diag`.
    pub fn shifted(&self, s: f64, diag: &[f64]) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            let id = out.idx(i, 0);
            out.band[id] += s * diag[i];
        }
        out
    }
}

/// Lower-triangular banded Cholesky factor.
#[derive(Debug, Clone)]
pub struct BandCholesky {
    l: SymBand,
}

impl BandCholesky {
    /// Returns `None` if the matrix is not positive definite.
    pub fn factor(a: &SymBand) -> Option<Self> {
        let mut l = a.clone();
        let bw = l.bandwidth;
        for j in 0..l.n {
            let mut d = l.band[l.idx(j, 0)];
            for k in 1..=bw.min(j) {
                let v = l.band[l.idx(j, k)];
                d -= v * v;
            }
            if !(d > 0.0) {
                return None;
            }
            let d = d.sqrt();
            let id = l.idx(j, 0);
            l.band[id] = d;
            for i in j + 1..(j + bw + 1).min(l.n) {
                // L(i, j) = (A(i, j) - sum_k L(i, k) L(j, k)) / L(j, j)
                let mut s = l.band[l.idx(i, i - j)];
                let kmin = i.saturating_sub(bw);
                for k in kmin..j {
                    s -= l.band[l.idx(i, i - k)] * l.band[l.idx(j, j - k)];
                }
                let id = l.idx(i, i - j);
                l.band[id] = s / d;
            }
        }
        Some(Self { l })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let l = &self.l;
        let bw = l.bandwidth;
        let n = l.n;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 1..=bw.min(i) {
                s -= l.band[l.idx(i, k)] * y[i - k];
            }
            y[i] = s / l.band[l.idx(i, 0)];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in 1..=bw.min(n - 1 - i) {
                s -= l.band[l.idx(i + k, k)] * y[i + k];
            }
            y[i] = s / l.band[l.idx(i, 0)];
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};

    #[test]
    fn matches_dense_solve() {
        let n = 30;
        let bw = 4;
        let mut a = SymBand::zeros(n, bw);
        let mut dense = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            a.add(i, i, 10.0 + i as f64 * 0.1);
            dense[(i, i)] = 10.0 + i as f64 * 0.1;
            for k in 1..=bw.min(i) {
                let v = -1.0 / (k as f64 + (i % 3) as f64);
                a.add(i, i - k, v);
                dense[(i, i - k)] = v;
                dense[(i - k, i)] = v;
            }
        }
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let x = BandCholesky::factor(&a).unwrap().solve(&b);
        let xd = dense.clone().cholesky().unwrap().solve(&DVector::from_vec(b.clone()));
        for i in 0..n {
            assert!((x[i] - xd[i]).abs() < 1e-13);
        }
        let ax = a.mul(&x);
        for i in 0..n {
            assert!((ax[i] - b[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn indefinite_rejected() {
        let mut a = SymBand::zeros(2, 1);
        a.add(0, 0, 1.0);
        a.add(1, 1, 1.0);
        a.add(1, 0, 2.0);
        assert!(BandCholesky::factor(&a).is_none());
    }
}
