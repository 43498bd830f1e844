//! Matrix assembly and the generalized eigenproblem H c = E S c.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::basis::BasisSpec;
use super::integrals::{kinetic, nuclear_attraction, overlap, Group, Primitive};
use crate::coords::Geometry;
use crate::error::{Error, Result};

pub const DEFAULT_TAU: f64 = 1e-10;

/// Overlap and core-Hamiltonian matrices of `primitives`.
pub fn matrices_for(primitives: &[Primitive], g: &Geometry) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = primitives.len();
    let mut s = DMatrix::zeros(n, n);
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let (a, b) = (&primitives[i], &primitives[j]);
            let sv = if i == j { 1.0 } else { overlap(a, b) };
            let hv = kinetic(a, b) + nuclear_attraction(a, b, g);
            s[(i, j)] = sv;
            s[(j, i)] = sv;
            h[(i, j)] = hv;
            h[(j, i)] = hv;
        }
    }
    (s, h)
}

pub fn build_matrices(basis: &BasisSpec, g: &Geometry) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    basis.validate()?;
    Ok(matrices_for(&basis.primitives(g), g))
}

/// Lowest root of a generalized symmetric eigenproblem after canonical
/// orthogonalization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedSolution {
    pub energy: f64,
    pub coefficients: Vec<f64>,
    /// Overlap eigenvalues, ascending.
    pub overlap_eigenvalues: Vec<f64>,
    pub retained: usize,
    pub dropped: usize,
}

pub fn solve_generalized(s: &DMatrix<f64>, h: &DMatrix<f64>, tau: f64) -> Result<GeneralizedSolution> {
    let n = s.nrows();
    if n == 0 || s.ncols() != n || h.nrows() != n || h.ncols() != n {
        return Err(Error::Domain("S and H must be square and of equal size".into()));
    }
    let eig = SymmetricEigen::new(s.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let overlap_eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let keep: Vec<usize> = order.iter().copied().filter(|&i| eig.eigenvalues[i] >= tau).collect();
    if keep.is_empty() {
        return Err(Error::EmptyBasis { largest: overlap_eigenvalues[n - 1], tau });
    }
    let m = keep.len();
    let mut x = DMatrix::zeros(n, m);
    for (col, &i) in keep.iter().enumerate() {
        let scale = 1.0 / eig.eigenvalues[i].sqrt();
        x.set_column(col, &(eig.eigenvectors.column(i) * scale));
    }
    let hp = x.transpose() * h * &x;
    let hp = 0.5 * (&hp + hp.transpose());
    let e2 = SymmetricEigen::new(hp);
    let (imin, energy) = e2
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, &v)| (i, v))
        .expect("non-empty");
    let mut c: DVector<f64> = &x * e2.eigenvectors.column(imin);
    // fix the overall sign so the largest component is positive
    let big = c.iter().copied().fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
    if big < 0.0 {
        c.neg_mut();
    }
    let norm = (c.transpose() * s * &c)[(0, 0)].sqrt();
    c /= norm;
    Ok(GeneralizedSolution {
        energy,
        coefficients: c.iter().copied().collect(),
        overlap_eigenvalues,
        retained: m,
        dropped: n - m,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub group: Group,
    /// Euclidean norm of the group's coefficients.
    pub coefficient_norm: f64,
    /// Mulliken population sum_{i in group} c_i (S c)_i; populations sum to 1.
    pub population: f64,
}

/// Variational ground state in a Gaussian basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationalSolution {
    pub r: f64,
    pub e_var: f64,
    pub e_tot_var: f64,
    pub primitives: Vec<Primitive>,
    pub coefficients: Vec<f64>,
    pub groups: Vec<GroupSummary>,
    pub overlap_eigenvalues: Vec<f64>,
    pub retained: usize,
    pub dropped: usize,
    /// c^T S c after normalization.
    pub norm_check: f64,
}

impl VariationalSolution {
    pub fn geometry(&self) -> Geometry {
        Geometry::new(self.r).expect("solution holds a valid R")
    }

    pub fn psi(&self, p: [f64; 3]) -> f64 {
        self.primitives.iter().zip(&self.coefficients).map(|(g, c)| c * g.value(p)).sum()
    }

    /// psi, dpsi/dz, d2psi/dz2 on the axis.
    pub fn psi_axial(&self, z: f64) -> (f64, f64, f64) {
        self.primitives.iter().zip(&self.coefficients).fold((0.0, 0.0, 0.0), |acc, (g, c)| {
            let (v, d1, d2) = g.axial(z);
            (acc.0 + c * v, acc.1 + c * d1, acc.2 + c * d2)
        })
    }

    pub fn group(&self, g: Group) -> Option<&GroupSummary> {
        self.groups.iter().find(|s| s.group == g)
    }
}

pub fn variational_ground(basis: &BasisSpec, g: &Geometry, tau: f64) -> Result<VariationalSolution> {
    basis.validate()?;
    let prims = basis.primitives(g);
    let (s, h) = matrices_for(&prims, g);
    let sol = solve_generalized(&s, &h, tau)?;
    let c = DVector::from_vec(sol.coefficients.clone());
    let sc = &s * &c;
    let norm_check = c.dot(&sc);
    let mut groups = Vec::new();
    for grp in [Group::A, Group::B, Group::U] {
        let idx: Vec<usize> = (0..prims.len()).filter(|&i| prims[i].group == grp).collect();
        if idx.is_empty() {
            continue;
        }
        groups.push(GroupSummary {
            group: grp,
            coefficient_norm: idx.iter().map(|&i| c[i] * c[i]).sum::<f64>().sqrt(),
            population: idx.iter().map(|&i| c[i] * sc[i]).sum(),
        });
    }
    Ok(VariationalSolution {
        r: g.r(),
        e_var: sol.energy,
        e_tot_var: sol.energy + g.nuclear_repulsion(),
        primitives: prims,
        coefficients: sol.coefficients,
        groups,
        overlap_eigenvalues: sol.overlap_eigenvalues,
        retained: sol.retained,
        dropped: sol.dropped,
        norm_check,
    })
}
