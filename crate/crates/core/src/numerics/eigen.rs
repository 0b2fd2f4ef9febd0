//! Dense symmetric matrices and a cyclic Jacobi eigensolver.

use crate::error::{Error, Result};

/// Largest dimension accepted by [`symmetric_eigen`].
pub const MAX_EIGEN_DIM: usize = 200;

const MAX_SWEEPS: usize = 100;

/// Square matrix whose entries satisfy
/// `|A[i][j] - A[j][i]| <= 1e-12 (1 + |A[i][j]|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl SymmetricMatrix {
    /// Wraps row-major entries, which must form a finite symmetric matrix.
    pub fn new(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Input("matrix dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::Input(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("matrix entries must be finite".into()));
        }
        for i in 0..dim {
            for j in 0..i {
                let (x, y) = (entries[i * dim + j], entries[j * dim + i]);
                if (x - y).abs() > 1e-12 * (1.0 + x.abs()) {
                    return Err(Error::Input(format!("matrix is not symmetric at ({i},{j}): {x} vs {y}")));
                }
            }
        }
        Ok(Self { dim, entries })
    }

    /// Builds a matrix from rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Input("matrix rows must all have length equal to the row count".into()));
        }
        Self::new(dim, rows.concat())
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Leading `k x k` principal submatrix.
    pub fn leading(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.dim {
            return Err(Error::Input(format!("cannot take a {k}x{k} block of a {0}x{0} matrix", self.dim)));
        }
        let mut e = Vec::with_capacity(k * k);
        for i in 0..k {
            e.extend_from_slice(&self.entries[i * self.dim..i * self.dim + k]);
        }
        Ok(Self { dim: k, entries: e })
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector belonging to `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

/// Diagonalizes a symmetric matrix with cyclic Jacobi rotations.
///
/// Sweeps continue until the largest off-diagonal entry drops below
/// `1e-12` times the Frobenius norm. Each eigenvector is signed so that its
/// largest-magnitude component is positive, which makes results
/// reproducible across runs and platforms.
pub fn symmetric_eigen(a: &SymmetricMatrix) -> Result<EigenDecomposition> {
    let n = a.dim();
    if n > MAX_EIGEN_DIM {
        return Err(Error::Input(format!("dimension {n} exceeds the supported maximum {MAX_EIGEN_DIM}")));
    }
    // Work on an exactly symmetric copy.
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = 0.5 * (a.get(i, j) + a.get(j, i));
        }
    }
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let threshold = 1e-12 * a.frobenius_norm();
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off =
            (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).fold(0.0_f64, |acc, (i, j)| acc.max(m[i * n + j].abs()));
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (m[p * n + p], m[q * n + q]);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k * n + p], m[k * n + q]);
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p * n + k], m[q * n + k]);
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::Numeric(format!("Jacobi iteration did not converge in {MAX_SWEEPS} sweeps")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    let values = order.iter().map(|&k| m[k * n + k]).collect();
    let vectors = order
        .iter()
        .map(|&k| {
            let mut col: Vec<f64> = (0..n).map(|i| v[i * n + k]).collect();
            let lead = col.iter().fold(0.0_f64, |acc, &x| if x.abs() > acc.abs() { x } else { acc });
            if lead < 0.0 {
                col.iter_mut().for_each(|x| *x = -*x);
            }
            col
        })
        .collect();
    Ok(EigenDecomposition { values, vectors })
}
