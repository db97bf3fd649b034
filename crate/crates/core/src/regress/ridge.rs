use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};

use super::features::SparseRow;

/// Relative pivot floor below which a λ = 0 system counts as singular.
const PIVOT_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Form {
    /// `(XᵀX + λI) w = Xᵀt`.
    Primal,
    /// `w = Xᵀ (XXᵀ + λI)⁻¹ t`, used when there are fewer rows than features.
    Dual,
}

/// Ridge regression on a fixed sparse design, with the normal-equation
/// factorization computed once.
#[derive(Debug, Clone)]
pub struct RidgeSystem {
    rows: Vec<SparseRow>,
    dim: usize,
    lambda: f64,
    form: Form,
    factor: Cholesky<f64, Dyn>,
}

impl RidgeSystem {
    pub fn new(rows: Vec<SparseRow>, dim: usize, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidConfig(format!("ridge lambda must be >= 0, got {lambda}")));
        }
        if let Some(&(j, _)) = rows.iter().flatten().find(|(j, _)| *j >= dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: j + 1,
            });
        }
        let form = if lambda > 0.0 && rows.len() < dim {
            Form::Dual
        } else {
            Form::Primal
        };
        let gram = match form {
            Form::Primal => {
                let mut a = DMatrix::zeros(dim, dim);
                for row in &rows {
                    for &(i, si) in row {
                        for &(j, sj) in row {
                            a[(i, j)] += si * sj;
                        }
                    }
                }
                a
            }
            Form::Dual => {
                let mut by_column: Vec<Vec<(usize, f64)>> = vec![Vec::new(); dim];
                for (r, row) in rows.iter().enumerate() {
                    for &(j, s) in row {
                        by_column[j].push((r, s));
                    }
                }
                let mut k = DMatrix::zeros(rows.len(), rows.len());
                for column in &by_column {
                    for &(r1, s1) in column {
                        for &(r2, s2) in column {
                            k[(r1, r2)] += s1 * s2;
                        }
                    }
                }
                k
            }
        };
        let n = gram.nrows();
        let scale = (0..n).map(|i| gram[(i, i)]).fold(0.0, f64::max).max(1.0);
        let regularized = gram + DMatrix::identity(n, n) * lambda;
        let factor = Cholesky::new(regularized).ok_or(Error::SingularDesign { lambda })?;
        let l = factor.l_dirty();
        if (0..n).any(|i| l[(i, i)] * l[(i, i)] < PIVOT_FLOOR * scale) {
            return Err(Error::SingularDesign { lambda });
        }
        Ok(Self {
            rows,
            dim,
            lambda,
            form,
            factor,
        })
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    /// Weights minimizing `||Xw - t||² + λ||w||²`.
    pub fn solve(&self, targets: &[f64]) -> Result<Vec<f64>> {
        if targets.len() != self.rows.len() {
            return Err(Error::DimensionMismatch {
                expected: self.rows.len(),
                got: targets.len(),
            });
        }
        if let Some((index, &value)) = targets.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(match self.form {
            Form::Primal => {
                let rhs = DVector::from_vec(self.transpose_times(targets));
                self.factor.solve(&rhs).as_slice().to_vec()
            }
            Form::Dual => {
                let z = self.factor.solve(&DVector::from_column_slice(targets));
                self.transpose_times(z.as_slice())
            }
        })
    }

    /// `Xᵀ v`.
    fn transpose_times(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (row, &x) in self.rows.iter().zip(v) {
            for &(j, s) in row {
                out[j] += s * x;
            }
        }
        out
    }

    /// `X w`.
    pub fn predict(&self, weights: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, s)| s * weights[j]).sum())
            .collect()
    }
}

/// One-off ridge fit on a dense design matrix.
pub fn ridge_fit(x: &DMatrix<f64>, targets: &[f64], lambda: f64) -> Result<Vec<f64>> {
    let rows = (0..x.nrows())
        .map(|r| {
            (0..x.ncols())
                .filter(|&j| x[(r, j)] != 0.0)
                .map(|j| (j, x[(r, j)]))
                .collect()
        })
        .collect();
    RidgeSystem::new(rows, x.ncols(), lambda)?.solve(targets)
}
