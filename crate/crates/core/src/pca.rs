//! Principal component analysis via cyclic Jacobi rotations on the sample
//! covariance (or correlation) matrix.

use ndarray::{Array1, Array2, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PcaError {
    #[error("pca needs at least 2 rows and 1 column, got {rows}x{cols}")]
    TooSmall { rows: usize, cols: usize },
    #[error("non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),
    #[error("component count {requested} out of range 1..={available}")]
    ComponentRange { requested: usize, available: usize },
    #[error("input has {found} columns, model expects {expected}")]
    Dimension { expected: usize, found: usize },
}

/// Which scatter matrix is diagonalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PcaVariant {
    /// Covariance of the raw, unstandardized features.
    #[default]
    Covariance,
    /// Covariance of z-scored features.
    Correlation,
}

/// Whether PCA sees the whole dataset or only the training partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PcaScope {
    #[default]
    PreSplit,
    TrainOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub variant: PcaVariant,
    pub mean: Array1<f64>,
    /// Per-column divisor applied after centering (all ones for covariance).
    pub scale: Array1<f64>,
    /// Columns are principal axes in descending eigenvalue order.
    pub axes: Array2<f64>,
    pub eigenvalues: Array1<f64>,
    pub contribution: Array1<f64>,
    /// True when every eigenvalue is zero (all rows identical).
    pub degenerate: bool,
}

/// Result of a symmetric eigendecomposition.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub eigenvalues: Array1<f64>,
    /// Eigenvectors stored column-wise, same order as `eigenvalues`.
    pub eigenvectors: Array2<f64>,
    pub sweeps: usize,
}

const JACOBI_TOLERANCE: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

fn off_diagonal_norm(a: &Array2<f64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[[i, j]] * a[[i, j]];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Sweeps over all `(p, q)` pairs until the off-diagonal Frobenius norm drops
/// to `1e-12` times `max(1, ‖A‖_F)`. Eigenpairs are returned unsorted.
pub fn jacobi_eigen(matrix: &Array2<f64>) -> SymmetricEigen {
    let n = matrix.nrows();
    assert_eq!(n, matrix.ncols(), "jacobi_eigen needs a square matrix");
    let mut a = matrix.clone();
    let mut v = Array2::<f64>::eye(n);
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    let mut sweeps = 0;
    while sweeps < JACOBI_MAX_SWEEPS && off_diagonal_norm(&a) > JACOBI_TOLERANCE * scale {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[[q, q]] - a[[p, p]]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // A' = Jᵀ A J, touching rows/columns p and q only
                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = c * akp - s * akq;
                    a[[k, q]] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = c * apk - s * aqk;
                    a[[q, k]] = s * apk + c * aqk;
                }
                a[[p, q]] = 0.0;
                a[[q, p]] = 0.0;
                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = c * vkp - s * vkq;
                    v[[k, q]] = s * vkp + c * vkq;
                }
            }
        }
    }
    SymmetricEigen {
        eigenvalues: a.diag().to_owned(),
        eigenvectors: v,
        sweeps,
    }
}

/// Sample covariance with divisor `n - 1`.
pub fn sample_covariance(x: ArrayView2<f64>) -> Array2<f64> {
    let n = x.nrows();
    let mean = x.mean_axis(Axis(0)).expect("non-empty");
    let centered = &x - &mean;
    centered.t().dot(&centered) / (n as f64 - 1.0)
}

pub fn fit_pca(x: ArrayView2<f64>, variant: PcaVariant) -> Result<PcaModel, PcaError> {
    let (n, d) = x.dim();
    if n < 2 || d < 1 {
        return Err(PcaError::TooSmall { rows: n, cols: d });
    }
    if let Some(((i, j), _)) = x.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(PcaError::NonFinite(i, j));
    }
    let mean = x.mean_axis(Axis(0)).expect("n >= 2");
    let mut scale = Array1::ones(d);
    if variant == PcaVariant::Correlation {
        for j in 0..d {
            let col = x.column(j);
            let var = col.iter().map(|v| (v - mean[j]).powi(2)).sum::<f64>() / (n as f64 - 1.0);
            if var > 0.0 {
                scale[j] = var.sqrt();
            }
        }
    }
    let standardized = (&x - &mean) / &scale;
    let cov = standardized.t().dot(&standardized) / (n as f64 - 1.0);
    let eig = jacobi_eigen(&cov);

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut eigenvalues = Array1::zeros(d);
    let mut axes = Array2::zeros((d, d));
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues[dst] = eig.eigenvalues[src].max(0.0);
        let mut col = eig.eigenvectors.column(src).to_owned();
        let pivot = col
            .iter()
            .copied()
            .fold(0.0_f64, |best, v| if v.abs() > best.abs() { v } else { best });
        if pivot < 0.0 {
            col.mapv_inplace(|v| -v);
        }
        axes.column_mut(dst).assign(&col);
    }
    let total: f64 = eigenvalues.sum();
    let degenerate = total <= 0.0;
    let contribution = if degenerate {
        Array1::from_elem(d, 1.0 / d as f64)
    } else {
        eigenvalues.mapv(|l| l / total)
    };
    Ok(PcaModel {
        variant,
        mean,
        scale,
        axes,
        eigenvalues,
        contribution,
        degenerate,
    })
}

/// Smallest `L` whose leading contributions reach `threshold`.
pub fn select_count(contribution: &[f64], threshold: f64) -> usize {
    let mut cum = 0.0;
    for (i, c) in contribution.iter().enumerate() {
        cum += c;
        if cum >= threshold - 1e-12 {
            return i + 1;
        }
    }
    contribution.len()
}

impl PcaModel {
    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn cumulative_contribution(&self) -> Vec<f64> {
        self.contribution
            .iter()
            .scan(0.0, |acc, c| {
                *acc += c;
                Some(*acc)
            })
            .collect()
    }

    pub fn select_count(&self, threshold: f64) -> usize {
        select_count(self.contribution.as_slice().expect("contiguous"), threshold)
    }

    /// `(X − mean) / scale` times the first `components` axes.
    pub fn project(&self, x: ArrayView2<f64>, components: usize) -> Result<Array2<f64>, PcaError> {
        if components == 0 || components > self.dim() {
            return Err(PcaError::ComponentRange {
                requested: components,
                available: self.dim(),
            });
        }
        if x.ncols() != self.dim() {
            return Err(PcaError::Dimension {
                expected: self.dim(),
                found: x.ncols(),
            });
        }
        let standardized = (&x - &self.mean) / &self.scale;
        Ok(standardized.dot(&self.axes.slice(ndarray::s![.., ..components])))
    }

    /// Inverse of [`PcaModel::project`] for the retained components.
    pub fn reconstruct(&self, projected: ArrayView2<f64>) -> Array2<f64> {
        let l = projected.ncols();
        let back = projected.dot(&self.axes.slice(ndarray::s![.., ..l]).t());
        back * &self.scale + &self.mean
    }
}
