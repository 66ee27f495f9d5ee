//! Equal-width partition of the projected input space into `M = K^L`
//! sections, and the per-section tallies that drive training.

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

/// Upper bound on `K^L` so the dense per-section arrays stay small.
pub const MAX_SECTIONS: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BinningError {
    #[error("sections per dimension must be >= 1, got {0}")]
    SectionsPerDim(usize),
    #[error("K^L = {k}^{dims} exceeds the {MAX_SECTIONS} section limit")]
    TooManySections { k: usize, dims: usize },
    #[error("grid needs at least one row and one column")]
    Empty,
    #[error("non-finite coordinate at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("{rows} rows but {labels} labels")]
    LabelMismatch { rows: usize, labels: usize },
    #[error("point has {found} coordinates, grid has {expected} dimensions")]
    Dimension { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinGrid {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    /// Sections per dimension.
    pub k: usize,
    /// Zero-spread dimensions; every point maps to section 0 along them.
    pub degenerate: Vec<bool>,
}

impl BinGrid {
    /// Column-wise min/max of the training rows.
    pub fn fit(x: ArrayView2<f64>, k: usize) -> Result<Self, BinningError> {
        if k < 1 {
            return Err(BinningError::SectionsPerDim(k));
        }
        let (n, dims) = x.dim();
        if n == 0 || dims == 0 {
            return Err(BinningError::Empty);
        }
        section_count(k, dims)?;
        let mut lo = vec![f64::INFINITY; dims];
        let mut hi = vec![f64::NEG_INFINITY; dims];
        for ((row, col), &v) in x.indexed_iter() {
            if !v.is_finite() {
                return Err(BinningError::NonFinite { row, col });
            }
            lo[col] = lo[col].min(v);
            hi[col] = hi[col].max(v);
        }
        let degenerate = lo.iter().zip(&hi).map(|(l, h)| l >= h).collect();
        Ok(Self { lo, hi, k, degenerate })
    }

    pub fn dims(&self) -> usize {
        self.lo.len()
    }

    pub fn sections(&self) -> usize {
        self.k.pow(self.dims() as u32)
    }

    pub fn width(&self, dim: usize) -> f64 {
        (self.hi[dim] - self.lo[dim]) / self.k as f64
    }

    /// Section coordinate along one dimension, clamped to `[0, K-1]`.
    pub fn coordinate(&self, dim: usize, value: f64) -> usize {
        if self.degenerate[dim] {
            return 0;
        }
        let raw = ((value - self.lo[dim]) / self.width(dim)).floor();
        if raw <= 0.0 {
            0
        } else {
            (raw as usize).min(self.k - 1)
        }
    }

    /// Mixed-radix section index `Σ d_k · K^k`.
    pub fn bin_index(&self, x: &[f64]) -> usize {
        debug_assert_eq!(x.len(), self.dims());
        let mut index = 0;
        let mut radix = 1;
        for (dim, &v) in x.iter().enumerate() {
            index += self.coordinate(dim, v) * radix;
            radix *= self.k;
        }
        index
    }

    /// Section index of every row.
    pub fn assign(&self, x: ArrayView2<f64>) -> Result<Vec<usize>, BinningError> {
        if x.ncols() != self.dims() {
            return Err(BinningError::Dimension {
                expected: self.dims(),
                found: x.ncols(),
            });
        }
        Ok(x
            .rows()
            .into_iter()
            .map(|row| match row.as_slice() {
                Some(s) => self.bin_index(s),
                None => self.bin_index(&row.to_vec()),
            })
            .collect())
    }
}

fn section_count(k: usize, dims: usize) -> Result<usize, BinningError> {
    let mut m: usize = 1;
    for _ in 0..dims {
        m = m
            .checked_mul(k)
            .filter(|&m| m <= MAX_SECTIONS)
            .ok_or(BinningError::TooManySections { k, dims })?;
    }
    Ok(m)
}

/// Convenience wrapper for [`BinGrid::fit`].
pub fn fit_grid(x: ArrayView2<f64>, k: usize) -> Result<BinGrid, BinningError> {
    BinGrid::fit(x, k)
}

/// Per-section training tallies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinStats {
    /// `N_i`: training rows in section `i`.
    pub counts: Vec<usize>,
    /// `c_i`: positive training rows in section `i`.
    pub positives: Vec<usize>,
    /// `p_i = c_i / N`.
    pub p: Vec<f64>,
    /// `m_i = N · p_i`.
    pub expected: Vec<f64>,
    /// `N`.
    pub total: usize,
}

impl BinStats {
    pub fn from_assignments(
        sections: &[usize],
        labels: &[u8],
        m: usize,
    ) -> Result<Self, BinningError> {
        if sections.len() != labels.len() {
            return Err(BinningError::LabelMismatch {
                rows: sections.len(),
                labels: labels.len(),
            });
        }
        if sections.is_empty() {
            return Err(BinningError::Empty);
        }
        let mut counts = vec![0usize; m];
        let mut positives = vec![0usize; m];
        for (&s, &y) in sections.iter().zip(labels) {
            counts[s] += 1;
            if y == 1 {
                positives[s] += 1;
            }
        }
        let total = sections.len();
        let n = total as f64;
        let p: Vec<f64> = positives.iter().map(|&c| c as f64 / n).collect();
        let expected = p.iter().map(|&p| n * p).collect();
        Ok(Self {
            counts,
            positives,
            p,
            expected,
            total,
        })
    }

    pub fn sections(&self) -> usize {
        self.counts.len()
    }

    pub fn positive_total(&self) -> usize {
        self.positives.iter().sum()
    }
}

pub fn compute_stats(
    grid: &BinGrid,
    x: ArrayView2<f64>,
    labels: &[u8],
) -> Result<BinStats, BinningError> {
    let sections = grid.assign(x)?;
    BinStats::from_assignments(&sections, labels, grid.sections())
}

/// Pearson statistic over sections with nonzero expectation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareStat {
    pub eta: f64,
    /// Sections with `m_i > 0`, minus one, at least one.
    pub effective_df: u32,
}

/// How sections with `m_i = 0` enter `η`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmptySections {
    /// A section with `m_i = 0` adds nothing when `v_i = 0` and makes `η`
    /// infinite when `v_i > 0`.
    #[default]
    Strict,
    /// Sections with `m_i = 0` are left out entirely.
    Skip,
}

/// `η = Σ (v_i − m_i)² / m_i` over sections with `m_i > 0`; sections with
/// `m_i = 0` are handled per `rule`.
///
/// Returns `None` when every `m_i` is zero; the statistic is then undefined
/// and training falls back to the epoch cap.
pub fn chi_square_stat(observed: &[f64], expected: &[f64], rule: EmptySections) -> Option<ChiSquareStat> {
    assert_eq!(observed.len(), expected.len());
    let mut eta = 0.0;
    let mut used = 0u32;
    for (&v, &m) in observed.iter().zip(expected) {
        if m > 0.0 {
            eta += (v - m) * (v - m) / m;
            used += 1;
        } else if rule == EmptySections::Strict && v > 0.0 {
            eta = f64::INFINITY;
        }
    }
    if used == 0 {
        return None;
    }
    Some(ChiSquareStat {
        eta,
        effective_df: used.saturating_sub(1).max(1),
    })
}
