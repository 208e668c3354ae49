//! Principal component analysis for feature matrices.
//!
//! When there are fewer samples than features the eigenvectors are obtained
//! from the `n x n` Gram matrix instead of the `d x d` covariance.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Eigenvalues below this fraction of the largest are treated as zero.
const RANK_TOL: f64 = 1e-12;

/// Fraction of variance retained by [`PcaDims::Auto`].
pub const AUTO_VARIANCE: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PcaDims {
    /// Enough components for 99% of the variance, capped at `samples - classes`.
    Auto,
    Fixed(usize),
}

impl fmt::Display for PcaDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PcaDims::Auto => f.write_str("auto"),
            PcaDims::Fixed(d) => write!(f, "{d}"),
        }
    }
}

impl FromStr for PcaDims {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(PcaDims::Auto);
        }
        match s.parse::<usize>() {
            Ok(d) if d > 0 => Ok(PcaDims::Fixed(d)),
            _ => Err(Error::config(format!("PCA dims must be `auto` or a positive integer, got `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    mean: DVector<f64>,
    /// `d x k`, orthonormal columns.
    components: DMatrix<f64>,
    explained_variance: Vec<f64>,
    total_variance: f64,
}

impl PcaModel {
    pub fn input_dim(&self) -> usize {
        self.mean.len()
    }

    pub fn output_dim(&self) -> usize {
        self.components.ncols()
    }

    pub fn mean(&self) -> &[f64] {
        self.mean.as_slice()
    }

    pub fn explained_variance(&self) -> &[f64] {
        &self.explained_variance
    }

    pub fn explained_ratio(&self) -> f64 {
        if self.total_variance == 0.0 {
            return 1.0;
        }
        self.explained_variance.iter().sum::<f64>() / self.total_variance
    }

    /// Column `j` is the `j`-th principal direction.
    pub fn components(&self) -> &DMatrix<f64> {
        &self.components
    }

    pub fn apply(&self, vector: &[f64]) -> Result<Vec<f64>> {
        if vector.len() != self.input_dim() {
            return Err(Error::contract(format!("PCA expects {} features, got {}", self.input_dim(), vector.len())));
        }
        let centered = DVector::from_column_slice(vector) - &self.mean;
        Ok(self.components.tr_mul(&centered).as_slice().to_vec())
    }

    /// Maps projected coordinates back into feature space.
    pub fn inverse(&self, projected: &[f64]) -> Result<Vec<f64>> {
        if projected.len() != self.output_dim() {
            return Err(Error::contract("projected length does not match the model"));
        }
        let z = DVector::from_column_slice(projected);
        Ok((&self.components * z + &self.mean).as_slice().to_vec())
    }
}

/// Row-major `n x d` matrix from sample vectors of equal length.
pub(crate) fn to_matrix(samples: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let d = samples.first().map_or(0, Vec::len);
    if d == 0 {
        return Err(Error::contract("empty feature vectors"));
    }
    if let Some((i, s)) = samples.iter().enumerate().find(|(_, s)| s.len() != d) {
        return Err(Error::contract(format!("sample {i} has {} features, expected {d}", s.len())));
    }
    if samples.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::domain("non-finite feature value"));
    }
    Ok(DMatrix::from_fn(samples.len(), d, |r, c| samples[r][c]))
}

/// Fits PCA on the rows of `samples`.
///
/// The number of components is `min(dims, n - 1, d)`; with [`PcaDims::Auto`]
/// it is the smallest count reaching 99% explained variance, additionally
/// capped at `n - class_count` when a class count is given. Directions with
/// numerically zero variance are never returned.
pub fn fit_pca(samples: &[Vec<f64>], dims: PcaDims, class_count: Option<usize>) -> Result<PcaModel> {
    if samples.len() < 2 {
        return Err(Error::contract(format!("PCA needs at least 2 samples, got {}", samples.len())));
    }
    let x = to_matrix(samples)?;
    let (n, d) = x.shape();
    let mean = x.row_mean().transpose();
    let mut centered = x;
    for mut row in centered.row_iter_mut() {
        row -= mean.transpose();
    }
    let scale = 1.0 / (n as f64 - 1.0);

    let (values, vectors) = if n <= d {
        let gram = &centered * centered.transpose() * scale;
        let (vals, u) = sorted_eigen(gram);
        // v_j = X^T u_j / sqrt((n - 1) lambda_j)
        let keep = vals.iter().take_while(|&&l| l > RANK_TOL * vals[0].max(0.0)).count();
        let mut v = DMatrix::zeros(d, keep);
        for (j, &l) in vals.iter().enumerate().take(keep) {
            let col = centered.tr_mul(&u.column(j)) / ((n as f64 - 1.0) * l).sqrt();
            v.set_column(j, &col);
        }
        (vals[..keep].to_vec(), v)
    } else {
        let cov = centered.tr_mul(&centered) * scale;
        let (vals, v) = sorted_eigen(cov);
        let keep = vals.iter().take_while(|&&l| l > RANK_TOL * vals[0].max(0.0)).count();
        (vals[..keep].to_vec(), v.columns(0, keep).into_owned())
    };

    let total: f64 = centered.iter().map(|v| v * v).sum::<f64>() * scale;
    if values.is_empty() {
        return Err(Error::numerical("training features have no variance"));
    }

    let cap = (n - 1).min(d).min(values.len());
    let k = match dims {
        PcaDims::Fixed(k) => k.min(cap),
        PcaDims::Auto => {
            let mut acc = 0.0;
            let needed = values
                .iter()
                .position(|l| {
                    acc += l;
                    acc >= AUTO_VARIANCE * total
                })
                .map_or(values.len(), |p| p + 1);
            let class_cap = class_count.map_or(n - 1, |c| n.saturating_sub(c).max(1));
            needed.min(class_cap).min(cap)
        }
    }
    .max(1);

    let mut components = vectors.columns(0, k).into_owned();
    for mut col in components.column_iter_mut() {
        let pivot = col.iter().copied().fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
        if pivot < 0.0 {
            col.neg_mut();
        }
    }

    Ok(PcaModel { mean, components, explained_variance: values[..k].to_vec(), total_variance: total })
}

/// Eigenpairs of a symmetric matrix, eigenvalues descending.
pub(crate) fn sorted_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}
