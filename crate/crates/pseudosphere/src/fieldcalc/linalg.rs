use nalgebra::{DMatrix, DVector};

use super::{FieldError, Grid, MatrixField};

/// Singular values of a row-major `rows × cols` matrix in non-increasing order,
/// with the matching right-singular vectors as the columns of `v`.
#[derive(Debug, Clone)]
pub struct NodeSvd {
    pub sigma: Vec<f64>,
    pub v: DMatrix<f64>,
}

pub fn node_svd(mat: &[f64], rows: usize, cols: usize) -> Result<NodeSvd, FieldError> {
    if mat.iter().any(|x| !x.is_finite()) {
        return Err(FieldError::NonFiniteEntry { node: 0 });
    }
    let a = DMatrix::from_row_slice(rows, cols, mat);
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sigma = order.iter().map(|&i| svd.singular_values[i].max(0.0)).collect();
    let mut v = DMatrix::zeros(cols, order.len());
    for (c, &i) in order.iter().enumerate() {
        v.set_column(c, &vt.row(i).transpose());
    }
    Ok(NodeSvd { sigma, v })
}

/// Singular values only, non-increasing.
pub fn singular_values(mat: &[f64], rows: usize, cols: usize) -> Result<Vec<f64>, FieldError> {
    if mat.iter().any(|x| !x.is_finite()) {
        return Err(FieldError::NonFiniteEntry { node: 0 });
    }
    let a = DMatrix::from_row_slice(rows, cols, mat);
    let mut s: Vec<f64> = a.singular_values().iter().map(|v| v.max(0.0)).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Numeric rank of a list of non-increasing singular values.
pub fn numeric_rank(sigma: &[f64], tau_rel: f64) -> usize {
    match sigma.first() {
        Some(&s1) if s1 > 0.0 => sigma.iter().filter(|&&s| s >= tau_rel * s1).count(),
        _ => 0,
    }
}

/// Per-node singular values and numeric rank of a matrix field.
#[derive(Debug, Clone)]
pub struct RankProfile {
    grid: Grid,
    k: usize,
    sigma: Vec<f64>,
    rank: Vec<usize>,
    tau_rel: f64,
}

impl RankProfile {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn tau_rel(&self) -> f64 {
        self.tau_rel
    }

    /// Singular values of one node, non-increasing.
    pub fn sigma(&self, node: usize) -> &[f64] {
        &self.sigma[node * self.k..(node + 1) * self.k]
    }

    pub fn rank(&self, node: usize) -> usize {
        self.rank[node]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    /// Fraction of nodes at least `band` from the boundary satisfying `pred(sigma)`.
    pub fn interior_fraction<F: Fn(&[f64]) -> bool>(&self, band: usize, pred: F) -> f64 {
        let mut total = 0usize;
        let mut hits = 0usize;
        for p in self.grid.interior(band) {
            total += 1;
            if pred(self.sigma(p)) {
                hits += 1;
            }
        }
        if total == 0 {
            0.0
        } else {
            hits as f64 / total as f64
        }
    }

    pub(crate) fn from_parts(grid: Grid, k: usize, sigma: Vec<f64>, tau_rel: f64) -> Self {
        let rank = sigma.chunks_exact(k).map(|s| numeric_rank(s, tau_rel)).collect();
        Self { grid, k, sigma, rank, tau_rel }
    }
}

pub fn rank_profile(j: &MatrixField, tau_rel: f64) -> Result<RankProfile, FieldError> {
    if !(tau_rel > 0.0 && tau_rel < 1.0) {
        return Err(FieldError::BadThreshold(tau_rel));
    }
    let k = j.rows().min(j.cols());
    let mut sigma = Vec::with_capacity(j.grid().len() * k);
    for p in 0..j.grid().len() {
        let s = singular_values(j.at(p), j.rows(), j.cols())
            .map_err(|_| FieldError::NonFiniteEntry { node: p })?;
        sigma.extend_from_slice(&s);
    }
    Ok(RankProfile::from_parts(j.grid().clone(), k, sigma, tau_rel))
}

/// Singular values of the centred point cloud (points stored flat, `dim` per point).
pub fn point_cloud_singular_values(points: &[f64], dim: usize) -> Result<Vec<f64>, FieldError> {
    let count = points.len() / dim.max(1);
    if count < 2 {
        return Err(FieldError::TooFewPoints(count));
    }
    if points.iter().any(|v| !v.is_finite()) {
        return Err(FieldError::NonFiniteEntry { node: 0 });
    }
    let m = DMatrix::from_row_slice(count, dim, points);
    let mean: DVector<f64> = m.row_mean().transpose();
    let centred = DMatrix::from_fn(count, dim, |r, c| m[(r, c)] - mean[c]);
    // A thin QR keeps the SVD small without squaring the condition number.
    let r = if count > dim { centred.qr().r() } else { centred };
    let mut s: Vec<f64> = r.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Dimension of the affine span of a point cloud under a relative threshold.
pub fn affine_span_dim(points: &[f64], dim: usize, tau_rel: f64) -> Result<usize, FieldError> {
    let s = point_cloud_singular_values(points, dim)?;
    Ok(numeric_rank(&s, tau_rel))
}

/// Smallest eigenvalue of a symmetric row-major `m × m` matrix.
pub fn min_eigenvalue(mat: &[f64], m: usize) -> f64 {
    let a = DMatrix::from_row_slice(m, m, mat);
    a.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Inverse of a small square row-major matrix.
pub fn invert(mat: &[f64], m: usize) -> Option<Vec<f64>> {
    let a = DMatrix::from_row_slice(m, m, mat);
    let inv = a.try_inverse()?;
    Some((0..m * m).map(|i| inv[(i / m, i % m)]).collect())
}
