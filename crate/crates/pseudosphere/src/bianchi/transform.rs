use nalgebra::{DMatrix, SymmetricEigen};

use crate::fieldcalc::{jacobian, node_svd, Field, Grid, MatrixField, RankProfile};
use crate::geometry::{induced_metric, MetricField};
use crate::INTERIOR_BAND;

use super::BianchiError;

/// Relative singular-value threshold of the rank decision.
pub const RANK_TAU: f64 = 1e-6;

/// Allowed deviation of g₁₁ from 1 and of g₁ⱼ from 0.
pub const HOROSPHERICAL_TOLERANCE: f64 = 1e-4;

/// Kernel components below this size do not decide the orientation.
const ORIENTATION_FLOOR: f64 = 1e-6;

/// The Bianchi image with its Jacobian ranks and unit kernel direction.
#[derive(Debug, Clone)]
pub struct BianchiResult {
    pub image: Field,
    pub jacobian: MatrixField,
    pub ranks: RankProfile,
    /// Right-singular vector of the smallest singular value, Euclidean unit
    /// length in chart coordinates.
    pub kernel: Field,
}

impl BianchiResult {
    pub fn grid(&self) -> &Grid {
        self.image.grid()
    }
}

/// Largest deviation of (g₁₁, g₁₂, …, g₁ₘ) from (1, 0, …, 0) over interior nodes.
pub fn check_horospherical(g: &MetricField, tol: f64) -> Result<f64, BianchiError> {
    let mut worst = (0.0_f64, 0usize);
    for p in g.grid().interior(INTERIOR_BAND) {
        let mut d = (g.get(p, 0, 0) - 1.0).abs();
        for j in 1..g.dim() {
            d = d.max(g.get(p, 0, j).abs());
        }
        if d > worst.0 {
            worst = (d, p);
        }
    }
    if worst.0 > tol {
        return Err(BianchiError::NotHorospherical { node: worst.1, deviation: worst.0 });
    }
    Ok(worst.0)
}

fn orient(k: &mut [f64]) {
    let pick = if k.len() > 1 && k[1].abs() > ORIENTATION_FLOOR { 1 } else { k.len() - 1 };
    if k[pick] < 0.0 {
        k.iter_mut().for_each(|v| *v = -*v);
    }
}

/// x̃ = x + ∂₁x, the rank profile of its Jacobian and its kernel direction.
///
/// The first chart axis must be horospherical: g₁₁ = 1 and g₁ⱼ = 0 within
/// [`HOROSPHERICAL_TOLERANCE`]. A rank decision within a decade of `tau` at
/// an interior node is rejected as ambiguous.
pub fn bianchi_transform(x: &Field, tau: f64) -> Result<BianchiResult, BianchiError> {
    let g = induced_metric(x)?;
    check_horospherical(&g, HOROSPHERICAL_TOLERANCE)?;
    let grid = x.grid().clone();
    let d1 = crate::fieldcalc::partial(x, 0, 1)?;
    let image = x.add(&d1)?;
    let jac = jacobian(&image)?;
    let (rows, m) = (jac.rows(), jac.cols());
    let k = rows.min(m);
    let mut sigma = Vec::with_capacity(grid.len() * k);
    let mut kernel = Vec::with_capacity(grid.len() * m);
    for p in 0..grid.len() {
        let svd = node_svd(jac.at(p), rows, m)?;
        if grid.is_interior(p, INTERIOR_BAND) && svd.sigma[0] > 0.0 {
            for &s in &svd.sigma[1..] {
                let ratio = s / svd.sigma[0];
                if ratio >= tau / 10.0 && ratio <= tau * 10.0 {
                    return Err(BianchiError::RankAmbiguous { node: p, ratio });
                }
            }
        }
        sigma.extend_from_slice(&svd.sigma);
        let mut v: Vec<f64> = svd.v.column(m - 1).iter().copied().collect();
        orient(&mut v);
        kernel.extend_from_slice(&v);
    }
    Ok(BianchiResult {
        ranks: RankProfile::from_parts(grid.clone(), k, sigma, tau),
        kernel: Field::new(grid, m, kernel)?,
        image,
        jacobian: jac,
    })
}

/// Best-fit three-dimensional affine subspace of a point cloud.
#[derive(Debug, Clone)]
pub struct AffineFrame {
    pub origin: Vec<f64>,
    /// Orthonormal basis vectors, by decreasing spread.
    pub basis: Vec<Vec<f64>>,
}

impl AffineFrame {
    pub fn fit(points: &Field) -> Self {
        let d = points.ncomp();
        let count = points.grid().len() as f64;
        let mut origin = vec![0.0; d];
        for q in points.nodes() {
            origin.iter_mut().zip(q).for_each(|(o, v)| *o += v / count);
        }
        let mut cov = DMatrix::<f64>::zeros(d, d);
        for q in points.nodes() {
            for i in 0..d {
                for j in 0..d {
                    cov[(i, j)] += (q[i] - origin[i]) * (q[j] - origin[j]);
                }
            }
        }
        let eig = SymmetricEigen::new(cov);
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let basis = order
            .iter()
            .take(3.min(d))
            .map(|&c| eig.eigenvectors.column(c).iter().copied().collect())
            .collect();
        Self { origin, basis }
    }

    pub fn project(&self, q: &[f64]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (o, e) in out.iter_mut().zip(&self.basis) {
            *o = e.iter().zip(q.iter().zip(&self.origin)).map(|(e, (q, c))| e * (q - c)).sum();
        }
        out
    }
}

/// The slice of a three-axis image at last-axis index `k3`, expressed in the
/// coordinates of its best-fit affine ℝ³.
pub fn project_slice(image: &Field, frame: &AffineFrame, k3: usize) -> Result<Field, BianchiError> {
    let grid = image.grid();
    let g2 = Grid::new(grid.axes()[..2].to_vec())?;
    let n2 = g2.axis(1).n;
    Ok(Field::from_nodes(g2, 3, |p, out| {
        let q = grid.index(&[p / n2, p % n2, k3]);
        out.copy_from_slice(&frame.project(image.at(q)));
    })?)
}
