use crate::fieldcalc::{Field, Grid};

use super::metric::dot;
use super::{metric_from_jet, GeometryError, Jet};

/// Shape operator W = g⁻¹b of a surface in ℝ³ together with its unit normal.
#[derive(Debug, Clone)]
pub struct ShapeOperatorField {
    grid: Grid,
    w: Vec<f64>,
    pub gauss_curvature: Field,
    pub normal: Field,
}

impl ShapeOperatorField {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Row-major 2×2 shape operator at a node.
    pub fn w(&self, node: usize) -> [f64; 4] {
        let s = &self.w[node * 4..node * 4 + 4];
        [s[0], s[1], s[2], s[3]]
    }
}

pub(crate) fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Shape operator and Gauss curvature K = det W of a sampled surface in ℝ³.
///
/// The normal is (∂₁x × ∂₂x)/|∂₁x × ∂₂x|.
pub fn shape_operator(x: &Field) -> Result<ShapeOperatorField, GeometryError> {
    if x.grid().dim() != 2 || x.ncomp() != 3 {
        return Err(GeometryError::Shape("shape operator needs a 2D chart into R^3".into()));
    }
    let jet = Jet::second_order(x)?;
    let g = metric_from_jet(&jet)?;
    let grid = x.grid().clone();
    let mut w = vec![0.0; grid.len() * 4];
    let mut k = vec![0.0; grid.len()];
    let mut normal = vec![0.0; grid.len() * 3];
    for p in 0..grid.len() {
        let c = cross(jet.tangent(p, 0), jet.tangent(p, 1));
        let len = dot(&c, &c).sqrt();
        if len <= 1e-12 {
            return Err(GeometryError::DegenerateImmersion { node: p, eigenvalue: len });
        }
        let n = [c[0] / len, c[1] / len, c[2] / len];
        normal[p * 3..p * 3 + 3].copy_from_slice(&n);
        let b = [
            dot(jet.d2(0, 0).at(p), &n),
            dot(jet.d2(0, 1).at(p), &n),
            dot(jet.d2(1, 1).at(p), &n),
        ];
        let gi = g.ginv(p);
        let wp = [
            gi[0] * b[0] + gi[1] * b[1],
            gi[0] * b[1] + gi[1] * b[2],
            gi[2] * b[0] + gi[3] * b[1],
            gi[2] * b[1] + gi[3] * b[2],
        ];
        w[p * 4..p * 4 + 4].copy_from_slice(&wp);
        k[p] = wp[0] * wp[3] - wp[1] * wp[2];
    }
    Ok(ShapeOperatorField {
        gauss_curvature: Field::new(grid.clone(), 1, k)?,
        normal: Field::new(grid.clone(), 3, normal)?,
        grid,
        w,
    })
}
