use std::f64::consts::PI;

use crate::fieldcalc::Field;
use crate::geometry::{dot, raster_parent, second_forms, Jet, NormalFrameField, SecondFormField};

use super::BianchiError;

/// Nodes whose mixed second-form matrix has norm below this are degenerate.
pub const NO_DEGENERACY_FLOOR: f64 = 1e-8;

/// A normal frame rotated so that b¹₁ⱼ = 0 for j ≥ 2, with its second forms.
#[derive(Debug, Clone)]
pub struct AlignedFrame {
    pub frame: NormalFrameField,
    pub forms: SecondFormField,
    /// Rotation angle from the input frame, continuous along the raster sweep.
    pub angle: Field,
}

impl AlignedFrame {
    /// Largest |b¹₁ⱼ|, j ≥ 2, over nodes at least `band` from the boundary.
    pub fn mixed_residual(&self, band: usize) -> f64 {
        let m = self.forms.dim();
        self.forms
            .grid()
            .interior(band)
            .flat_map(|p| (1..m).map(move |j| self.forms.get(p, 0, 0, j).abs()))
            .fold(0.0, f64::max)
    }
}

/// Rotates a codimension-2 normal frame so that n₂ carries the whole mixed
/// part (b_{12}, b_{13}, …) of the second forms.
///
/// At each node the rows of M = (b^σ_{1j}) span a line in the normal plane;
/// n₂ is its direction and n₁ the orthogonal one.
pub fn align_frame(jet: &Jet, frame: &NormalFrameField) -> Result<AlignedFrame, BianchiError> {
    if frame.codim() != 2 {
        return Err(crate::geometry::GeometryError::Shape("alignment needs codimension 2".into()).into());
    }
    let grid = jet.grid().clone();
    let (m, amb) = (jet.dim(), jet.ambient());
    let mut theta = vec![0.0; grid.len()];
    for p in 0..grid.len() {
        let (na, nb) = (frame.normal(p, 0), frame.normal(p, 1));
        let (mut saa, mut sab, mut sbb) = (0.0, 0.0, 0.0);
        for j in 1..m {
            let d = jet.d2(0, j).at(p);
            let (a, b) = (dot(d, na), dot(d, nb));
            saa += a * a;
            sab += a * b;
            sbb += b * b;
        }
        let half = 0.5 * (saa - sbb);
        let lambda = 0.5 * (saa + sbb) + half.hypot(sab);
        if lambda.sqrt() < NO_DEGENERACY_FLOOR {
            return Err(BianchiError::NoDegeneracy { node: p });
        }
        let phi = 0.5 * sab.atan2(half);
        // n₂ ∥ (cos φ, sin φ); n₁ ∥ (sin φ, −cos φ), taken with nonnegative cosine.
        let (mut c, mut s) = (phi.sin(), -phi.cos());
        if c < 0.0 {
            c = -c;
            s = -s;
        }
        let mut t = s.atan2(c);
        if let Some(q) = raster_parent(&grid, p) {
            let tq = theta[q];
            while t - tq > PI / 2.0 {
                t -= PI;
            }
            while t - tq < -PI / 2.0 {
                t += PI;
            }
        }
        theta[p] = t;
    }
    let mut data = vec![0.0; grid.len() * 2 * amb];
    for p in 0..grid.len() {
        let (c, s) = (theta[p].cos(), theta[p].sin());
        let (na, nb) = (frame.normal(p, 0), frame.normal(p, 1));
        for i in 0..amb {
            data[p * 2 * amb + i] = c * na[i] + s * nb[i];
            data[p * 2 * amb + amb + i] = -s * na[i] + c * nb[i];
        }
    }
    let aligned = NormalFrameField::new(grid.clone(), amb, 2, data)?;
    let forms = second_forms(jet, &aligned)?;
    Ok(AlignedFrame { frame: aligned, forms, angle: Field::new(grid, 1, theta)? })
}
