use crate::fieldcalc::{partial, Field};
use crate::geometry::{MetricField, SecondFormField};
use crate::INTERIOR_BAND;

use super::BianchiError;

/// (b²₁₂)² + (b²₁₃)² at or below this value means the kernel is undefined.
pub const KERNEL_FLOOR: f64 = 1e-10;

/// The g-orthonormal triple ξ₁ ∥ ∂₁, ξ₂, ξ₃ of a three-dimensional chart.
///
/// With b = b² of the aligned frame, ξ₃ ∝ −b₁₃∂₂ + b₁₂∂₃ spans the kernel of
/// the Bianchi transformation and ξ₂ ∝ h⁻¹(b₁₂, b₁₃) is its complement in the
/// horosphere, h being the metric restricted to (∂₂, ∂₃).
#[derive(Debug, Clone)]
pub struct DistributionTriple {
    pub xi: [Field; 3],
}

impl DistributionTriple {
    pub fn xi(&self, k: usize, node: usize) -> &[f64] {
        self.xi[k].at(node)
    }

    /// Largest |g(ξᵢ, ξⱼ) − δᵢⱼ| over interior nodes.
    pub fn orthonormality_defect(&self, g: &MetricField) -> f64 {
        let mut worst = 0.0_f64;
        for p in g.grid().interior(INTERIOR_BAND) {
            for i in 0..3 {
                for j in i..3 {
                    let d = g.dot(p, self.xi(i, p), self.xi(j, p)) - if i == j { 1.0 } else { 0.0 };
                    worst = worst.max(d.abs());
                }
            }
        }
        worst
    }

    /// Largest angle (in the metric g) between ξ₃ and a direction field.
    pub fn kernel_angle(&self, g: &MetricField, kernel: &Field) -> f64 {
        g.grid()
            .interior(INTERIOR_BAND)
            .map(|p| {
                let (a, b) = (self.xi(2, p), kernel.at(p));
                let c = g.dot(p, a, b) / (g.dot(p, a, a) * g.dot(p, b, b)).sqrt();
                c.abs().min(1.0).acos()
            })
            .fold(0.0, f64::max)
    }
}

fn normalize(g: &MetricField, p: usize, v: &mut [f64]) {
    let n = g.dot(p, v, v).sqrt();
    v.iter_mut().for_each(|c| *c /= n);
}

/// ξ₁, ξ₂, ξ₃ from the second form of the second normal of an aligned frame.
pub fn distribution_triple(forms: &SecondFormField, g: &MetricField) -> Result<DistributionTriple, BianchiError> {
    let grid = forms.grid().clone();
    if forms.dim() != 3 || forms.codim() < 2 || g.dim() != 3 {
        return Err(crate::geometry::GeometryError::Shape(
            "distribution triple needs a three-dimensional chart and two normals".into(),
        )
        .into());
    }
    let mut xi = [vec![0.0; grid.len() * 3], vec![0.0; grid.len() * 3], vec![0.0; grid.len() * 3]];
    for p in 0..grid.len() {
        let (b12, b13) = (forms.get(p, 1, 0, 1), forms.get(p, 1, 0, 2));
        if b12 * b12 + b13 * b13 <= KERNEL_FLOOR {
            return Err(BianchiError::KernelVanishes { node: p });
        }
        let mut x1 = [1.0, 0.0, 0.0];
        let (h22, h23, h33) = (g.get(p, 1, 1), g.get(p, 1, 2), g.get(p, 2, 2));
        let det = h22 * h33 - h23 * h23;
        let mut x2 = [0.0, (h33 * b12 - h23 * b13) / det, (h22 * b13 - h23 * b12) / det];
        let mut x3 = [0.0, -b13, b12];
        normalize(g, p, &mut x1);
        normalize(g, p, &mut x2);
        normalize(g, p, &mut x3);
        xi[0][p * 3..p * 3 + 3].copy_from_slice(&x1);
        xi[1][p * 3..p * 3 + 3].copy_from_slice(&x2);
        xi[2][p * 3..p * 3 + 3].copy_from_slice(&x3);
    }
    let [a, b, c] = xi;
    Ok(DistributionTriple {
        xi: [Field::new(grid.clone(), 3, a)?, Field::new(grid.clone(), 3, b)?, Field::new(grid, 3, c)?],
    })
}

/// Component of [ξᵢ, ξⱼ] along the remaining ξₖ for the pairs (1,2), (1,3),
/// (2,3); brackets are computed by finite differences of the coefficients.
pub fn frobenius_defects(triple: &DistributionTriple, g: &MetricField) -> Result<[Field; 3], BianchiError> {
    let grid = g.grid().clone();
    let grads: Vec<[Field; 3]> = triple
        .xi
        .iter()
        .map(|f| Ok([partial(f, 0, 1)?, partial(f, 1, 1)?, partial(f, 2, 1)?]))
        .collect::<Result<_, BianchiError>>()?;
    let pairs = [(0, 1, 2), (0, 2, 1), (1, 2, 0)];
    let mut out = Vec::with_capacity(3);
    for &(i, j, k) in &pairs {
        let f = Field::from_nodes(grid.clone(), 1, |p, o| {
            let (x, y) = (triple.xi(i, p), triple.xi(j, p));
            let mut br = [0.0; 3];
            for (c, b) in br.iter_mut().enumerate() {
                for l in 0..3 {
                    *b += x[l] * grads[j][l].get(p, c) - y[l] * grads[i][l].get(p, c);
                }
            }
            o[0] = g.dot(p, &br, triple.xi(k, p));
        })?;
        out.push(f);
    }
    let [a, b, c]: [Field; 3] = out.try_into().expect("three pairs");
    Ok([a, b, c])
}

/// (∂₁b₁₂ · b₁₃ − ∂₁b₁₃ · b₁₂) / (b₁₂² + b₁₃²) for the second normal.
///
/// The ratio b₁₃/b₁₂ is independent of u₁ exactly when this vanishes.
pub fn holonomicity_residual(forms: &SecondFormField) -> Result<Field, BianchiError> {
    let grid = forms.grid().clone();
    let (b12, b13) = (
        Field::from_nodes(grid.clone(), 1, |p, o| o[0] = forms.get(p, 1, 0, 1))?,
        Field::from_nodes(grid.clone(), 1, |p, o| o[0] = forms.get(p, 1, 0, 2))?,
    );
    let (d12, d13) = (partial(&b12, 0, 1)?, partial(&b13, 0, 1)?);
    let mut data = vec![0.0; grid.len()];
    for (p, r) in data.iter_mut().enumerate() {
        let (a, b) = (b12.get(p, 0), b13.get(p, 0));
        let n = a * a + b * b;
        if n <= KERNEL_FLOOR {
            return Err(BianchiError::KernelVanishes { node: p });
        }
        *r = (d12.get(p, 0) * b - d13.get(p, 0) * a) / n;
    }
    Ok(Field::new(grid, 1, data)?)
}

#[derive(Debug, Clone)]
pub struct HolonomicityResult {
    pub residual: Field,
    pub sup: f64,
    pub holonomic: bool,
}

/// Holonomicity residual with its interior sup-norm compared against `tol`.
pub fn holonomicity_test(forms: &SecondFormField, tol: f64) -> Result<HolonomicityResult, BianchiError> {
    let residual = holonomicity_residual(forms)?;
    let sup = residual.sup_interior(INTERIOR_BAND);
    Ok(HolonomicityResult { residual, sup, holonomic: sup < tol })
}
