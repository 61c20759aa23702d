use crate::fieldcalc::{partial, Field};

use super::curvature::{index_pairs, riemann_from};
use super::{christoffel, GeometryError, MetricField, SecondFormField, TorsionField};

/// Pointwise Gauss, Codazzi and Ricci residuals (max absolute value over indices).
#[derive(Debug, Clone)]
pub struct GcrResiduals {
    pub gauss: Field,
    pub codazzi: Field,
    pub ricci: Field,
}

impl GcrResiduals {
    pub fn sup_interior(&self, band: usize) -> (f64, f64, f64) {
        (
            self.gauss.sup_interior(band),
            self.codazzi.sup_interior(band),
            self.ricci.sup_interior(band),
        )
    }
}

/// Residuals of the integrability conditions of a submanifold.
///
/// * Gauss: R_ijkl − Σ_σ (b^σ_ik b^σ_jl − b^σ_il b^σ_jk).
/// * Codazzi: E^σ_ijk − E^σ_ikj with
///   E^σ_ijk = ∂ₖb^σ_ij + Γˢ_ij b^σ_sk + Σ_ν μ_{νσ|k} b^ν_ij.
/// * Ricci, in the flat-normal-connection form: the antisymmetric part of
///   b^σ g⁻¹ b^ν for every normal pair σ < ν.
pub fn gcr_residuals(
    g: &MetricField,
    b: &SecondFormField,
    mu: &TorsionField,
) -> Result<GcrResiduals, GeometryError> {
    if g.grid() != b.grid() || g.grid() != mu.grid() {
        return Err(GeometryError::Shape("residual inputs live on different grids".into()));
    }
    let m = g.dim();
    let k = b.codim();
    let grid = g.grid().clone();
    let gamma = christoffel(g)?;
    let curv = riemann_from(g, &gamma)?;
    let bf = b.as_field();
    let db: Vec<Field> = (0..m).map(|a| partial(&bf, a, 1)).collect::<Result<_, _>>()?;
    let pairs = index_pairs(m);
    let bi = |s: usize, i: usize, j: usize| (s * m + i) * m + j;

    let mut gauss = vec![0.0; grid.len()];
    let mut codazzi = vec![0.0; grid.len()];
    let mut ricci = vec![0.0; grid.len()];
    let mut e = vec![0.0; k * m * m * m];
    let mut prod = vec![0.0; m * m];
    for p in 0..grid.len() {
        let bp = b.at(p);

        let mut worst: f64 = 0.0;
        for &(i, j) in &pairs {
            for &(kk, l) in &pairs {
                let mut rhs = 0.0;
                for s in 0..k {
                    rhs += bp[bi(s, i, kk)] * bp[bi(s, j, l)] - bp[bi(s, i, l)] * bp[bi(s, j, kk)];
                }
                worst = worst.max((curv.r(p, i, j, kk, l) - rhs).abs());
            }
        }
        gauss[p] = worst;

        for s in 0..k {
            for i in 0..m {
                for j in 0..m {
                    for c in 0..m {
                        let mut v = db[c].get(p, bi(s, i, j));
                        for q in 0..m {
                            v += gamma.get(p, q, i, j) * bp[bi(s, q, c)];
                        }
                        for n in 0..k {
                            v += mu.mu(p, n, s, c) * bp[bi(n, i, j)];
                        }
                        e[((s * m + i) * m + j) * m + c] = v;
                    }
                }
            }
        }
        let mut worst: f64 = 0.0;
        for s in 0..k {
            for i in 0..m {
                for j in 0..m {
                    for c in j + 1..m {
                        let r = e[((s * m + i) * m + j) * m + c] - e[((s * m + i) * m + c) * m + j];
                        worst = worst.max(r.abs());
                    }
                }
            }
        }
        codazzi[p] = worst;

        let gi = g.ginv(p);
        let mut worst: f64 = 0.0;
        for s in 0..k {
            for n in s + 1..k {
                for i in 0..m {
                    for j in 0..m {
                        let mut v = 0.0;
                        for a in 0..m {
                            for c in 0..m {
                                v += bp[bi(s, i, a)] * gi[a * m + c] * bp[bi(n, j, c)];
                            }
                        }
                        prod[i * m + j] = v;
                    }
                }
                for i in 0..m {
                    for j in i + 1..m {
                        worst = worst.max((prod[i * m + j] - prod[j * m + i]).abs());
                    }
                }
            }
        }
        ricci[p] = worst;
    }
    Ok(GcrResiduals {
        gauss: Field::new(grid.clone(), 1, gauss)?,
        codazzi: Field::new(grid.clone(), 1, codazzi)?,
        ricci: Field::new(grid, 1, ricci)?,
    })
}
