use crate::fieldcalc::{partial, Field, Grid};

use super::{christoffel, ChristoffelField, GeometryError, MetricField};

/// Ordered index pairs (i < j) of an `m`-dimensional chart.
pub fn index_pairs(m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            out.push((i, j));
        }
    }
    out
}

/// Riemann tensor stored as a symmetric matrix over index pairs.
///
/// For pairs A = (i, j) and B = (k, l) with i < j, k < l the entry is
/// R_{ijkl}; the remaining components follow from the skew symmetries, so
/// R_{ijkl} = −R_{jikl} = −R_{ijlk} = R_{klij} hold exactly. The sign
/// convention gives R_{1212} = K det g, positive on the round sphere.
#[derive(Debug, Clone)]
pub struct CurvatureField {
    grid: Grid,
    m: usize,
    pairs: Vec<(usize, usize)>,
    data: Vec<f64>,
    sectional: Vec<f64>,
}

impl CurvatureField {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    fn pair_index(&self, i: usize, j: usize) -> Option<(usize, f64)> {
        if i == j {
            return None;
        }
        let (a, b, s) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
        self.pairs.iter().position(|&q| q == (a, b)).map(|k| (k, s))
    }

    /// R_{ijkl} at a node.
    pub fn r(&self, node: usize, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let np = self.pairs.len();
        match (self.pair_index(i, j), self.pair_index(k, l)) {
            (Some((a, sa)), Some((b, sb))) => sa * sb * self.data[(node * np + a) * np + b],
            _ => 0.0,
        }
    }

    /// Sectional curvature of the coordinate plane (i, j).
    pub fn sectional(&self, node: usize, i: usize, j: usize) -> f64 {
        let (k, _) = self.pair_index(i, j).expect("distinct axes");
        self.sectional[node * self.pairs.len() + k]
    }

    /// Sectional curvatures of all coordinate planes as a field (one per pair).
    pub fn sectional_field(&self) -> Field {
        Field::new(self.grid.clone(), self.pairs.len(), self.sectional.clone())
            .expect("finite sectional curvatures")
    }

    /// Sectional curvature of the plane spanned by chart vectors `x`, `y`.
    pub fn sectional_plane(&self, node: usize, g: &MetricField, x: &[f64], y: &[f64]) -> f64 {
        let np = self.pairs.len();
        let w: Vec<f64> = self.pairs.iter().map(|&(i, j)| x[i] * y[j] - x[j] * y[i]).collect();
        let mut num = 0.0;
        for a in 0..np {
            for b in 0..np {
                num += self.data[(node * np + a) * np + b] * w[a] * w[b];
            }
        }
        let xx = g.dot(node, x, x);
        let yy = g.dot(node, y, y);
        let xy = g.dot(node, x, y);
        num / (xx * yy - xy * xy)
    }
}

/// Riemann tensor from Γ and finite differences of Γ.
pub fn riemann(g: &MetricField) -> Result<CurvatureField, GeometryError> {
    let gamma = christoffel(g)?;
    riemann_from(g, &gamma)
}

pub(crate) fn riemann_from(
    g: &MetricField,
    gamma: &ChristoffelField,
) -> Result<CurvatureField, GeometryError> {
    let m = g.dim();
    let gf = gamma.as_field();
    let dgam: Vec<Field> = (0..m).map(|k| partial(&gf, k, 1)).collect::<Result<_, _>>()?;
    let pairs = index_pairs(m);
    let np = pairs.len();
    let grid = g.grid().clone();
    let mut data = vec![0.0; grid.len() * np * np];
    let mut sectional = vec![0.0; grid.len() * np];
    let gi = |k: usize, i: usize, j: usize| (k * m + i) * m + j;
    // R^a_{jkl} for all a, j and pairs (k, l).
    let mut up = vec![0.0; m * m * np];
    let mut low = vec![0.0; m * m * np];
    for p in 0..grid.len() {
        let gam = gamma.at(p);
        for (b, &(k, l)) in pairs.iter().enumerate() {
            for a in 0..m {
                for j in 0..m {
                    let mut v = dgam[k].get(p, gi(a, l, j)) - dgam[l].get(p, gi(a, k, j));
                    for q in 0..m {
                        v += gam[gi(a, k, q)] * gam[gi(q, l, j)] - gam[gi(a, l, q)] * gam[gi(q, k, j)];
                    }
                    up[(a * m + j) * np + b] = v;
                }
            }
        }
        let gp = g.g(p);
        for i in 0..m {
            for j in 0..m {
                for b in 0..np {
                    low[(i * m + j) * np + b] =
                        (0..m).map(|a| gp[i * m + a] * up[(a * m + j) * np + b]).sum();
                }
            }
        }
        let out = &mut data[p * np * np..(p + 1) * np * np];
        for (a, &(i, j)) in pairs.iter().enumerate() {
            for b in 0..np {
                out[a * np + b] = 0.5 * (low[(i * m + j) * np + b] - low[(j * m + i) * np + b]);
            }
        }
        for a in 0..np {
            for b in a + 1..np {
                let s = 0.5 * (out[a * np + b] + out[b * np + a]);
                out[a * np + b] = s;
                out[b * np + a] = s;
            }
        }
        for (a, &(i, j)) in pairs.iter().enumerate() {
            let den = gp[i * m + i] * gp[j * m + j] - gp[i * m + j] * gp[i * m + j];
            sectional[p * np + a] = out[a * np + a] / den;
        }
    }
    if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
        return Err(crate::fieldcalc::FieldError::NonFiniteEntry { node: pos / (np * np).max(1) }.into());
    }
    Ok(CurvatureField { grid, m, pairs, data, sectional })
}
