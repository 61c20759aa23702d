use crate::fieldcalc::{invert, min_eigenvalue, partial, Field, Grid};

use super::GeometryError;

/// Smallest admissible metric eigenvalue.
pub const DEGENERACY_FLOOR: f64 = 1e-10;

/// First and second chart derivatives of an immersion, computed once and shared.
///
/// Second derivatives are compositions of first-derivative stencils.
#[derive(Debug, Clone)]
pub struct Jet {
    x: Field,
    first: Vec<Field>,
    second: Vec<Field>,
}

impl Jet {
    pub fn first_order(x: &Field) -> Result<Self, GeometryError> {
        let m = x.grid().dim();
        let first = (0..m).map(|k| partial(x, k, 1)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self { x: x.clone(), first, second: Vec::new() })
    }

    pub fn second_order(x: &Field) -> Result<Self, GeometryError> {
        let mut jet = Self::first_order(x)?;
        let m = jet.dim();
        for i in 0..m {
            for j in i..m {
                jet.second.push(partial(&jet.first[j], i, 1)?);
            }
        }
        Ok(jet)
    }

    pub fn x(&self) -> &Field {
        &self.x
    }

    pub fn grid(&self) -> &Grid {
        self.x.grid()
    }

    pub fn dim(&self) -> usize {
        self.x.grid().dim()
    }

    pub fn ambient(&self) -> usize {
        self.x.ncomp()
    }

    pub fn d1(&self, i: usize) -> &Field {
        &self.first[i]
    }

    /// Mixed second derivative ∂ᵢ∂ⱼx; panics if the jet is first order only.
    pub fn d2(&self, i: usize, j: usize) -> &Field {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        let m = self.dim();
        &self.second[a * m - a * (a + 1) / 2 + b]
    }

    pub fn has_second(&self) -> bool {
        !self.second.is_empty()
    }

    /// Tangent vector ∂ᵢx at a node.
    pub fn tangent(&self, node: usize, i: usize) -> &[f64] {
        self.first[i].at(node)
    }
}

/// Per-node symmetric positive-definite `m × m` metric with cached inverse.
#[derive(Debug, Clone)]
pub struct MetricField {
    grid: Grid,
    m: usize,
    g: Vec<f64>,
    ginv: Vec<f64>,
}

impl MetricField {
    /// Builds a metric from full row-major per-node matrices.
    pub fn new(grid: Grid, m: usize, g: Vec<f64>) -> Result<Self, GeometryError> {
        let s = m * m;
        if g.len() != grid.len() * s {
            return Err(GeometryError::Shape("metric storage does not match grid".into()));
        }
        let mut ginv = Vec::with_capacity(g.len());
        for (p, block) in g.chunks_exact(s).enumerate() {
            if block.iter().any(|v| !v.is_finite()) {
                return Err(crate::fieldcalc::FieldError::NonFiniteEntry { node: p }.into());
            }
            let lam = min_eigenvalue(block, m);
            if lam <= DEGENERACY_FLOOR {
                return Err(GeometryError::DegenerateImmersion { node: p, eigenvalue: lam });
            }
            let inv = invert(block, m).ok_or(GeometryError::DegenerateImmersion {
                node: p,
                eigenvalue: lam,
            })?;
            ginv.extend_from_slice(&inv);
        }
        Ok(Self { grid, m, g, ginv })
    }

    /// Evaluates a closed-form metric `f(coords, out)` at every node.
    pub fn from_fn<F>(grid: Grid, m: usize, mut f: F) -> Result<Self, GeometryError>
    where
        F: FnMut(&[f64; 3], &mut [f64]),
    {
        let s = m * m;
        let mut g = vec![0.0; grid.len() * s];
        for (p, out) in g.chunks_exact_mut(s).enumerate() {
            f(&grid.coords(p), out);
        }
        Self::new(grid, m, g)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn g(&self, node: usize) -> &[f64] {
        let s = self.m * self.m;
        &self.g[node * s..(node + 1) * s]
    }

    pub fn ginv(&self, node: usize) -> &[f64] {
        let s = self.m * self.m;
        &self.ginv[node * s..(node + 1) * s]
    }

    pub fn get(&self, node: usize, i: usize, j: usize) -> f64 {
        self.g[(node * self.m + i) * self.m + j]
    }

    pub fn inv(&self, node: usize, i: usize, j: usize) -> f64 {
        self.ginv[(node * self.m + i) * self.m + j]
    }

    /// Metric components as a field with `m²` components per node.
    pub fn as_field(&self) -> Field {
        Field::new(self.grid.clone(), self.m * self.m, self.g.clone())
            .expect("metric storage is finite and sized to the grid")
    }

    /// Inner product of two chart vectors at a node.
    pub fn dot(&self, node: usize, x: &[f64], y: &[f64]) -> f64 {
        let g = self.g(node);
        let m = self.m;
        let mut s = 0.0;
        for i in 0..m {
            for j in 0..m {
                s += g[i * m + j] * x[i] * y[j];
            }
        }
        s
    }

    /// Largest deviation from another metric over nodes at least `band` from the boundary.
    pub fn max_deviation(&self, other: &MetricField, band: usize) -> f64 {
        self.grid
            .interior(band)
            .flat_map(|p| self.g(p).iter().zip(other.g(p)).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max)
    }
}

pub fn induced_metric(x: &Field) -> Result<MetricField, GeometryError> {
    metric_from_jet(&Jet::first_order(x)?)
}

/// gᵢⱼ = ⟨∂ᵢx, ∂ⱼx⟩ at every node.
pub fn metric_from_jet(jet: &Jet) -> Result<MetricField, GeometryError> {
    let m = jet.dim();
    let grid = jet.grid().clone();
    let mut g = vec![0.0; grid.len() * m * m];
    for p in 0..grid.len() {
        for i in 0..m {
            for j in i..m {
                let v = dot(jet.tangent(p, i), jet.tangent(p, j));
                g[(p * m + i) * m + j] = v;
                g[(p * m + j) * m + i] = v;
            }
        }
    }
    MetricField::new(grid, m, g)
}

/// Christoffel symbols of the second kind, Γᵏᵢⱼ stored as `[k][i][j]` per node.
#[derive(Debug, Clone)]
pub struct ChristoffelField {
    grid: Grid,
    m: usize,
    data: Vec<f64>,
}

impl ChristoffelField {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn get(&self, node: usize, k: usize, i: usize, j: usize) -> f64 {
        let m = self.m;
        self.data[((node * m + k) * m + i) * m + j]
    }

    pub fn at(&self, node: usize) -> &[f64] {
        let s = self.m * self.m * self.m;
        &self.data[node * s..(node + 1) * s]
    }

    pub fn as_field(&self) -> Field {
        let s = self.m * self.m * self.m;
        Field::new(self.grid.clone(), s, self.data.clone()).expect("finite Christoffel symbols")
    }
}

/// Γᵏᵢⱼ = ½ gᵏˡ(∂ᵢgⱼₗ + ∂ⱼgᵢₗ − ∂ₗgᵢⱼ) with finite-difference metric derivatives.
pub fn christoffel(g: &MetricField) -> Result<ChristoffelField, GeometryError> {
    let m = g.dim();
    let gf = g.as_field();
    let dg: Vec<Field> = (0..m).map(|k| partial(&gf, k, 1)).collect::<Result<_, _>>()?;
    let grid = g.grid().clone();
    let mut data = vec![0.0; grid.len() * m * m * m];
    let mut lower = vec![0.0; m * m * m];
    for p in 0..grid.len() {
        let d = |a: usize, i: usize, j: usize| dg[a].get(p, i * m + j);
        for l in 0..m {
            for i in 0..m {
                for j in i..m {
                    let v = 0.5 * (d(i, j, l) + d(j, i, l) - d(l, i, j));
                    lower[(l * m + i) * m + j] = v;
                    lower[(l * m + j) * m + i] = v;
                }
            }
        }
        let gi = g.ginv(p);
        let out = &mut data[p * m * m * m..(p + 1) * m * m * m];
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    out[(k * m + i) * m + j] =
                        (0..m).map(|l| gi[k * m + l] * lower[(l * m + i) * m + j]).sum();
                }
            }
        }
    }
    Ok(ChristoffelField { grid, m, data })
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
