use crate::fieldcalc::{partial, Field, Grid};

use super::metric::dot;
use super::{GeometryError, Jet, NormalFrameField};

/// Second fundamental forms b^σ_ij, one symmetric `m × m` block per normal.
#[derive(Debug, Clone)]
pub struct SecondFormField {
    grid: Grid,
    m: usize,
    codim: usize,
    data: Vec<f64>,
}

impl SecondFormField {
    pub fn new(grid: Grid, m: usize, codim: usize, data: Vec<f64>) -> Result<Self, GeometryError> {
        if data.len() != grid.len() * codim * m * m {
            return Err(GeometryError::Shape("second-form storage does not match grid".into()));
        }
        Ok(Self { grid, m, codim, data })
    }

    /// Builds forms from a closure filling `[σ][i][j]` per node.
    pub fn from_fn<F>(grid: Grid, m: usize, codim: usize, mut f: F) -> Result<Self, GeometryError>
    where
        F: FnMut(usize, &mut [f64]),
    {
        let s = codim * m * m;
        let mut data = vec![0.0; grid.len() * s];
        for (p, out) in data.chunks_exact_mut(s).enumerate() {
            f(p, out);
        }
        Self::new(grid, m, codim, data)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    pub fn get(&self, node: usize, s: usize, i: usize, j: usize) -> f64 {
        let m = self.m;
        self.data[((node * self.codim + s) * m + i) * m + j]
    }

    pub fn at(&self, node: usize) -> &[f64] {
        let w = self.codim * self.m * self.m;
        &self.data[node * w..(node + 1) * w]
    }

    pub fn as_field(&self) -> Field {
        Field::new(self.grid.clone(), self.codim * self.m * self.m, self.data.clone())
            .expect("finite second forms")
    }

    /// Copy with `delta` added to b^σ_ij (and b^σ_ji) at every node.
    pub fn perturbed(&self, s: usize, i: usize, j: usize, delta: f64) -> Self {
        let mut out = self.clone();
        let m = self.m;
        for p in 0..self.grid.len() {
            out.data[((p * self.codim + s) * m + i) * m + j] += delta;
            if i != j {
                out.data[((p * self.codim + s) * m + j) * m + i] += delta;
            }
        }
        out
    }
}

/// b^σ_ij = ⟨∂ᵢ∂ⱼx, n_σ⟩.
pub fn second_forms(jet: &Jet, frame: &NormalFrameField) -> Result<SecondFormField, GeometryError> {
    if !jet.has_second() {
        return Err(GeometryError::Shape("second forms need a second-order jet".into()));
    }
    if frame.grid() != jet.grid() || frame.ambient() != jet.ambient() {
        return Err(GeometryError::Shape("frame does not match immersion".into()));
    }
    let (m, k) = (jet.dim(), frame.codim());
    SecondFormField::from_fn(jet.grid().clone(), m, k, |p, out| {
        for s in 0..k {
            let n = frame.normal(p, s);
            for i in 0..m {
                for j in i..m {
                    let v = dot(jet.d2(i, j).at(p), n);
                    out[(s * m + i) * m + j] = v;
                    out[(s * m + j) * m + i] = v;
                }
            }
        }
    })
}

/// Normal-connection coefficients μ_{σν|i} = ⟨∂ᵢn_σ, n_ν⟩ for σ < ν.
///
/// The antisymmetric partner μ_{νσ|i} = −μ_{σν|i} is implied by storage.
#[derive(Debug, Clone)]
pub struct TorsionField {
    grid: Grid,
    m: usize,
    codim: usize,
    data: Vec<f64>,
}

impl TorsionField {
    pub fn new(grid: Grid, m: usize, codim: usize, data: Vec<f64>) -> Result<Self, GeometryError> {
        let np = codim * codim.saturating_sub(1) / 2;
        if data.len() != grid.len() * np * m {
            return Err(GeometryError::Shape("torsion storage does not match grid".into()));
        }
        Ok(Self { grid, m, codim, data })
    }

    /// Empty torsion for hypersurfaces.
    pub fn none(grid: Grid, m: usize) -> Self {
        Self { grid, m, codim: 1, data: Vec::new() }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    fn pair(&self, s: usize, n: usize) -> usize {
        // Position of (s, n), s < n, in row-major upper-triangular order.
        s * self.codim - s * (s + 1) / 2 + (n - s - 1)
    }

    /// μ_{σν|i}.
    pub fn mu(&self, node: usize, s: usize, n: usize, i: usize) -> f64 {
        let np = self.codim * (self.codim - 1) / 2;
        match s.cmp(&n) {
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Less => self.data[(node * np + self.pair(s, n)) * self.m + i],
            std::cmp::Ordering::Greater => -self.data[(node * np + self.pair(n, s)) * self.m + i],
        }
    }

    /// μ_{σν|·} as a field of `m` components for one pair σ < ν.
    pub fn pair_field(&self, s: usize, n: usize) -> Field {
        let data = (0..self.grid.len())
            .flat_map(|p| (0..self.m).map(move |i| (p, i)))
            .map(|(p, i)| self.mu(p, s, n, i))
            .collect();
        Field::new(self.grid.clone(), self.m, data).expect("finite torsion")
    }
}

pub fn torsion(frame: &NormalFrameField) -> Result<TorsionField, GeometryError> {
    let grid = frame.grid().clone();
    let (amb, k, m) = (frame.ambient(), frame.codim(), grid.dim());
    let ff = frame.as_field();
    let d: Vec<Field> = (0..m).map(|i| partial(&ff, i, 1)).collect::<Result<_, _>>()?;
    let np = k * k.saturating_sub(1) / 2;
    let mut data = Vec::with_capacity(grid.len() * np * m);
    for p in 0..grid.len() {
        for s in 0..k {
            for n in s + 1..k {
                for di in &d {
                    let dn = &di.at(p)[s * amb..(s + 1) * amb];
                    data.push(dot(dn, frame.normal(p, n)));
                }
            }
        }
    }
    TorsionField::new(grid, m, k, data)
}
