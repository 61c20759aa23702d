use super::{FieldError, Grid};

/// Values sampled at every node of a grid, `ncomp` reals per node.
///
/// Scalar fields have one component, immersions one per ambient coordinate.
/// Storage is node-major: the components of node `p` occupy
/// `data[p * ncomp..(p + 1) * ncomp]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    ncomp: usize,
    data: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid, ncomp: usize, data: Vec<f64>) -> Result<Self, FieldError> {
        let expected = grid.len() * ncomp;
        if data.len() != expected {
            return Err(FieldError::LengthMismatch { expected, got: data.len() });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(FieldError::NonFiniteEntry { node: pos / ncomp.max(1) });
        }
        Ok(Self { grid, ncomp, data })
    }

    pub fn zeros(grid: Grid, ncomp: usize) -> Self {
        let n = grid.len() * ncomp;
        Self { grid, ncomp, data: vec![0.0; n] }
    }

    /// Evaluates `f(coords, out)` at every node.
    pub fn from_fn<F>(grid: Grid, ncomp: usize, mut f: F) -> Result<Self, FieldError>
    where
        F: FnMut(&[f64; 3], &mut [f64]),
    {
        let mut data = vec![0.0; grid.len() * ncomp];
        for (p, out) in data.chunks_exact_mut(ncomp).enumerate() {
            f(&grid.coords(p), out);
        }
        Self::new(grid, ncomp, data)
    }

    /// Builds a field node by node from an index-based closure.
    pub fn from_nodes<F>(grid: Grid, ncomp: usize, mut f: F) -> Result<Self, FieldError>
    where
        F: FnMut(usize, &mut [f64]),
    {
        let mut data = vec![0.0; grid.len() * ncomp];
        for (p, out) in data.chunks_exact_mut(ncomp).enumerate() {
            f(p, out);
        }
        Self::new(grid, ncomp, data)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn ncomp(&self) -> usize {
        self.ncomp
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn at(&self, node: usize) -> &[f64] {
        &self.data[node * self.ncomp..(node + 1) * self.ncomp]
    }

    pub fn get(&self, node: usize, c: usize) -> f64 {
        self.data[node * self.ncomp + c]
    }

    pub fn nodes(&self) -> std::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.ncomp)
    }

    /// Single component as a scalar field.
    pub fn component(&self, c: usize) -> Field {
        let data = self.nodes().map(|v| v[c]).collect();
        Field { grid: self.grid.clone(), ncomp: 1, data }
    }

    /// Selected components, in the given order.
    pub fn select(&self, comps: &[usize]) -> Field {
        let data = self
            .nodes()
            .flat_map(|v| comps.iter().map(move |&c| v[c]))
            .collect();
        Field { grid: self.grid.clone(), ncomp: comps.len(), data }
    }

    /// Component-wise sum with another field on the same grid.
    pub fn add(&self, other: &Field) -> Result<Field, FieldError> {
        self.check_same(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Field { grid: self.grid.clone(), ncomp: self.ncomp, data })
    }

    pub fn map<F>(&self, ncomp: usize, mut f: F) -> Result<Field, FieldError>
    where
        F: FnMut(&[f64], &mut [f64]),
    {
        let mut data = vec![0.0; self.grid.len() * ncomp];
        for (src, dst) in self.nodes().zip(data.chunks_exact_mut(ncomp)) {
            f(src, dst);
        }
        Field::new(self.grid.clone(), ncomp, data)
    }

    /// Concatenates the components of several fields on one grid.
    pub fn stack(fields: &[&Field]) -> Result<Field, FieldError> {
        let first = fields.first().ok_or(FieldError::BadDimension(0))?;
        for f in fields {
            first.check_grid(f)?;
        }
        let ncomp = fields.iter().map(|f| f.ncomp).sum();
        let mut data = Vec::with_capacity(first.grid.len() * ncomp);
        for p in 0..first.grid.len() {
            for f in fields {
                data.extend_from_slice(f.at(p));
            }
        }
        Ok(Field { grid: first.grid.clone(), ncomp, data })
    }

    /// Largest absolute entry over the nodes at least `band` away from the boundary.
    pub fn sup_interior(&self, band: usize) -> f64 {
        self.grid
            .interior(band)
            .flat_map(|p| self.at(p).iter())
            .fold(0.0, |m: f64, v| m.max(v.abs()))
    }

    /// Largest absolute entry over all nodes.
    pub fn sup(&self) -> f64 {
        self.data.iter().fold(0.0, |m: f64, v| m.max(v.abs()))
    }

    fn check_grid(&self, other: &Field) -> Result<(), FieldError> {
        if self.grid != other.grid {
            return Err(FieldError::GridMismatch);
        }
        Ok(())
    }

    fn check_same(&self, other: &Field) -> Result<(), FieldError> {
        self.check_grid(other)?;
        if self.ncomp != other.ncomp {
            return Err(FieldError::LengthMismatch { expected: self.ncomp, got: other.ncomp });
        }
        Ok(())
    }
}

/// Per-node dense `rows × cols` matrices stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixField {
    grid: Grid,
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl MatrixField {
    pub fn new(grid: Grid, rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, FieldError> {
        let expected = grid.len() * rows * cols;
        if data.len() != expected {
            return Err(FieldError::LengthMismatch { expected, got: data.len() });
        }
        Ok(Self { grid, rows, cols, data })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, node: usize) -> &[f64] {
        let s = self.rows * self.cols;
        &self.data[node * s..(node + 1) * s]
    }

    pub fn get(&self, node: usize, r: usize, c: usize) -> f64 {
        self.data[(node * self.rows + r) * self.cols + c]
    }

    pub fn scale(&self, s: f64) -> MatrixField {
        let data = self.data.iter().map(|v| v * s).collect();
        MatrixField { grid: self.grid.clone(), rows: self.rows, cols: self.cols, data }
    }
}
