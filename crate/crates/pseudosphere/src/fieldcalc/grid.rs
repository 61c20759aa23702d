use serde::{Deserialize, Serialize};

use super::FieldError;

/// Minimum number of nodes along an axis: the width of the five-point stencils.
pub const MIN_NODES: usize = 5;

/// One uniformly sampled coordinate axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, n: usize) -> Self {
        Self { min, max, n }
    }

    /// Node spacing.
    pub fn h(&self) -> f64 {
        (self.max - self.min) / (self.n - 1) as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.max
        } else {
            self.min + i as f64 * self.h()
        }
    }

    /// Fractional node position of a coordinate value.
    pub fn locate(&self, t: f64) -> f64 {
        (t - self.min) / self.h()
    }

    pub fn contains(&self, t: f64) -> bool {
        let slack = 1e-12 * (self.max - self.min);
        t >= self.min - slack && t <= self.max + slack
    }
}

/// Tensor-product grid over one, two or three chart axes.
///
/// Nodes are stored row-major with the first axis slowest, so a three-axis
/// grid over (v1, v2, v3) has v3 varying fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    axes: Vec<Axis>,
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Result<Self, FieldError> {
        if axes.is_empty() || axes.len() > 3 {
            return Err(FieldError::BadDimension(axes.len()));
        }
        for (k, ax) in axes.iter().enumerate() {
            if ax.n < MIN_NODES {
                return Err(FieldError::GridTooSmall { axis: k, n: ax.n });
            }
            if !(ax.min.is_finite() && ax.max.is_finite()) || ax.max <= ax.min {
                return Err(FieldError::EmptyAxis { axis: k, min: ax.min, max: ax.max });
            }
        }
        Ok(Self { axes })
    }

    pub fn grid2(v1: (f64, f64), v2: (f64, f64), n1: usize, n2: usize) -> Result<Self, FieldError> {
        Self::new(vec![Axis::new(v1.0, v1.1, n1), Axis::new(v2.0, v2.1, n2)])
    }

    pub fn grid3(
        v1: (f64, f64),
        v2: (f64, f64),
        v3: (f64, f64),
        n: [usize; 3],
    ) -> Result<Self, FieldError> {
        Self::new(vec![
            Axis::new(v1.0, v1.1, n[0]),
            Axis::new(v2.0, v2.1, n[1]),
            Axis::new(v3.0, v3.1, n[2]),
        ])
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, k: usize) -> &Axis {
        &self.axes[k]
    }

    pub fn h(&self, k: usize) -> f64 {
        self.axes[k].h()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.n).collect()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Distance in nodes between neighbours along axis `k`.
    pub fn stride(&self, k: usize) -> usize {
        self.axes[k + 1..].iter().map(|a| a.n).product()
    }

    pub fn index(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.axes)
            .fold(0, |acc, (&i, ax)| acc * ax.n + i)
    }

    /// Multi-index of a flat node number; unused trailing slots are zero.
    pub fn multi_index(&self, node: usize) -> [usize; 3] {
        let mut out = [0; 3];
        let mut rest = node;
        for k in (0..self.dim()).rev() {
            out[k] = rest % self.axes[k].n;
            rest /= self.axes[k].n;
        }
        out
    }

    /// Chart coordinates of a node; unused trailing slots are zero.
    pub fn coords(&self, node: usize) -> [f64; 3] {
        let idx = self.multi_index(node);
        let mut out = [0.0; 3];
        for k in 0..self.dim() {
            out[k] = self.axes[k].coord(idx[k]);
        }
        out
    }

    /// True when the node lies at least `band` nodes away from every boundary face.
    pub fn is_interior(&self, node: usize, band: usize) -> bool {
        let idx = self.multi_index(node);
        (0..self.dim()).all(|k| idx[k] >= band && idx[k] + band < self.axes[k].n)
    }

    pub fn interior(&self, band: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&p| self.is_interior(p, band))
    }

    /// Grid with one axis replaced.
    pub fn with_axis(&self, k: usize, axis: Axis) -> Result<Self, FieldError> {
        let mut axes = self.axes.clone();
        axes[k] = axis;
        Self::new(axes)
    }

    /// Grid keeping every `stride`-th node along the first two axes.
    pub fn subsample(&self, stride: usize) -> Result<Self, FieldError> {
        let mut axes = self.axes.clone();
        for ax in axes.iter_mut().take(2) {
            let n = (ax.n - 1) / stride + 1;
            ax.max = ax.min + (n - 1) as f64 * stride as f64 * ax.h();
            ax.n = n;
        }
        Self::new(axes)
    }

    /// Grid obtained by appending a third axis.
    pub fn extend(&self, axis: Axis) -> Result<Self, FieldError> {
        let mut axes = self.axes.clone();
        axes.push(axis);
        Self::new(axes)
    }
}
