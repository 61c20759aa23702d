//! Grids, sampled fields, finite differences and small linear-algebra helpers.

mod field;
pub mod grid;
mod interp;
mod linalg;
mod stencil;

use thiserror::Error;

pub use field::{Field, MatrixField};
pub use grid::{Axis, Grid, MIN_NODES};
pub use interp::{cubic_on_line, cubic_weights, sample_cubic};
pub use linalg::{
    affine_span_dim, invert, min_eigenvalue, node_svd, numeric_rank, point_cloud_singular_values,
    rank_profile, singular_values, NodeSvd, RankProfile,
};
pub use stencil::{diff_line, jacobian, jacobian_from_columns, partial};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("axis {axis} out of range for a {dim}-axis grid")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("axis {axis} has {n} nodes; at least 5 are needed")]
    GridTooSmall { axis: usize, n: usize },
    #[error("axis {axis} has an empty or non-finite range [{min}, {max}]")]
    EmptyAxis { axis: usize, min: f64, max: f64 },
    #[error("grids of dimension {0} are not supported")]
    BadDimension(usize),
    #[error("derivative order {0} is not supported (use 1 or 2)")]
    BadOrder(u8),
    #[error("non-finite value at node {node}")]
    NonFiniteEntry { node: usize },
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("need at least two points, got {0}")]
    TooFewPoints(usize),
    #[error("relative threshold {0} must lie in (0, 1)")]
    BadThreshold(f64),
    #[error("coordinate {value} outside the grid range [{min}, {max}]")]
    OutOfGrid { value: f64, min: f64, max: f64 },
}
