//! Intrinsic and extrinsic geometry of sampled immersions.

mod curvature;
mod forms;
mod frame;
mod metric;
mod residuals;
mod surface;

use thiserror::Error;

use crate::fieldcalc::FieldError;

pub use curvature::{index_pairs, riemann, CurvatureField};
pub use forms::{second_forms, torsion, SecondFormField, TorsionField};
pub use frame::{anchor_node, normal_frame, normal_frame_with_seed, raster_parent, NormalFrameField};
pub use metric::{
    christoffel, induced_metric, metric_from_jet, ChristoffelField, Jet, MetricField,
    DEGENERACY_FLOOR,
};
pub use residuals::{gcr_residuals, GcrResiduals};
pub use surface::{shape_operator, ShapeOperatorField};

pub(crate) use metric::dot;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("degenerate immersion at node {node}: metric eigenvalue {eigenvalue:e}")]
    DegenerateImmersion { node: usize, eigenvalue: f64 },
    #[error("seed basis does not span the normal space at node {node}")]
    SeedDegenerate { node: usize },
    #[error("{0}")]
    Shape(String),
}
