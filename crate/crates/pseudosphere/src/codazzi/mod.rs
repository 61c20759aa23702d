//! Base surfaces with prescribed metric: Codazzi data by the method of lines
//! and reconstruction by moving-frame integration.

mod frame;
mod solver;
mod spec;

use thiserror::Error;

use crate::fieldcalc::FieldError;
use crate::geometry::GeometryError;

pub use frame::{
    build_surface, integrate_frame, integrate_frame_with, BaseMetric, BuiltSurface, Euclidean,
    PATH_TOLERANCE,
};
pub use solver::{reduced_system_residuals, solve_codazzi, CodazziSolution, BLOW_UP, PIVOT_FLOOR};
pub use spec::{
    prescribed_metric, Case, Domain, InitialData, SurfaceSpec, EXAMPLE1_V1_MIN,
    EXAMPLE2_CONE_MARGIN,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CodazziError {
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("Gauss-constraint pivot lost at (v1, v2) = ({v1}, {v2}): b22 = {value:e}")]
    PivotLoss { v1: f64, v2: f64, value: f64 },
    #[error("Codazzi evolution blew up at (v1, v2) = ({v1}, {v2})")]
    BlowUp { v1: f64, v2: f64 },
    #[error("frame integration orders disagree by {difference:e}")]
    PathInconsistency { difference: f64 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
