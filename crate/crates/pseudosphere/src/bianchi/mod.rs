//! The Bianchi transformation x̃ = x + ∂x/∂u₁ of an immersion in horospherical
//! coordinates, its rank and kernel, the adapted normal frame and the
//! integrability tests of the distinguished distributions.

mod align;
mod beltrami;
mod curves;
mod distribution;
mod transform;

use thiserror::Error;

use crate::fieldcalc::FieldError;
use crate::geometry::GeometryError;

pub use align::{align_frame, AlignedFrame, NO_DEGENERACY_FLOOR};
pub use beltrami::{beltrami_surface, BELTRAMI_U1, BELTRAMI_U2};
pub use curves::{null_curve_check, trace_null_curve, NullCurveSummary, Trajectory};
pub use distribution::{
    distribution_triple, frobenius_defects, holonomicity_residual, holonomicity_test,
    DistributionTriple, HolonomicityResult, KERNEL_FLOOR,
};
pub use transform::{
    bianchi_transform, check_horospherical, project_slice, BianchiResult, AffineFrame,
    HOROSPHERICAL_TOLERANCE, RANK_TAU,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BianchiError {
    #[error("chart is not horospherical at node {node}: metric deviation {deviation:e}")]
    NotHorospherical { node: usize, deviation: f64 },
    #[error("rank undecidable at node {node}: singular-value ratio {ratio:e}")]
    RankAmbiguous { node: usize, ratio: f64 },
    #[error("mixed second-form vector vanishes at node {node}")]
    NoDegeneracy { node: usize },
    #[error("kernel coefficients (b12, b13) vanish at node {node}")]
    KernelVanishes { node: usize },
    #[error("trajectory left the grid at {point:?}")]
    LeftDomain { point: Vec<f64> },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
