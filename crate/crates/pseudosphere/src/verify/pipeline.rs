use crate::bianchi::{align_frame, bianchi_transform, project_slice, AffineFrame, AlignedFrame, BianchiResult};
use crate::codazzi::{build_surface, BuiltSurface, CodazziSolution, SurfaceSpec};
use crate::fieldcalc::{Axis, Field};
use crate::geometry::{
    metric_from_jet, normal_frame, shape_operator, torsion, Jet, MetricField, ShapeOperatorField, TorsionField,
};
use crate::lift::{lift, LiftedSubmanifold};

use super::{stage, VerifyError};

/// v₃ range of the standard lift.
pub const LIFT_V3: (f64, f64) = (-0.4, 0.4);

/// Every intermediate product of build → lift → Bianchi → geometry.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub spec: SurfaceSpec,
    pub solution: CodazziSolution,
    pub surface: BuiltSurface,
    pub lifted: LiftedSubmanifold,
    pub jet: Jet,
    pub metric: MetricField,
    pub bianchi: BianchiResult,
    pub aligned: AlignedFrame,
    pub torsion: TorsionField,
    /// Best-fit ℝ³ of the Bianchi image and the middle v₃ slice expressed in it.
    pub image_frame: AffineFrame,
    pub image_slice: Field,
    pub image_shape: ShapeOperatorField,
}

impl Pipeline {
    pub fn v3_axis(&self) -> Axis {
        *self.lifted.grid().axis(2)
    }
}

/// Runs the whole chain for `spec` with `n3` nodes along v₃.
pub fn run_pipeline(spec: &SurfaceSpec, n3: usize, rank_tau: f64) -> Result<Pipeline, VerifyError> {
    stage("spec", spec.validate())?;
    let (solution, surface) = stage("build", build_surface(spec))?;
    let v3 = Axis::new(LIFT_V3.0, LIFT_V3.1, n3);
    let lifted = stage("lift", lift(&surface, spec, v3))?;
    let bianchi = stage("bianchi", bianchi_transform(&lifted.x, rank_tau))?;
    let jet = stage("geometry", Jet::second_order(&lifted.x))?;
    let metric = stage("geometry", metric_from_jet(&jet))?;
    let frame = stage("geometry", normal_frame(&jet))?;
    let aligned = stage("align", align_frame(&jet, &frame))?;
    let torsion = stage("geometry", torsion(&aligned.frame))?;
    let image_frame = AffineFrame::fit(&bianchi.image);
    let image_slice = stage("bianchi", project_slice(&bianchi.image, &image_frame, n3 / 2))?;
    let image_shape = stage("image", shape_operator(&image_slice))?;
    Ok(Pipeline {
        spec: spec.clone(),
        solution,
        surface,
        lifted,
        jet,
        metric,
        bianchi,
        aligned,
        torsion,
        image_frame,
        image_slice,
        image_shape,
    })
}
