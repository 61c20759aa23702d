//! The pseudo-spherical lift F³ ⊂ ℝ⁵ of a base surface, chart conversions
//! between polar (v) and Cartesian (u) horospherical coordinates, and
//! closed-form reference fundamental forms.

mod chart;
mod reference;

use thiserror::Error;

use crate::codazzi::{BuiltSurface, Case, CodazziError, SurfaceSpec};
use crate::fieldcalc::{Axis, Field, FieldError, Grid};

pub use chart::{
    cartesian_to_polar, cartesian_to_polar_chart, covariant_to_cartesian, polar_to_cartesian,
    polar_to_cartesian_chart,
};
pub use reference::{
    canonical_forms, reference_forms, reference_frame, CanonicalTemplate, ReferenceForms,
    ReferenceVariant,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LiftError {
    #[error("base surface was built for another case: {0}")]
    SpecMismatch(String),
    #[error("u-grid needs polar radius {radius} below v2_min = {v2_min}")]
    OriginSingularity { radius: f64, v2_min: f64 },
    #[error("chart point ({0}, {1}) lies outside the source grid")]
    OutsideChart(f64, f64),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Codazzi(#[from] CodazziError),
}

/// F³ sampled over (v₁, v₂, v₃) together with the surface it was lifted from.
#[derive(Debug, Clone)]
pub struct LiftedSubmanifold {
    pub x: Field,
    pub spec: SurfaceSpec,
    pub base: BuiltSurface,
}

impl LiftedSubmanifold {
    pub fn grid(&self) -> &Grid {
        self.x.grid()
    }
}

/// The appended pair (x₄, x₅) at a chart point.
pub fn appended_pair(case: Case, v1: f64, v2: f64, v3: f64) -> [f64; 2] {
    let r = (-v1).exp();
    match case {
        Case::Example1 => [r * v3.cos(), r * v3.sin()],
        Case::Example2 { a } => {
            let s = r * v2 / a;
            [s * (a * v3).cos(), s * (a * v3).sin()]
        }
    }
}

/// Appends the trigonometric pair to x̄ on the tensor product with a v₃ axis.
pub fn lift(base: &BuiltSurface, spec: &SurfaceSpec, v3: Axis) -> Result<LiftedSubmanifold, LiftError> {
    if base.spec.case != spec.case {
        return Err(LiftError::SpecMismatch(format!(
            "base is {}, lift requested for {}",
            base.spec.case.label(),
            spec.case.label()
        )));
    }
    let g2 = base.x.grid();
    let grid = g2.extend(v3)?;
    let n3 = v3.n;
    let case = spec.case;
    let x = Field::from_nodes(grid.clone(), 5, |p, out| {
        let c = grid.coords(p);
        let q = p / n3;
        out[..3].copy_from_slice(base.x.at(q));
        out[3..].copy_from_slice(&appended_pair(case, c[0], c[1], c[2]));
    })?;
    Ok(LiftedSubmanifold { x, spec: spec.clone(), base: base.clone() })
}

/// Keeps every `stride`-th node of a built surface along both axes.
pub fn subsample_surface(base: &BuiltSurface, stride: usize) -> Result<BuiltSurface, LiftError> {
    let grid = base.x.grid();
    let sub = grid.subsample(stride)?;
    let pick = |f: &Field| -> Result<Field, LiftError> {
        let n2 = grid.axis(1).n;
        let m2 = sub.axis(1).n;
        Ok(Field::from_nodes(sub.clone(), f.ncomp(), |p, out| {
            let (i, j) = (p / m2, p % m2);
            out.copy_from_slice(f.at(i * stride * n2 + j * stride));
        })?)
    };
    let mut spec = base.spec.clone();
    spec.domain.v1.1 = sub.axis(0).max;
    spec.domain.v2.1 = sub.axis(1).max;
    spec.domain.n1 = sub.axis(0).n;
    spec.domain.n2 = sub.axis(1).n;
    Ok(BuiltSurface {
        spec,
        x: pick(&base.x)?,
        e1: pick(&base.e1)?,
        e2: pick(&base.e2)?,
        normal: pick(&base.normal)?,
        ..base.clone()
    })
}
