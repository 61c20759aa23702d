use serde::{Deserialize, Serialize};

use crate::bianchi::{bianchi_transform, beltrami_surface, BELTRAMI_U1, BELTRAMI_U2};
use crate::codazzi::{build_surface, Case, SurfaceSpec};
use crate::fieldcalc::{affine_span_dim, Axis};
use crate::lift::lift;
use crate::INTERIOR_BAND;

use super::example::expected_image_curvature;
use super::pipeline::LIFT_V3;
use super::{stage, Check, Relation, RunMetadata, Tolerances, VerificationReport, VerifyError, VerifyOptions};

/// Image curvature of Example 2 for one value of a.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub a: f64,
    pub expected: f64,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub report: VerificationReport,
}

impl SweepReport {
    pub fn to_text(&self) -> String {
        let mut s = format!("{:>8} {:>12} {:>12} {:>12} {:>12}\n", "a", "expected", "mean", "min", "max");
        for r in &self.rows {
            s += &format!("{:>8} {:>12.6} {:>12.6} {:>12.6} {:>12.6}\n", r.a, r.expected, r.mean, r.min, r.max);
        }
        s + &self.report.to_text()
    }
}

fn image_curvature(spec: &SurfaceSpec, n3: usize, tol: &Tolerances) -> Result<SweepRow, VerifyError> {
    stage("spec", spec.validate())?;
    let (_, surface) = stage("build", build_surface(spec))?;
    let lifted = stage("lift", lift(&surface, spec, Axis::new(LIFT_V3.0, LIFT_V3.1, n3)))?;
    let br = stage("bianchi", bianchi_transform(&lifted.x, tol.rank_tau))?;
    let frame = crate::bianchi::AffineFrame::fit(&br.image);
    let slice = stage("bianchi", crate::bianchi::project_slice(&br.image, &frame, n3 / 2))?;
    let shape = stage("image", crate::geometry::shape_operator(&slice))?;
    let (mut sum, mut count, mut min, mut max) = (0.0, 0usize, f64::INFINITY, f64::NEG_INFINITY);
    for p in slice.grid().interior(INTERIOR_BAND) {
        let k = shape.gauss_curvature.get(p, 0);
        sum += k;
        count += 1;
        min = min.min(k);
        max = max.max(k);
    }
    let a = match spec.case {
        Case::Example2 { a } => a,
        Case::Example1 => f64::INFINITY,
    };
    Ok(SweepRow { a, expected: expected_image_curvature(spec.case), mean: sum / count as f64, min, max })
}

/// Image curvature of Example 2 over several values of a, with checks that it
/// matches −a²/(a² − 1), increases strictly with a and stays below −1.
pub fn sweep(a_values: &[f64], n: usize, opts: &VerifyOptions) -> Result<SweepReport, VerifyError> {
    let tol = opts.tolerances;
    let mut a_sorted = a_values.to_vec();
    a_sorted.sort_by(f64::total_cmp);
    let rows = a_sorted
        .iter()
        .map(|&a| image_curvature(&SurfaceSpec::example2(a, n), opts.n3, &tol))
        .collect::<Result<Vec<_>, _>>()?;
    let mut report = VerificationReport::new(RunMetadata::new("image curvature sweep over a", None, Some(opts.n3), tol));
    let anchor = "image curvature increases with a and tends to -1";
    for r in &rows {
        report.push(Check::new(
            &format!("sweep.a_{}", r.a),
            &format!("mean image curvature at a = {} equals {:.6}", r.a, r.expected),
            "curvature of the Bianchi image",
            (r.mean - r.expected).abs(),
            Relation::Below,
            tol.curvature,
        ));
    }
    let gaps = rows.windows(2).map(|w| w[1].mean - w[0].mean).fold(f64::INFINITY, f64::min);
    report.push(Check::new(
        "sweep.monotone",
        "smallest increase of the mean image curvature between consecutive a",
        anchor,
        if rows.len() < 2 { f64::INFINITY } else { gaps },
        Relation::Above,
        0.0,
    ));
    report.push(Check::new(
        "sweep.below_minus_one",
        "largest mean image curvature stays below -1",
        anchor,
        rows.iter().map(|r| r.mean).fold(f64::NEG_INFINITY, f64::max),
        Relation::Below,
        -1.0,
    ));
    Ok(SweepReport { rows, report })
}

/// Bianchi transformation of the tractrix surface: rank one everywhere and an
/// image on a straight line.
pub fn verify_beltrami(n: usize, tol: &Tolerances) -> Result<VerificationReport, VerifyError> {
    let x = stage("beltrami", beltrami_surface(BELTRAMI_U1, BELTRAMI_U2, n, n))?;
    let br = stage("bianchi", bianchi_transform(&x, tol.rank_tau))?;
    let mut rep = VerificationReport::new(RunMetadata::new("Beltrami pseudo-sphere control", None, None, *tol));
    let anchor = "the Bianchi transformation of the pseudo-sphere degenerates to a straight line";
    let total = x.grid().interior(INTERIOR_BAND).count();
    let rank1 = x.grid().interior(INTERIOR_BAND).filter(|&p| br.ranks.rank(p) == 1).count();
    rep.push(Check::new(
        "beltrami.rank_one",
        "fraction of interior nodes where the Bianchi Jacobian has rank 1",
        anchor,
        rank1 as f64 / total as f64,
        Relation::AtLeast,
        1.0,
    ));
    let span = stage("bianchi", affine_span_dim(br.image.data(), 3, tol.rank_tau))?;
    rep.push(Check::new("beltrami.affine_span", "affine span dimension of the image", anchor, span as f64, Relation::AtMost, 1.0));
    rep.push(Check::new(
        "beltrami.image_on_axis",
        "image components off the rotation axis",
        anchor,
        br.image.select(&[0, 1]).sup(),
        Relation::Below,
        tol.flat_components,
    ));
    Ok(rep)
}
