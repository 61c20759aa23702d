use crate::codazzi::{Case, SurfaceSpec};
use crate::fieldcalc::partial;
use crate::geometry::anchor_node;
use crate::lift::CanonicalTemplate;
use crate::INTERIOR_BAND;

use super::{run_pipeline, stage, Check, Pipeline, Relation, RunMetadata, VerificationReport, VerifyError, VerifyOptions};

/// Worst deviations of the measured lift data from a canonical template.
struct TemplateDeviation {
    metric: f64,
    b1: f64,
    b2: f64,
    mu: f64,
    reduced: f64,
}

impl TemplateDeviation {
    fn worst(&self) -> f64 {
        [self.metric, self.b1, self.b2, self.mu, self.reduced].into_iter().fold(0.0, f64::max)
    }
}

fn deviation(pl: &Pipeline, template: CanonicalTemplate) -> Result<TemplateDeviation, VerifyError> {
    let grid = pl.lifted.grid().clone();
    let n3 = grid.axis(2).n;
    let forms = &pl.aligned.forms;
    let anchor = anchor_node(&grid);
    // b¹₁₁ > 0 in the template; n₂ is fixed by b² coinciding with the base data.
    let s1 = if forms.get(anchor, 0, 0, 0) < 0.0 { -1.0 } else { 1.0 };
    let s2 = if forms.get(anchor, 1, 0, 1) * pl.solution.at(anchor / n3)[1] < 0.0 { -1.0 } else { 1.0 };

    let sol = &pl.solution;
    let stacked = sol.stacked();
    let d1 = stage("case identification", partial(&stacked, 0, 1))?;
    let d2 = stage("case identification", partial(&stacked, 1, 1))?;
    let bgrid = stacked.grid().clone();
    let mut reduced = 0.0_f64;
    for q in bgrid.interior(INTERIOR_BAND) {
        let c = bgrid.coords(q);
        let r = template.reduced_residuals(c[0], c[1], sol.at(q), three(d1.at(q)), three(d2.at(q)));
        reduced = r.iter().fold(reduced, |w, v| w.max(v.abs()));
    }

    let mut dev = TemplateDeviation { metric: 0.0, b1: 0.0, b2: 0.0, mu: 0.0, reduced };
    for p in grid.interior(INTERIOR_BAND) {
        let c = grid.coords(p);
        let gm = template.metric(c[0], c[1]);
        for i in 0..3 {
            for j in 0..3 {
                let r = if i == j { gm[i] } else { 0.0 };
                dev.metric = dev.metric.max((pl.metric.get(p, i, j) - r).abs());
            }
        }
        let b1 = template.b1(c[0], c[1]).unwrap_or([f64::INFINITY; 3]);
        let b2 = sol.at(p / n3);
        let bt2 = [[b2[0], b2[1], 0.0], [b2[1], b2[2], 0.0], [0.0; 3]];
        for i in 0..3 {
            for j in 0..3 {
                let r1 = if i == j { b1[i] } else { 0.0 };
                dev.b1 = dev.b1.max((s1 * forms.get(p, 0, i, j) - r1).abs());
                dev.b2 = dev.b2.max((s2 * forms.get(p, 1, i, j) - bt2[i][j]).abs());
            }
        }
        let mu = template.mu(c[0], c[1], b2);
        let m = [mu[0], mu[1], 0.0];
        for (i, mi) in m.iter().enumerate() {
            dev.mu = dev.mu.max((s1 * s2 * pl.torsion.mu(p, 0, 1, i) - mi).abs());
        }
    }
    for v in [&mut dev.metric, &mut dev.b1, &mut dev.b2, &mut dev.mu, &mut dev.reduced] {
        if v.is_nan() {
            *v = f64::INFINITY;
        }
    }
    Ok(dev)
}

fn three(s: &[f64]) -> [f64; 3] {
    [s[0], s[1], s[2]]
}

fn label(t: CanonicalTemplate) -> String {
    match t {
        CanonicalTemplate::Case1 => "case 1 (f = 1)".into(),
        CanonicalTemplate::Case2 { f0 } => format!("case 2 (f0 = {f0})"),
    }
}

/// The template a case must *not* match, used as the negative control.
fn foreign_template(case: Case) -> CanonicalTemplate {
    match case {
        Case::Example1 => CanonicalTemplate::Case2 { f0: 3.0 },
        Case::Example2 { .. } => CanonicalTemplate::Case1,
    }
}

/// Checks that the measured metric, second forms and torsion of the lift
/// coincide with the canonical forms of the matching family (Case 1 with
/// f ≡ 1, Case 2 with f₀ = a² − 1), and that a foreign template is rejected.
pub fn verify_case_identification(spec: &SurfaceSpec, opts: &VerifyOptions) -> Result<VerificationReport, VerifyError> {
    verify_case_identification_with(spec, opts, CanonicalTemplate::for_case(spec.case), foreign_template(spec.case))
}

/// As [`verify_case_identification`] with explicit matching and foreign templates.
pub fn verify_case_identification_with(
    spec: &SurfaceSpec,
    opts: &VerifyOptions,
    matching: CanonicalTemplate,
    foreign: CanonicalTemplate,
) -> Result<VerificationReport, VerifyError> {
    let tol = opts.tolerances;
    let pl = run_pipeline(spec, opts.n3, tol.rank_tau)?;
    let mut rep = VerificationReport::new(RunMetadata::new(
        &format!("canonical form identification of {}", spec.case.label()),
        Some(spec.clone()),
        Some(opts.n3),
        tol,
    ));
    let anchor = "canonical forms of the classification";
    let d = deviation(&pl, matching)?;
    let name = label(matching);
    for (key, what, v) in [
        ("metric", "metric", d.metric),
        ("b1", "second form along n1", d.b1),
        ("b2", "second form along n2", d.b2),
        ("torsion", "torsion, with mu_12|3 = 0", d.mu),
        ("reduced_system", "reduced system", d.reduced),
    ] {
        rep.push(Check::new(
            &format!("case_id.{key}"),
            &format!("{what} matches {name}"),
            anchor,
            v,
            Relation::Below,
            tol.pointwise,
        ));
    }
    let f = deviation(&pl, foreign)?;
    rep.push(Check::new(
        "case_id.negative_control",
        &format!("forms are rejected by the foreign template {}", label(foreign)),
        anchor,
        f.worst(),
        Relation::AtLeast,
        tol.pointwise,
    ));
    Ok(rep)
}
