use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bianchi::{
    bianchi_transform, distribution_triple, frobenius_defects, holonomicity_test, null_curve_check,
    trace_null_curve,
};
use crate::codazzi::{
    prescribed_metric, reduced_system_residuals, solve_codazzi, Case, SurfaceSpec, PATH_TOLERANCE,
};
use crate::fieldcalc::{affine_span_dim, partial, Axis, Field};
use crate::geometry::{
    anchor_node, gcr_residuals, induced_metric, riemann, shape_operator, MetricField, SecondFormField,
};
use crate::lift::{
    covariant_to_cartesian, lift, polar_to_cartesian, polar_to_cartesian_chart, reference_forms, reference_frame,
    subsample_surface, ReferenceVariant,
};
use crate::INTERIOR_BAND;

use super::pipeline::LIFT_V3;
use super::{run_pipeline, stage, Check, Pipeline, Relation, RunMetadata, VerificationReport, VerifyError, VerifyOptions};

const BAND: usize = INTERIOR_BAND;
/// Interior nodes sampled for the random-plane curvature checks.
const PLANE_NODES: usize = 200;
/// Random planes of each kind per sampled node.
const PLANES_PER_NODE: usize = 20;
const PLANE_SEED: u64 = 0x5eed_0001;

/// Gauss curvature of the Bianchi image: −1, or −a²/(a² − 1).
pub(crate) fn expected_image_curvature(case: Case) -> f64 {
    match case {
        Case::Example1 => -1.0,
        Case::Example2 { a } => -a * a / (a * a - 1.0),
    }
}

/// Metric diag(1, e^{−2v₁}, e^{−2v₁}a₃₃) of the lift.
fn lift_metric(case: Case, v1: f64, v2: f64) -> [f64; 3] {
    let e = (-2.0 * v1).exp();
    match case {
        Case::Example1 => [1.0, e, e],
        Case::Example2 { .. } => [1.0, e, e * v2 * v2],
    }
}

fn diag_deviation(g: &MetricField, band: usize, f: impl Fn([f64; 3]) -> [f64; 3]) -> f64 {
    let mut worst = 0.0_f64;
    for p in g.grid().interior(band) {
        let d = f(g.grid().coords(p));
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                let r = if i == j { d[i] } else { 0.0 };
                worst = worst.max((g.get(p, i, j) - r).abs());
            }
        }
    }
    worst
}

fn interior_sup(grid: &crate::fieldcalc::Grid, mut f: impl FnMut(usize) -> f64) -> f64 {
    grid.interior(BAND).map(&mut f).fold(0.0, f64::max)
}

/// Global signs making the aligned normals agree with a reference frame at the anchor.
fn frame_signs(pl: &Pipeline, reference: &crate::geometry::NormalFrameField) -> [f64; 2] {
    let a = anchor_node(pl.lifted.grid());
    let mut s = [1.0; 2];
    for (k, sk) in s.iter_mut().enumerate() {
        let d: f64 = pl.aligned.frame.normal(a, k).iter().zip(reference.normal(a, k)).map(|(x, y)| x * y).sum();
        *sk = if d < 0.0 { -1.0 } else { 1.0 };
    }
    s
}

/// Reduced-system residual at `n` and at the grid with twice the spacing.
fn convergence(spec: &SurfaceSpec) -> Result<(f64, f64), VerifyError> {
    let fine = stage("convergence", solve_codazzi(spec))?;
    let rf = stage("convergence", reduced_system_residuals(spec, &fine))?.sup_interior(BAND);
    let mut coarse_spec = spec.clone();
    coarse_spec.domain = spec.domain.with_counts((spec.domain.n1 - 1) / 2 + 1, (spec.domain.n2 - 1) / 2 + 1);
    let coarse = stage("convergence", solve_codazzi(&coarse_spec))?;
    let rc = stage("convergence", reduced_system_residuals(&coarse_spec, &coarse))?.sup_interior(BAND);
    Ok((rc, rf))
}

/// Runs build → lift → Bianchi → geometry for one example and evaluates the
/// whole check battery.
pub fn verify_example(spec: &SurfaceSpec, opts: &VerifyOptions) -> Result<VerificationReport, VerifyError> {
    let tol = opts.tolerances;
    let pl = run_pipeline(spec, opts.n3, tol.rank_tau)?;
    let case = spec.case;
    let mut rep = VerificationReport::new(RunMetadata::new(
        &format!("verification of {}", case.label()),
        Some(spec.clone()),
        Some(opts.n3),
        tol,
    ));
    let lgrid = pl.lifted.grid().clone();

    // Base surface.
    rep.push(Check::new(
        "codazzi.gauss_constraint",
        "evolved Codazzi data keep the Gauss constraint before projection",
        "Gauss equation of the base surface",
        pl.solution.gauss_residual.sup(),
        Relation::Below,
        1e-6,
    ));
    let reduced = stage("build", reduced_system_residuals(spec, &pl.solution))?;
    rep.push(Check::new(
        "codazzi.reduced_system",
        "built coefficients satisfy the reduced Gauss-Codazzi system",
        "reduction of the structure equations to three equations",
        reduced.sup_interior(BAND),
        Relation::Below,
        tol.pointwise,
    ));
    let (rc, rf) = convergence(spec)?;
    let order = if rf > 0.0 && rc > 0.0 { (rc / rf).log2() } else { f64::INFINITY };
    rep.push(Check::new(
        "codazzi.convergence_order",
        "reduced-system residual converges at fourth order under grid refinement",
        "reduction of the structure equations to three equations",
        order,
        Relation::AtLeast,
        3.5,
    ));
    rep.push(Check::new(
        "codazzi.nondegenerate_b12",
        "mixed coefficient b12 of the base stays away from zero",
        "nondegeneracy of the Bianchi transformation",
        pl.solution.min_abs_b12(),
        Relation::Above,
        1e-3,
    ));
    let g_base = stage("geometry", induced_metric(&pl.surface.x))?;
    let g_pres = stage("build", prescribed_metric(spec))?;
    rep.push(Check::new(
        "base.metric",
        "induced metric of the built surface equals the prescribed metric",
        "base metric of the example",
        g_base.max_deviation(&g_pres, BAND),
        Relation::Below,
        tol.pointwise,
    ));
    let shape = stage("geometry", shape_operator(&pl.surface.x))?;
    let bgrid = pl.surface.x.grid().clone();
    let k_err = interior_sup(&bgrid, |p| {
        let c = bgrid.coords(p);
        (shape.gauss_curvature.get(p, 0) - case.gauss_curvature(c[0], c[1])).abs()
    });
    rep.push(Check::new(
        "base.gauss_curvature",
        "Gauss curvature of the built surface equals its closed form",
        "closed-form Gauss curvature of the base metric",
        k_err,
        Relation::Below,
        tol.curvature,
    ));
    rep.push(Check::new(
        "base.frame_path",
        "frame integration along both sweep orders agrees",
        "integrability of the moving-frame equations",
        pl.surface.path_difference,
        Relation::Below,
        PATH_TOLERANCE,
    ));

    // Lift. The metric is compared on a lift with twice the v₃ resolution so
    // that the v₃ stencil error of the appended pair stays below the tolerance.
    let fine = stage("lift", lift(&pl.surface, spec, Axis::new(LIFT_V3.0, LIFT_V3.1, 2 * opts.n3 - 1)))?;
    let g_fine = stage("geometry", induced_metric(&fine.x))?;
    rep.push(Check::new(
        "lift.metric",
        "induced metric of the lift is du1^2 + e^{-2u1}(dv2^2 + a33 dv3^2)",
        "the lifted submanifold is pseudo-spherical",
        diag_deviation(&g_fine, BAND, |c| lift_metric(case, c[0], c[1])),
        Relation::Below,
        tol.frame,
    ));
    let n3 = lgrid.axis(2).n;
    let base_spread = (0..lgrid.len())
        .map(|p| {
            let q = p - p % n3;
            (0..3).map(|i| (pl.lifted.x.get(p, i) - pl.lifted.x.get(q, i)).abs()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    rep.push(Check::new(
        "lift.base_components",
        "first three components of the lift do not depend on v3",
        "lift formula appends a trigonometric pair to the base",
        base_spread,
        Relation::Below,
        tol.algebraic,
    ));
    let curv = stage("geometry", riemann(&pl.metric))?;
    let interior: Vec<usize> = lgrid.interior(BAND).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(PLANE_SEED);
    let (mut k_coord, mut k_generic) = (0.0_f64, 0.0_f64);
    for _ in 0..PLANE_NODES {
        let p = interior[rng.random_range(0..interior.len())];
        for _ in 0..PLANES_PER_NODE {
            let i = rng.random_range(0..3);
            let j = (i + rng.random_range(1..3)) % 3;
            k_coord = k_coord.max((curv.sectional(p, i, j) + 1.0).abs());
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            k_generic = k_generic.max((curv.sectional_plane(p, &pl.metric, &x, &y) + 1.0).abs());
        }
    }
    rep.push(Check::new(
        "lift.sectional_coordinate_planes",
        "sectional curvature of random coordinate planes is -1",
        "constant sectional curvature -1",
        k_coord,
        Relation::Below,
        tol.curvature,
    ));
    rep.push(Check::new(
        "lift.sectional_generic_planes",
        "sectional curvature of random tangent planes is -1",
        "constant sectional curvature -1",
        k_generic,
        Relation::Below,
        tol.curvature,
    ));
    let gcr = stage("geometry", gcr_residuals(&pl.metric, &pl.aligned.forms, &pl.torsion))?;
    let (rg, rcod, rr) = gcr.sup_interior(BAND);
    for (name, claim, v) in [
        ("lift.gauss_equation", "Gauss equation holds for the lift", rg),
        ("lift.codazzi_equation", "Codazzi equations hold for the lift", rcod),
        ("lift.ricci_equation", "Ricci equation holds for the lift", rr),
    ] {
        rep.push(Check::new(name, claim, "Gauss-Codazzi-Ricci equations of the lift", v, Relation::Below, tol.pointwise));
    }
    let mu = pl.torsion.pair_field(0, 1);
    let dmu: Vec<Field> = (0..3).map(|i| stage("geometry", partial(&mu, i, 1))).collect::<Result<_, _>>()?;
    let curl = interior_sup(&lgrid, |p| {
        [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(i, j)| (dmu[i].get(p, j) - dmu[j].get(p, i)).abs())
            .fold(0.0, f64::max)
    });
    rep.push(Check::new(
        "lift.torsion_gradient",
        "torsion coefficients form a gradient (flat normal connection)",
        "torsion is the differential of a potential",
        curl,
        Relation::Below,
        tol.pointwise,
    ));

    // Closed forms.
    let rframe = stage("lift", reference_frame(&pl.lifted))?;
    let v3 = pl.v3_axis();
    let refs = stage("lift", reference_forms(spec, &pl.solution, v3, ReferenceVariant::Example))?;
    let canon = stage("lift", reference_forms(spec, &pl.solution, v3, ReferenceVariant::Canonical))?;
    let sg = frame_signs(&pl, &rframe);
    let frame_err = interior_sup(&lgrid, |p| {
        (0..2)
            .flat_map(|s| (0..5).map(move |i| (s, i)))
            .map(|(s, i)| (sg[s] * pl.aligned.frame.normal(p, s)[i] - rframe.normal(p, s)[i]).abs())
            .fold(0.0, f64::max)
    });
    rep.push(Check::new(
        "frame.closed_form",
        "aligned normal frame equals the closed-form frame up to sign",
        "explicit orthonormal normal frame of the example",
        frame_err,
        Relation::Below,
        tol.frame,
    ));
    rep.push(Check::new(
        "frame.alignment",
        "aligned frame has b1_12 = b1_13 = 0",
        "the degenerate distribution is directed along n2",
        pl.aligned.mixed_residual(BAND),
        Relation::Below,
        tol.frame,
    ));
    let form_err = |s: usize, r: &SecondFormField| {
        interior_sup(&lgrid, |p| {
            (0..9)
                .map(|ij| (sg[s] * pl.aligned.forms.get(p, s, ij / 3, ij % 3) - r.get(p, s, ij / 3, ij % 3)).abs())
                .fold(0.0, f64::max)
        })
    };
    rep.push(Check::new(
        "forms.b1_closed_form",
        "second form along n1 equals its closed form",
        "explicit second fundamental forms of the lift",
        form_err(0, &refs.forms),
        Relation::Below,
        tol.pointwise,
    ));
    rep.push(Check::new(
        "forms.b2_closed_form",
        "second form along n2 equals the base coefficients",
        "explicit second fundamental forms of the lift",
        form_err(1, &refs.forms),
        Relation::Below,
        tol.pointwise,
    ));
    let mu_err = interior_sup(&lgrid, |p| {
        (0..3)
            .map(|i| (sg[0] * sg[1] * pl.torsion.mu(p, 0, 1, i) - refs.torsion.mu(p, 0, 1, i)).abs())
            .fold(0.0, f64::max)
    });
    rep.push(Check::new(
        "forms.torsion_closed_form",
        "torsion coefficients equal their closed form, with mu_12|3 = 0",
        "explicit torsion of the normal frame",
        mu_err,
        Relation::Below,
        tol.pointwise,
    ));
    let mu3 = interior_sup(&lgrid, |p| pl.torsion.mu(p, 0, 1, 2).abs());
    rep.push(Check::new(
        "forms.torsion_v3",
        "torsion component mu_12|3 vanishes",
        "the torsion potential does not depend on v3",
        mu3,
        Relation::Below,
        tol.pointwise,
    ));
    let variant_err = (0..lgrid.len())
        .map(|p| {
            let f = refs.forms.at(p).iter().zip(canon.forms.at(p)).map(|(a, b)| (a - b).abs());
            let t = (0..3).map(|i| (refs.torsion.mu(p, 0, 1, i) - canon.torsion.mu(p, 0, 1, i)).abs());
            f.chain(t).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    rep.push(Check::new(
        "forms.canonical_agreement",
        "canonical family forms coincide with the example forms",
        "canonical forms of the classification with the matching parameters",
        variant_err,
        Relation::Below,
        tol.algebraic,
    ));

    // Bianchi transformation.
    let ranks = &pl.bianchi.ranks;
    let tau = tol.rank_tau;
    rep.push(Check::new(
        "bianchi.rank_sigma3",
        "fraction of interior nodes with sigma3/sigma1 below the rank threshold",
        "the Bianchi transformation is degenerate of rank 2",
        ranks.interior_fraction(BAND, |s| s[2] < tau * s[0]),
        Relation::AtLeast,
        0.99,
    ));
    rep.push(Check::new(
        "bianchi.rank_sigma2",
        "fraction of interior nodes with sigma2/sigma1 above 1e-2",
        "the Bianchi transformation is degenerate of rank 2",
        ranks.interior_fraction(BAND, |s| s[1] > 1e-2 * s[0]),
        Relation::AtLeast,
        0.99,
    ));
    rep.push(Check::new(
        "bianchi.components_4_5",
        "components 4 and 5 of the Bianchi image vanish",
        "the image lies in a three-dimensional subspace",
        pl.bianchi.image.select(&[3, 4]).sup(),
        Relation::Below,
        tol.flat_components,
    ));
    let span = stage("bianchi", affine_span_dim(pl.bianchi.image.data(), 5, tau))?;
    rep.push(Check::new(
        "bianchi.affine_span",
        "affine span dimension of the image cloud",
        "the image lies in a three-dimensional subspace",
        span as f64,
        Relation::AtMost,
        3.0,
    ));
    let image_spread = (0..lgrid.len())
        .map(|p| {
            let q = p - p % n3;
            (0..5).map(|i| (pl.bianchi.image.get(p, i) - pl.bianchi.image.get(q, i)).abs()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    rep.push(Check::new(
        "bianchi.v3_independence",
        "Bianchi image does not depend on v3",
        "the image depends only on v1, v2",
        image_spread,
        Relation::Below,
        tol.frame,
    ));
    let kernel_u1 = pl.bianchi.kernel.component(0).sup_interior(BAND);
    rep.push(Check::new(
        "bianchi.kernel_in_horosphere",
        "kernel direction has no u1 component",
        "null curves lie in the horospheres",
        kernel_u1,
        Relation::Below,
        tol.frame,
    ));
    let kexp = expected_image_curvature(case);
    let sgrid = pl.image_slice.grid().clone();
    let image_k = interior_sup(&sgrid, |p| (pl.image_shape.gauss_curvature.get(p, 0) - kexp).abs());
    rep.push(Check::new(
        "bianchi.image_curvature",
        &format!("Gauss curvature det W of the image equals {kexp:.6}"),
        "curvature of the Bianchi image",
        image_k,
        Relation::Below,
        tol.curvature,
    ));
    let jac = &pl.bianchi.jacobian;
    let (derivative_err, kernel_err) = {
        let mut d = 0.0_f64;
        let mut k = 0.0_f64;
        for p in lgrid.interior(BAND) {
            let f = &pl.aligned.forms;
            for j in 1..3 {
                for i in 0..5 {
                    let model = f.get(p, 0, 0, j) * pl.aligned.frame.normal(p, 0)[i]
                        + f.get(p, 1, 0, j) * pl.aligned.frame.normal(p, 1)[i];
                    d = d.max((jac.get(p, i, j) - model).abs());
                }
            }
            for i in 0..5 {
                let r = -f.get(p, 1, 0, 2) * jac.get(p, i, 1) + f.get(p, 1, 0, 1) * jac.get(p, i, 2);
                k = k.max(r.abs());
            }
        }
        (d, k)
    };
    rep.push(Check::new(
        "bianchi.derivative_identity",
        "d_j of the image equals b1_1j n1 + b2_1j n2 for j = 2, 3",
        "derivatives of the Bianchi image along the horosphere",
        derivative_err,
        Relation::Below,
        tol.pointwise,
    ));
    rep.push(Check::new(
        "bianchi.kernel_relation",
        "-b2_13 d2 + b2_12 d3 annihilates the image",
        "kernel of the Bianchi transformation",
        kernel_err,
        Relation::Below,
        tol.pointwise,
    ));

    // Distributions.
    let triple = stage("distribution", distribution_triple(&pl.aligned.forms, &pl.metric))?;
    rep.push(Check::new(
        "distribution.orthonormal",
        "xi1, xi2, xi3 are g-orthonormal",
        "the three distinguished distributions",
        triple.orthonormality_defect(&pl.metric),
        Relation::Below,
        tol.frame,
    ));
    rep.push(Check::new(
        "distribution.kernel_parallel",
        "xi3 is parallel to the measured kernel",
        "xi3 spans the kernel",
        triple.kernel_angle(&pl.metric, &pl.bianchi.kernel),
        Relation::Below,
        tol.kernel_angle,
    ));
    let fro = stage("distribution", frobenius_defects(&triple, &pl.metric))?;
    rep.push(Check::new(
        "distribution.frobenius",
        "brackets of pairs of xi stay in their span",
        "holonomic degeneracy: pairwise spans are integrable",
        fro.iter().map(|f| f.sup_interior(BAND)).fold(0.0, f64::max),
        Relation::Below,
        tol.pointwise,
    ));

    // Holonomicity in the Cartesian horospherical chart.
    let forms_u = match case {
        Case::Example1 => pl.aligned.forms.clone(),
        Case::Example2 { .. } => {
            let (u2, u3) = cartesian_window(spec);
            let f = stage("chart", covariant_to_cartesian(&pl.aligned.forms.as_field(), u2, u3))?;
            stage("chart", SecondFormField::new(f.grid().clone(), 3, 2, f.into_data()))?
        }
    };
    let hol = stage("holonomicity", holonomicity_test(&forms_u, tol.pointwise))?;
    rep.push(Check::new(
        "holonomicity.residual",
        "normalized d1(b12) b13 - d1(b13) b12 vanishes",
        "the ratio b2_13 / b2_12 does not depend on u1",
        hol.sup,
        Relation::Below,
        tol.pointwise,
    ));
    let synthetic = stage(
        "holonomicity",
        SecondFormField::from_fn(forms_u.grid().clone(), 3, 2, |p, out| {
            let u1 = forms_u.grid().coords(p)[0];
            out[9 + 1] = 1.0;
            out[9 + 3] = 1.0;
            out[9 + 2] = u1;
            out[9 + 6] = u1;
        }),
    )?;
    let hol_neg = stage("holonomicity", holonomicity_test(&synthetic, tol.pointwise))?;
    rep.push(Check::new(
        "holonomicity.negative_control",
        "synthetic b12 = 1, b13 = u1 is detected as non-holonomic",
        "the ratio b2_13 / b2_12 does not depend on u1",
        hol_neg.sup,
        Relation::AtLeast,
        tol.pointwise,
    ));
    if let Case::Example2 { .. } = case {
        let (u2, u3) = cartesian_window(spec);
        let xu = stage("chart", polar_to_cartesian_chart(&fine.x, u2, u3))?;
        let gu = stage("chart", induced_metric(&xu))?;
        rep.push(Check::new(
            "chart.cartesian_metric",
            "metric in the Cartesian chart is du1^2 + e^{-2u1}(du2^2 + du3^2)",
            "horospherical chart u2 = v2 cos v3, u3 = v2 sin v3",
            diag_deviation(&gu, BAND, |c| {
                let e = (-2.0 * c[0]).exp();
                [1.0, e, e]
            }),
            Relation::Below,
            tol.chart_metric,
        ));
    }

    // Null curves.
    null_curve_checks(&mut rep, &pl, opts)?;

    // Sensitivity of the structure-equation detector.
    let perturbed = pl.aligned.forms.perturbed(1, 0, 1, 0.1);
    let gcr_p = stage("geometry", gcr_residuals(&pl.metric, &perturbed, &pl.torsion))?;
    rep.push(Check::new(
        "control.gauss_perturbation",
        "perturbing b2_12 by 0.1 breaks the Gauss equation",
        "Gauss-Codazzi-Ricci equations of the lift",
        gcr_p.sup_interior(BAND).0,
        Relation::AtLeast,
        1e-2,
    ));
    Ok(rep)
}

/// Rectangle of the Cartesian chart that stays inside the polar grid of the lift.
fn cartesian_window(spec: &SurfaceSpec) -> (Axis, Axis) {
    let (r0, r1) = spec.domain.v2;
    let mid = 0.5 * (r0 + r1);
    let half = 0.25 * (r1 - r0);
    let n = (spec.domain.n2 / 2).max(8) + 1;
    (Axis::new(mid - half, mid + half, n), Axis::new(-half, half, n))
}

fn null_curve_checks(rep: &mut VerificationReport, pl: &Pipeline, opts: &VerifyOptions) -> Result<(), VerifyError> {
    let tol = opts.tolerances;
    let spec = &pl.spec;
    let (v1a, v2a) = (spec.domain.v1, spec.domain.v2);
    let frac = [0.25, 0.5, 0.75];
    match spec.case {
        Case::Example1 => {
            let v3 = pl.v3_axis();
            let seeds: Vec<Vec<f64>> = frac
                .iter()
                .flat_map(|&a| frac.iter().map(move |&b| (a, b)))
                .map(|(a, b)| vec![v1a.0 + a * (v1a.1 - v1a.0), v2a.0 + b * (v2a.1 - v2a.0), v3.min + 0.05 * (v3.max - v3.min)])
                .collect();
            let ds = 0.25 * v3.h() * (-v1a.1).exp();
            let nc = stage("null curves", null_curve_check(&pl.bianchi.kernel, &pl.metric, &seeds, 10.0, ds, &[0, 1]))?;
            rep.push(Check::new(
                "null_curves.u1_drift",
                "null curves stay on horospheres u1 = const",
                "null curves belong to the coordinate horospheres",
                nc.drifts[0],
                Relation::Below,
                tol.horosphere_drift,
            ));
            rep.push(Check::new(
                "null_curves.u2_drift",
                "null curves are the straight lines u2 = const",
                "null curves are parallel straight lines u2 = const",
                nc.drifts[1],
                Relation::Below,
                tol.drift,
            ));
            let min_len = nc.trajectories.iter().map(|t| t.arclength).fold(f64::INFINITY, f64::min);
            rep.push(Check::new(
                "null_curves.traced_length",
                "shortest traced null curve before leaving the grid",
                "null curves are parallel straight lines u2 = const",
                min_len,
                Relation::Above,
                0.1,
            ));
            // A field along u1 must be flagged.
            let along_u1 = stage("null curves", Field::from_nodes(pl.lifted.grid().clone(), 3, |_, o| o[0] = 1.0))?;
            let mut seeds_c = seeds.clone();
            seeds_c.iter_mut().for_each(|s| s[0] = v1a.0 + 0.1 * (v1a.1 - v1a.0));
            let neg = stage("null curves", null_curve_check(&along_u1, &pl.metric, &seeds_c, 0.1, ds, &[0]))?;
            rep.push(Check::new(
                "null_curves.negative_control",
                "a direction field along u1 is detected as leaving the horospheres",
                "null curves belong to the coordinate horospheres",
                neg.drifts[0],
                Relation::AtLeast,
                tol.horosphere_drift,
            ));
        }
        Case::Example2 { .. } => {
            let sub = stage("null curves", subsample_surface(&pl.surface, 2))?;
            let v3 = Axis::new(-0.2, 2.0 * PI + 0.2, 8 * (opts.n3 - 1) + 1);
            let lf = stage("null curves", lift(&sub, &sub.spec, v3))?;
            let br = stage("null curves", bianchi_transform(&lf.x, tol.rank_tau))?;
            let g = stage("null curves", induced_metric(&lf.x))?;
            let (mut closure, mut v2_drift, mut u1_drift) = (0.0_f64, 0.0_f64, 0.0_f64);
            for &fa in &frac {
                for &fb in &frac {
                    let (v1, v2) = (v1a.0 + fa * (v1a.1 - v1a.0), v2a.0 + fb * (v2a.1 - v2a.0));
                    let len = 2.0 * PI * (-v1).exp() * v2;
                    let tr = stage("null curves", trace_null_curve(&br.kernel, &g, &[v1, v2, 0.0], len, len / 400.0))?;
                    let e = tr.end();
                    let (p, q) = polar_to_cartesian(e[1], e[2]);
                    let (p0, q0) = polar_to_cartesian(v2, 0.0);
                    let gap = if tr.exit.is_some() { f64::INFINITY } else { (p - p0).hypot(q - q0) };
                    closure = closure.max(gap);
                    v2_drift = v2_drift.max(tr.drift(1));
                    u1_drift = u1_drift.max(tr.drift(0));
                }
            }
            rep.push(Check::new(
                "null_curves.u1_drift",
                "null curves stay on horospheres u1 = const",
                "null curves belong to the coordinate horospheres",
                u1_drift,
                Relation::Below,
                tol.horosphere_drift,
            ));
            rep.push(Check::new(
                "null_curves.v2_drift",
                "null curves keep v2 constant (concentric circles)",
                "null curves are concentric circles v2 = const",
                v2_drift,
                Relation::Below,
                tol.drift,
            ));
            rep.push(Check::new(
                "null_curves.closure",
                "null curves close after arclength 2 pi e^{-v1} v2",
                "null curves are concentric circles v2 = const",
                closure,
                Relation::Below,
                tol.closure,
            ));
        }
    }
    Ok(())
}
