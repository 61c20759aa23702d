use std::f64::consts::LN_2;

use pseudosphere::codazzi::{
    build_surface, integrate_frame_with, prescribed_metric, reduced_system_residuals, solve_codazzi, Case,
    CodazziError, Euclidean, InitialData, SurfaceSpec, PATH_TOLERANCE,
};
use pseudosphere::fieldcalc::{Axis, Field, Grid};
use pseudosphere::geometry::{induced_metric, riemann, shape_operator, MetricField};
use pseudosphere::INTERIOR_BAND;

fn closed_form_curvature(case: Case, v1: f64, v2: f64) -> f64 {
    let e = (-2.0 * v1).exp();
    match case {
        Case::Example1 => -1.0 / (1.0 - e).powi(2),
        Case::Example2 { a } => -a * a * (a * a - 1.0) / (a * a - 1.0 - v2 * v2 * e).powi(2),
    }
}

#[test]
fn example1_metric_at_ln2() {
    let [g11, g12, g22] = Case::Example1.metric(LN_2, 0.3);
    assert!((g11 - 0.75).abs() < 1e-15 && g12 == 0.0 && (g22 - 0.25).abs() < 1e-15);
}

#[test]
fn example2_metric_on_the_axis() {
    for a in [1.5, 2.0, 4.0] {
        let v1 = 0.7;
        let [g11, g12, g22] = Case::Example2 { a }.metric(v1, 0.0);
        assert_eq!(g11, 1.0);
        assert_eq!(g12, 0.0);
        assert!((g22 - (-2.0 * v1).exp() * (1.0 - 1.0 / (a * a))).abs() < 1e-15);
    }
}

#[test]
fn example1_gauss_curvature_at_ln2_by_finite_differences() {
    let ax1 = Axis::new(LN_2 - 0.2, LN_2 + 0.2, 41);
    let grid = Grid::new(vec![ax1, Axis::new(0.0, 0.4, 41)]).unwrap();
    let g = MetricField::from_fn(grid.clone(), 2, |c, out| {
        let [a, b, d] = Case::Example1.metric(c[0], c[1]);
        out.copy_from_slice(&[a, b, b, d]);
    })
    .unwrap();
    let r = riemann(&g).unwrap();
    let p = grid.index(&[20, 20]);
    assert!((r.sectional(p, 0, 1) + 16.0 / 9.0).abs() < 5e-4, "{}", r.sectional(p, 0, 1));
}

#[test]
fn closed_form_curvatures_agree_with_finite_differences() {
    for case in [Case::Example1, Case::Example2 { a: 2.0 }, Case::Example2 { a: 1.5 }] {
        let spec = SurfaceSpec::new(case, 81);
        let g = prescribed_metric(&spec).unwrap();
        let r = riemann(&g).unwrap();
        for p in g.grid().interior(INTERIOR_BAND) {
            let c = g.grid().coords(p);
            let k = closed_form_curvature(case, c[0], c[1]);
            assert!((case.gauss_curvature(c[0], c[1]) - k).abs() < 1e-12 * k.abs());
            assert!((r.sectional(p, 0, 1) - k).abs() < 1e-5 * k.abs(), "{case:?}: {} vs {k}", r.sectional(p, 0, 1));
        }
    }
}

#[test]
fn degenerate_initial_line_loses_the_pivot() {
    let mut spec = SurfaceSpec::example1(33);
    let ax = *spec.grid().unwrap().axis(1);
    let v1 = spec.domain.v1.0;
    let b12 = (0..ax.n).map(|_| -(-v1).exp() / (1.0 - (-2.0 * v1).exp()).sqrt()).collect();
    spec.initial = InitialData::Sampled { b12, b22: vec![0.0; ax.n] };
    assert!(matches!(solve_codazzi(&spec), Err(CodazziError::PivotLoss { .. })));
}

#[test]
fn default_initial_line_satisfies_the_gauss_constraint() {
    for spec in [SurfaceSpec::example1(64), SurfaceSpec::example2(2.0, 64)] {
        let (b12, b22) = spec.initial_line().unwrap();
        let ax = *spec.grid().unwrap().axis(1);
        for j in 0..ax.n {
            // b̄₁₁ = 0 on the initial line.
            let r = -b12[j] * b12[j] - spec.case.gauss_rhs(spec.domain.v1.0, ax.coord(j));
            assert!(r.abs() < 1e-14);
            assert!(b22[j] != 0.0 && b12[j] < 0.0);
        }
    }
}

#[test]
fn default_solutions_meet_the_residual_contract() {
    for spec in [SurfaceSpec::example1(128), SurfaceSpec::example2(2.0, 128)] {
        let sol = solve_codazzi(&spec).unwrap();
        assert!(sol.gauss_residual.sup() < 1e-6, "pre-projection residual {}", sol.gauss_residual.sup());
        assert!(sol.min_abs_b12() > 1e-3);
        let res = reduced_system_residuals(&spec, &sol).unwrap();
        assert!(res.sup_interior(INTERIOR_BAND) < 5e-4);
        // The constraint is re-solved after every step, so it holds to rounding everywhere.
        assert!(res.component(0).sup() < 1e-10, "{}", res.component(0).sup());
    }
}

#[test]
fn codazzi_residual_drops_under_refinement() {
    let sup = |n: usize| {
        let spec = SurfaceSpec::example2(2.0, n);
        let sol = solve_codazzi(&spec).unwrap();
        reduced_system_residuals(&spec, &sol).unwrap().sup_interior(INTERIOR_BAND)
    };
    let ratio = sup(33) / sup(65);
    assert!(ratio >= 8.0, "refinement ratio {ratio}");
}

#[test]
fn built_surfaces_reproduce_metric_and_curvature() {
    for spec in [SurfaceSpec::example1(128), SurfaceSpec::example2(2.0, 128)] {
        let (_, surf) = build_surface(&spec).unwrap();
        assert!(surf.path_difference < PATH_TOLERANCE);
        let g = induced_metric(&surf.x).unwrap();
        let gp = prescribed_metric(&spec).unwrap();
        assert!(g.max_deviation(&gp, INTERIOR_BAND) < 5e-4);
        let so = shape_operator(&surf.x).unwrap();
        let grid = surf.x.grid();
        for p in grid.interior(INTERIOR_BAND) {
            let c = grid.coords(p);
            let k = closed_form_curvature(spec.case, c[0], c[1]);
            assert!((so.gauss_curvature.get(p, 0) - k).abs() < 5e-3);
        }
        for p in 0..grid.len() {
            let n = surf.normal.at(p);
            let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
            assert!((dot(n, n) - 1.0).abs() < 1e-8);
            assert!(dot(n, surf.e1.at(p)).abs() < 1e-6 && dot(n, surf.e2.at(p)).abs() < 1e-6);
        }
    }
}

#[test]
fn zero_second_form_with_flat_metric_gives_a_plane() {
    let grid = Grid::grid2((0.0, 1.0), (-0.5, 0.5), 17, 13).unwrap();
    let zero = Field::zeros(grid.clone(), 1);
    let ([x, _, _, normal], gap) = integrate_frame_with(&Euclidean, &grid, &zero, &zero, &zero).unwrap();
    assert!(gap < 1e-14);
    let n0 = normal.at(0).to_vec();
    let x0 = x.at(0).to_vec();
    for p in 0..grid.len() {
        let c = grid.coords(p);
        let d: Vec<f64> = x.at(p).iter().zip(&x0).map(|(a, b)| a - b).collect();
        let off_plane: f64 = d.iter().zip(&n0).map(|(a, b)| a * b).sum();
        assert!(off_plane.abs() < 1e-13);
        let dist2: f64 = d.iter().map(|v| v * v).sum();
        let chart2 = (c[0] - 0.0).powi(2) + (c[1] + 0.5).powi(2);
        assert!((dist2 - chart2).abs() < 1e-12);
        assert!(normal.at(p).iter().zip(&n0).all(|(a, b)| (a - b).abs() < 1e-14));
    }
}

#[test]
fn domain_guards_reject_bad_specs() {
    let mut s = SurfaceSpec::example1(32);
    s.domain.v1 = (0.1, 1.0);
    assert!(matches!(s.validate(), Err(CodazziError::Domain(_))));

    for a in [1.0, 0.5, f64::NAN] {
        let e = SurfaceSpec::example2(a, 32).validate().unwrap_err();
        assert!(e.to_string().contains("a > 1"), "{e}");
    }
    // v₂e^{−v₁} must stay below √(a² − 1) − margin.
    let e = SurfaceSpec::example2(1.2, 32).validate().unwrap_err();
    assert!(e.to_string().contains("sqrt(a^2 - 1)"));
    let mut s = SurfaceSpec::example2(2.0, 32);
    s.domain.v2 = (0.0, 1.0);
    assert!(s.validate().is_err());

    let mut s = SurfaceSpec::example1(32);
    s.initial = InitialData::Sampled { b12: vec![-1.0; 31], b22: vec![1.0; 32] };
    assert!(s.validate().is_err());
    s.initial = InitialData::Sampled { b12: vec![0.0; 32], b22: vec![1.0; 32] };
    assert!(s.validate().is_err());
    assert!(SurfaceSpec::example1(4).validate().is_err());
}

#[test]
fn spec_json_round_trip() {
    let spec = SurfaceSpec::example2(4.0, 64);
    let text = serde_json::to_string(&spec).unwrap();
    assert_eq!(serde_json::from_str::<SurfaceSpec>(&text).unwrap(), spec);
}
