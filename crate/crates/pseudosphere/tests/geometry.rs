use std::f64::consts::PI;

use proptest::prelude::*;
use pseudosphere::fieldcalc::{Field, Grid};
use pseudosphere::geometry::{
    christoffel, gcr_residuals, index_pairs, induced_metric, metric_from_jet, normal_frame, riemann, second_forms,
    shape_operator, torsion, GeometryError, Jet, MetricField, TorsionField,
};

const BAND: usize = 3;

fn horospherical(n: usize) -> MetricField {
    let grid = Grid::grid3((0.2, 0.8), (-0.3, 0.3), (0.0, 0.5), [n, n, n]).unwrap();
    MetricField::from_fn(grid, 3, |c, g| {
        let e = (-2.0 * c[0]).exp();
        g.copy_from_slice(&[1.0, 0.0, 0.0, 0.0, e, 0.0, 0.0, 0.0, e]);
    })
    .unwrap()
}

fn sphere(r: f64, n: usize) -> Field {
    let grid = Grid::grid2((0.6, 2.2), (0.0, 1.5), n, n).unwrap();
    Field::from_fn(grid, 3, |c, x| {
        let (t, p) = (c[0], c[1]);
        x.copy_from_slice(&[r * t.sin() * p.cos(), r * t.sin() * p.sin(), r * t.cos()]);
    })
    .unwrap()
}

/// Flat torus (cos u, sin u, cos v, sin v) ⊂ ℝ⁴.
fn clifford(n: usize) -> Field {
    let grid = Grid::grid2((0.0, 1.2), (0.3, 1.5), n, n).unwrap();
    Field::from_fn(grid, 4, |c, x| x.copy_from_slice(&[c[0].cos(), c[0].sin(), c[1].cos(), c[1].sin()])).unwrap()
}

#[test]
fn euclidean_metric_has_no_connection_or_curvature() {
    let grid = Grid::grid3((0.0, 1.0), (0.0, 1.0), (0.0, 1.0), [7, 7, 7]).unwrap();
    let g = MetricField::from_fn(grid, 3, |_, g| g.copy_from_slice(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]))
        .unwrap();
    assert_eq!(christoffel(&g).unwrap().as_field().sup(), 0.0);
    assert_eq!(riemann(&g).unwrap().sectional_field().sup(), 0.0);
}

#[test]
fn horospherical_metric_has_curvature_minus_one() {
    let g = horospherical(21);
    let r = riemann(&g).unwrap();
    let gamma = christoffel(&g).unwrap();
    for p in g.grid().interior(BAND) {
        let u1 = g.grid().coords(p)[0];
        // Γ¹₂₂ = e^{−2u₁}, Γ²₁₂ = −1.
        assert!((gamma.get(p, 0, 1, 1) - (-2.0 * u1).exp()).abs() < 1e-6);
        assert!((gamma.get(p, 1, 0, 1) + 1.0).abs() < 1e-6);
        for (i, j) in index_pairs(3) {
            assert!((r.sectional(p, i, j) + 1.0).abs() < 1e-5, "K_{i}{j} = {}", r.sectional(p, i, j));
        }
        let x = [0.3, -1.1, 2.0];
        let y = [1.0, 0.4, -0.2];
        assert!((r.sectional_plane(p, &g, &x, &y) + 1.0).abs() < 1e-5);
    }
}

#[test]
fn riemann_convention_gives_k_times_det_g() {
    let g = horospherical(17);
    let r = riemann(&g).unwrap();
    for p in g.grid().interior(BAND) {
        let det = g.get(p, 0, 0) * g.get(p, 1, 1);
        assert!((r.r(p, 0, 1, 0, 1) + det).abs() < 1e-5);
        assert!((r.r(p, 0, 1, 1, 0) - det).abs() < 1e-5);
    }
}

#[test]
fn index_pairs_are_ordered() {
    assert_eq!(index_pairs(3), vec![(0, 1), (0, 2), (1, 2)]);
    assert_eq!(index_pairs(2), vec![(0, 1)]);
}

#[test]
fn sphere_metric_and_curvature() {
    let r = 1.7;
    let x = sphere(r, 41);
    let g = induced_metric(&x).unwrap();
    let so = shape_operator(&x).unwrap();
    for p in x.grid().interior(BAND) {
        let t = x.grid().coords(p)[0];
        assert!((g.get(p, 0, 0) - r * r).abs() < 1e-6);
        assert!((g.get(p, 1, 1) - (r * t.sin()).powi(2)).abs() < 1e-6);
        assert!(g.get(p, 0, 1).abs() < 1e-6);
        assert!((so.gauss_curvature.get(p, 0) - 1.0 / (r * r)).abs() < 1e-5);
        let n = so.normal.at(p);
        let radial: Vec<f64> = x.at(p).iter().map(|v| v / r).collect();
        let d: f64 = n.iter().zip(&radial).map(|(a, b)| a * b).sum();
        assert!((d.abs() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn sphere_hypersurface_forms_satisfy_gauss_and_codazzi() {
    let r = 0.8;
    let x = sphere(r, 41);
    let jet = Jet::second_order(&x).unwrap();
    let g = metric_from_jet(&jet).unwrap();
    let frame = normal_frame(&jet).unwrap();
    let b = second_forms(&jet, &frame).unwrap();
    assert_eq!(b.codim(), 1);
    for p in x.grid().interior(BAND) {
        for i in 0..2 {
            for j in 0..2 {
                assert!((b.get(p, 0, i, j).abs() - g.get(p, i, j) / r).abs() < 1e-6);
            }
        }
    }
    let res = gcr_residuals(&g, &b, &TorsionField::none(x.grid().clone(), 2)).unwrap();
    let (ga, co, ri) = res.sup_interior(BAND);
    assert!(ga < 5e-5 && co < 1e-5 && ri == 0.0, "{ga} {co} {ri}");
}

#[test]
fn clifford_torus_is_flat_with_codimension_two_forms() {
    let x = clifford(33);
    let jet = Jet::second_order(&x).unwrap();
    let g = metric_from_jet(&jet).unwrap();
    let frame = normal_frame(&jet).unwrap();
    assert_eq!(frame.codim(), 2);
    let b = second_forms(&jet, &frame).unwrap();
    let mu = torsion(&frame).unwrap();
    let res = gcr_residuals(&g, &b, &mu).unwrap();
    let (ga, co, ri) = res.sup_interior(BAND);
    assert!(ga < 1e-6 && co < 1e-5 && ri < 1e-6, "{ga} {co} {ri}");
    for p in x.grid().interior(BAND) {
        // The normal space is spanned by (cos u, sin u, 0, 0) and (0, 0, cos v, sin v),
        // so |b^1|² + |b^2|² summed over normals is frame independent: b_11² + b_22² = 2.
        let s: f64 = (0..2).map(|s| b.get(p, s, 0, 0).powi(2) + b.get(p, s, 1, 1).powi(2)).sum();
        assert!((s - 2.0).abs() < 1e-6);
        let mixed: f64 = (0..2).map(|s| b.get(p, s, 0, 1).abs()).sum();
        assert!(mixed < 1e-6);
    }
}

#[test]
fn normal_frame_is_orthonormal_and_continuous() {
    let x = clifford(17);
    let jet = Jet::second_order(&x).unwrap();
    let frame = normal_frame(&jet).unwrap();
    let grid = x.grid();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    for p in 0..grid.len() {
        for s in 0..2 {
            let n = frame.normal(p, s);
            for t in 0..2 {
                let expect = if s == t { 1.0 } else { 0.0 };
                assert!((dot(n, frame.normal(p, t)) - expect).abs() < 1e-12);
            }
            for i in 0..2 {
                assert!(dot(n, jet.tangent(p, i)).abs() < 1e-10);
            }
            if p + 1 < grid.len() && grid.multi_index(p + 1)[0] == grid.multi_index(p)[0] {
                assert!(dot(n, frame.normal(p + 1, s)) > 0.5);
            }
        }
    }
}

#[test]
fn collapsed_map_is_degenerate() {
    let grid = Grid::grid2((0.0, 1.0), (0.0, 1.0), 7, 7).unwrap();
    let x = Field::from_fn(grid, 3, |c, x| x.copy_from_slice(&[c[0], 0.0, 0.0])).unwrap();
    assert!(matches!(induced_metric(&x), Err(GeometryError::DegenerateImmersion { .. })));
}

proptest! {
    /// Isometries of the ambient space leave the induced metric unchanged.
    #[test]
    fn induced_metric_is_rotation_invariant(angle in 0.0..2.0 * PI, shift in -3.0..3.0f64) {
        let x = sphere(1.0, 13);
        let (c, s) = (angle.cos(), angle.sin());
        let y = x.map(3, |q, out| {
            out[0] = c * q[0] - s * q[2] + shift;
            out[1] = q[1] - shift;
            out[2] = s * q[0] + c * q[2];
        }).unwrap();
        let gx = induced_metric(&x).unwrap();
        let gy = induced_metric(&y).unwrap();
        prop_assert!(gx.max_deviation(&gy, 0) < 1e-12);
    }
}
