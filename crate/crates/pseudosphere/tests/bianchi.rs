use std::f64::consts::FRAC_1_SQRT_2;

use proptest::prelude::*;
use pseudosphere::bianchi::{
    align_frame, beltrami_surface, bianchi_transform, check_horospherical, distribution_triple, frobenius_defects,
    holonomicity_test, null_curve_check, project_slice, trace_null_curve, AffineFrame, BianchiError, BELTRAMI_U1,
    BELTRAMI_U2,
};
use pseudosphere::fieldcalc::{affine_span_dim, Field, Grid};
use pseudosphere::geometry::{metric_from_jet, normal_frame, Jet, MetricField, SecondFormField};
use pseudosphere::INTERIOR_BAND;

/// Graph (u, f, h) ⊂ ℝ⁵ with f = (u₁² + u₂² + 2u₃²)/2 and h = u₁u₂ + u₁u₃.
fn graph(n: usize) -> Field {
    let grid = Grid::grid3((-0.1, 0.1), (-0.1, 0.1), (-0.1, 0.1), [n, n, n]).unwrap();
    Field::from_fn(grid, 5, |c, x| {
        let (a, b, d) = (c[0], c[1], c[2]);
        x.copy_from_slice(&[a, b, d, 0.5 * (a * a + b * b + 2.0 * d * d), a * b + a * d]);
    })
    .unwrap()
}

fn euclidean(grid: Grid) -> MetricField {
    MetricField::from_fn(grid, 3, |_, g| g.copy_from_slice(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0])).unwrap()
}

fn mixed_forms(grid: Grid, b12: impl Fn(&[f64]) -> f64, b13: impl Fn(&[f64]) -> f64) -> SecondFormField {
    let g = grid.clone();
    SecondFormField::from_fn(grid, 3, 2, |p, out| {
        let c = g.coords(p);
        // b¹ = identity, b² carries only the mixed entries.
        out[0] = 1.0;
        out[4] = 1.0;
        out[8] = 1.0;
        out[9 + 1] = b12(&c);
        out[9 + 3] = b12(&c);
        out[9 + 2] = b13(&c);
        out[9 + 6] = b13(&c);
    })
    .unwrap()
}

#[test]
fn alignment_moves_the_mixed_part_onto_the_second_normal() {
    let x = graph(11);
    let jet = Jet::second_order(&x).unwrap();
    let al = align_frame(&jet, &normal_frame(&jet).unwrap()).unwrap();
    assert!(al.mixed_residual(0) < 1e-10, "{}", al.mixed_residual(0));

    let grid = x.grid();
    let o = grid.index(&[5, 5, 5]);
    let (b12, b13) = (al.forms.get(o, 1, 0, 1), al.forms.get(o, 1, 0, 2));
    assert!((b12.abs() - 1.0).abs() < 1e-10 && (b12 - b13).abs() < 1e-10);
    // At the origin the normals are ±e₄, ±e₅.
    assert!((al.frame.normal(o, 1)[4].abs() - 1.0).abs() < 1e-12);

    let g = metric_from_jet(&jet).unwrap();
    let t = distribution_triple(&al.forms, &g).unwrap();
    // The graph chart is orthonormal only at the origin.
    for i in 0..3 {
        for j in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            assert!((g.dot(o, t.xi(i, o), t.xi(j, o)) - delta).abs() < 1e-10);
        }
    }
    let xi3 = t.xi(2, o);
    assert!(xi3[0].abs() < 1e-12);
    assert!((xi3[1].abs() - FRAC_1_SQRT_2).abs() < 1e-10 && (xi3[1] + xi3[2]).abs() < 1e-10);
    let xi2 = t.xi(1, o);
    assert!((xi2[1] - xi2[2]).abs() < 1e-10 && (xi2[1].abs() - FRAC_1_SQRT_2).abs() < 1e-10);
}

#[test]
fn aligned_angle_is_continuous() {
    let x = graph(9);
    let jet = Jet::second_order(&x).unwrap();
    let al = align_frame(&jet, &normal_frame(&jet).unwrap()).unwrap();
    let grid = x.grid();
    for p in 0..grid.len() {
        let idx = grid.multi_index(p);
        if idx[2] + 1 < grid.axis(2).n {
            let q = grid.index(&[idx[0], idx[1], idx[2] + 1]);
            assert!((al.angle.get(p, 0) - al.angle.get(q, 0)).abs() < 0.5);
        }
    }
}

#[test]
fn flat_graph_has_no_degeneracy_direction() {
    let grid = Grid::grid3((0.0, 1.0), (0.0, 1.0), (0.0, 1.0), [7, 7, 7]).unwrap();
    let x = Field::from_fn(grid, 5, |c, x| x.copy_from_slice(&[c[0], c[1], c[2], c[1] * c[1], c[2] * c[2]])).unwrap();
    let jet = Jet::second_order(&x).unwrap();
    let r = align_frame(&jet, &normal_frame(&jet).unwrap());
    assert!(matches!(r, Err(BianchiError::NoDegeneracy { .. })));
}

#[test]
fn rotating_ratio_is_not_holonomic() {
    let grid = Grid::grid3((0.0, 1.0), (0.0, 1.0), (0.0, 1.0), [17, 9, 9]).unwrap();
    let forms = mixed_forms(grid.clone(), |c| c[0].cos(), |c| c[0].sin());
    let h = holonomicity_test(&forms, 1e-3).unwrap();
    assert!(!h.holonomic && (h.sup - 1.0).abs() < 1e-4, "{}", h.sup);

    let g = euclidean(grid);
    let t = distribution_triple(&forms, &g).unwrap();
    let [d12, d13, d23] = frobenius_defects(&t, &g).unwrap();
    assert!(t.orthonormality_defect(&g) < 1e-12);
    // ξ₂ and ξ₃ rotate rigidly in u₁: [ξ₁, ξ₂] = ±ξ₃, [ξ₁, ξ₃] = ∓ξ₂, [ξ₂, ξ₃] = 0.
    assert!((d12.sup_interior(INTERIOR_BAND) - 1.0).abs() < 1e-4);
    assert!((d13.sup_interior(INTERIOR_BAND) - 1.0).abs() < 1e-4);
    assert!(d23.sup_interior(INTERIOR_BAND) < 1e-8);
}

#[test]
fn separable_ratio_is_holonomic() {
    let grid = Grid::grid3((0.0, 1.0), (0.0, 1.0), (0.0, 1.0), [17, 9, 9]).unwrap();
    let forms = mixed_forms(grid, |c| c[0].exp() * (1.0 + c[1]), |c| c[0].exp() * (2.0 - c[2]));
    let h = holonomicity_test(&forms, 1e-3).unwrap();
    assert!(h.holonomic && h.sup < 1e-10, "{}", h.sup);
}

#[test]
fn vanishing_kernel_is_reported() {
    let grid = Grid::grid3((0.0, 1.0), (0.0, 1.0), (0.0, 1.0), [7, 7, 7]).unwrap();
    let forms = mixed_forms(grid.clone(), |_| 0.0, |_| 0.0);
    assert!(matches!(distribution_triple(&forms, &euclidean(grid)), Err(BianchiError::KernelVanishes { .. })));
    assert!(matches!(holonomicity_test(&forms, 1e-3), Err(BianchiError::KernelVanishes { .. })));
}

#[test]
fn beltrami_image_collapses_to_the_axis() {
    let x = beltrami_surface(BELTRAMI_U1, BELTRAMI_U2, 128, 128).unwrap();
    let b = bianchi_transform(&x, 1e-6).unwrap();
    assert_eq!(b.ranks.interior_fraction(INTERIOR_BAND, |s| s[1] / s[0] < 1e-6), 1.0);
    for p in b.grid().interior(INTERIOR_BAND) {
        let q = b.image.at(p);
        assert!(q[0].abs() < 1e-6 && q[1].abs() < 1e-6);
        // The kernel is ∂₂.
        assert!((b.kernel.get(p, 1) - 1.0).abs() < 1e-6);
    }
    let interior: Vec<f64> =
        b.grid().interior(INTERIOR_BAND).flat_map(|p| b.image.at(p).to_vec()).collect();
    assert_eq!(affine_span_dim(&interior, 3, 1e-6).unwrap(), 1);
}

/// Horospherical map in ℝ⁵ whose image Jacobian has singular values of order
/// (1, 1, ε).
fn tuned(eps: f64) -> Field {
    let grid = Grid::grid3((0.5, 1.5), (0.0, 1.0), (0.0, 1.0), [41, 9, 9]).unwrap();
    Field::from_fn(grid, 5, |c, x| {
        let r = (-c[0]).exp();
        let w = c[0].exp().acosh() - (1.0 - r * r).sqrt();
        x.copy_from_slice(&[r * c[2].cos(), r * c[2].sin(), w, c[1], eps * c[2]]);
    })
    .unwrap()
}

#[test]
fn rank_decision_near_the_threshold_is_ambiguous() {
    assert!(matches!(bianchi_transform(&tuned(1e-6), 1e-6), Err(BianchiError::RankAmbiguous { .. })));
    let b = bianchi_transform(&tuned(1e-2), 1e-6).unwrap();
    assert!(b.grid().interior(INTERIOR_BAND).all(|p| b.ranks.rank(p) == 3));
}

#[test]
fn non_horospherical_chart_is_rejected() {
    let grid = Grid::grid3((0.0, 1.0), (0.0, 1.0), (0.0, 1.0), [9, 9, 9]).unwrap();
    let e = (-1.0f64).exp();
    let horo = MetricField::from_fn(grid.clone(), 3, |c, g| {
        let e = (-2.0 * c[0]).exp();
        g.copy_from_slice(&[1.0, 0.0, 0.0, 0.0, e, 0.0, 0.0, 0.0, e]);
    })
    .unwrap();
    assert_eq!(check_horospherical(&horo, 1e-4).unwrap(), 0.0);
    let tilted = MetricField::from_fn(grid, 3, |_, g| g.copy_from_slice(&[1.0, e * 1e-3, 0.0, e * 1e-3, 1.0, 0.0, 0.0, 0.0, 1.0]))
        .unwrap();
    assert!(matches!(check_horospherical(&tilted, 1e-4), Err(BianchiError::NotHorospherical { .. })));

    let stretched = Field::from_fn(Grid::grid2((0.0, 1.0), (0.0, 1.0), 9, 9).unwrap(), 3, |c, x| {
        x.copy_from_slice(&[2.0 * c[0], c[1], 0.0])
    })
    .unwrap();
    assert!(matches!(bianchi_transform(&stretched, 1e-6), Err(BianchiError::NotHorospherical { .. })));
}

#[test]
fn constant_kernel_traces_straight_lines() {
    let grid = Grid::grid3((0.0, 1.0), (0.0, 1.0), (0.0, 1.0), [9, 9, 9]).unwrap();
    let kernel = Field::from_fn(grid.clone(), 3, |_, k| k.copy_from_slice(&[0.0, 0.0, 1.0])).unwrap();
    let g = euclidean(grid);
    let t = trace_null_curve(&kernel, &g, &[0.4, 0.6, 0.1], 0.5, 0.01).unwrap();
    assert!(t.exit.is_none());
    assert!((t.arclength - 0.5).abs() < 1e-12);
    let end = t.end();
    assert!((end[0] - 0.4).abs() < 1e-12 && (end[1] - 0.6).abs() < 1e-12 && (end[2] - 0.6).abs() < 1e-12);
    assert!(t.drift(0) < 1e-12 && (t.drift(2) - 1.0).abs() < 1e-12);

    let long = trace_null_curve(&kernel, &g, &[0.4, 0.6, 0.1], 2.0, 0.01).unwrap();
    assert!(matches!(long.exit, Some(BianchiError::LeftDomain { .. })));

    let seeds = vec![vec![0.2, 0.2, 0.0], vec![0.7, 0.3, 0.2]];
    let s = null_curve_check(&kernel, &g, &seeds, 0.6, 0.02, &[0, 1]).unwrap();
    assert!(s.passes(1e-10) && s.left_domain() == 0);
}

#[test]
fn unit_speed_in_a_scaled_metric() {
    let grid = Grid::grid3((0.0, 1.0), (0.0, 1.0), (0.0, 4.0), [9, 9, 9]).unwrap();
    let kernel = Field::from_fn(grid.clone(), 3, |_, k| k.copy_from_slice(&[0.0, 0.0, 1.0])).unwrap();
    let g = MetricField::from_fn(grid, 3, |_, g| g.copy_from_slice(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 4.0]))
        .unwrap();
    let t = trace_null_curve(&kernel, &g, &[0.5, 0.5, 0.0], 1.0, 0.05).unwrap();
    // Unit g-speed along ∂₃ with g₃₃ = 4 moves half a chart unit per unit length.
    assert!((t.end()[2] - 0.5).abs() < 1e-12);
}

proptest! {
    #[test]
    fn affine_frame_recovers_flat_clouds(offset in prop::collection::vec(-2.0..2.0f64, 5)) {
        // A three-dimensional box spanned by orthonormal directions in ℝ⁵.
        let grid = Grid::grid3((0.0, 1.0), (0.0, 2.0), (0.0, 0.5), [5, 6, 5]).unwrap();
        let dirs = [[0.6, 0.8, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0, 0.0], [0.8, -0.6, 0.0, 0.0, 0.0]];
        let pts = Field::from_fn(grid, 5, |c, x| {
            for k in 0..5 {
                x[k] = offset[k] + c[0] * dirs[0][k] + c[1] * dirs[1][k] + c[2] * dirs[2][k];
            }
        }).unwrap();
        let f = AffineFrame::fit(&pts);
        prop_assert_eq!(f.basis.len(), 3);
        for i in 0..3 {
            for j in 0..3 {
                let d: f64 = f.basis[i].iter().zip(&f.basis[j]).map(|(a, b)| a * b).sum();
                let delta = if i == j { 1.0 } else { 0.0 };
                prop_assert!((d - delta).abs() < 1e-10);
            }
        }
        // Projection is an isometry of the fitted subspace.
        let (a, b) = (pts.at(0), pts.at(pts.grid().len() - 1));
        let (pa, pb) = (f.project(a), f.project(b));
        let dx: f64 = a.iter().zip(b).map(|(u, v)| (u - v).powi(2)).sum();
        let dp: f64 = pa.iter().zip(&pb).map(|(u, v)| (u - v).powi(2)).sum();
        prop_assert!((dx - dp).abs() < 1e-10);

        let slice = project_slice(&pts, &f, 2).unwrap();
        prop_assert_eq!(slice.grid().shape(), vec![5, 6]);
        prop_assert_eq!(slice.ncomp(), 3);
    }
}
