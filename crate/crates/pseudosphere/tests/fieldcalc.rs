use approx::assert_relative_eq;
use proptest::prelude::*;
use pseudosphere::fieldcalc::{
    affine_span_dim, cubic_weights, diff_line, invert, jacobian, min_eigenvalue, node_svd, numeric_rank, partial,
    rank_profile, sample_cubic, singular_values, Axis, Field, FieldError, Grid,
};

fn line(n: usize, a: f64, b: f64) -> (Axis, Vec<f64>) {
    let ax = Axis::new(a, b, n);
    let xs = (0..n).map(|i| ax.coord(i)).collect();
    (ax, xs)
}

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, k| acc * x + k)
}

fn dpoly(c: &[f64], x: f64, order: usize) -> f64 {
    let mut d = c.to_vec();
    for _ in 0..order {
        d = d.iter().enumerate().skip(1).map(|(k, v)| k as f64 * v).collect();
    }
    poly(&d, x)
}

proptest! {
    #[test]
    fn first_derivative_exact_on_quartics(c in prop::collection::vec(-3.0..3.0f64, 5), n in 5usize..40) {
        let (ax, xs) = line(n, -0.7, 1.3);
        let f: Vec<f64> = xs.iter().map(|&x| poly(&c, x)).collect();
        let mut d = vec![0.0; n];
        diff_line(&f, &mut d, n, 1, ax.h(), 1);
        for (x, v) in xs.iter().zip(&d) {
            prop_assert!((v - dpoly(&c, *x, 1)).abs() < 1e-8, "x = {x}: {v} vs {}", dpoly(&c, *x, 1));
        }
    }

    #[test]
    fn second_derivative_exact_on_cubics(c in prop::collection::vec(-3.0..3.0f64, 4), n in 5usize..40) {
        let (ax, xs) = line(n, 0.0, 2.0);
        let f: Vec<f64> = xs.iter().map(|&x| poly(&c, x)).collect();
        let mut d = vec![0.0; n];
        diff_line(&f, &mut d, n, 1, ax.h(), 2);
        for (x, v) in xs.iter().zip(&d) {
            prop_assert!((v - dpoly(&c, *x, 2)).abs() < 1e-6);
        }
    }

    #[test]
    fn central_second_derivative_exact_on_quintics(c in prop::collection::vec(-2.0..2.0f64, 6)) {
        let n = 21;
        let (ax, xs) = line(n, -1.0, 1.0);
        let f: Vec<f64> = xs.iter().map(|&x| poly(&c, x)).collect();
        let mut d = vec![0.0; n];
        diff_line(&f, &mut d, n, 1, ax.h(), 2);
        for i in 2..n - 2 {
            prop_assert!((d[i] - dpoly(&c, xs[i], 2)).abs() < 1e-8);
        }
    }

    #[test]
    fn tensor_cubic_interpolation_is_exact_on_bicubics(
        c in prop::collection::vec(-2.0..2.0f64, 16),
        s in 0.0..1.0f64,
        t in 0.0..1.0f64,
    ) {
        let grid = Grid::grid2((0.0, 1.0), (-1.0, 2.0), 9, 11).unwrap();
        let f = |x: f64, y: f64| (0..4).flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| c[4 * i + j] * x.powi(i as i32) * y.powi(j as i32))
            .sum::<f64>();
        let field = Field::from_fn(grid, 1, |p, out| out[0] = f(p[0], p[1])).unwrap();
        let (x, y) = (s, -1.0 + 3.0 * t);
        let v = sample_cubic(&field, &[x, y]).unwrap()[0];
        prop_assert!((v - f(x, y)).abs() < 1e-10, "{v} vs {}", f(x, y));
    }

    #[test]
    fn cubic_weights_partition_unity(t in -1.0..3.0f64, n in 4usize..30) {
        let ax = Axis::new(-1.0, 3.0, n);
        let (start, w) = cubic_weights(&ax, t).unwrap();
        prop_assert!(start + 4 <= n);
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let moment: f64 = w.iter().enumerate().map(|(k, wk)| wk * ax.coord(start + k)).sum();
        prop_assert!((moment - t).abs() < 1e-10);
    }

    #[test]
    fn multi_index_round_trip(n1 in 5usize..9, n2 in 5usize..9, n3 in 5usize..9, node in 0usize..729) {
        let grid = Grid::grid3((0.0, 1.0), (0.0, 1.0), (0.0, 1.0), [n1, n2, n3]).unwrap();
        let node = node % grid.len();
        let idx = grid.multi_index(node);
        prop_assert_eq!(grid.index(&idx), node);
        prop_assert_eq!(idx[2] + n3 * (idx[1] + n2 * idx[0]), node);
    }
}

#[test]
fn interior_stencil_converges_at_fourth_order() {
    let err = |n: usize| {
        let (ax, xs) = line(n, 0.0, 1.0);
        let f: Vec<f64> = xs.iter().map(|x| (3.0 * x).sin()).collect();
        let mut d = vec![0.0; n];
        diff_line(&f, &mut d, n, 1, ax.h(), 1);
        (2..n - 2).map(|i| (d[i] - 3.0 * (3.0 * xs[i]).cos()).abs()).fold(0.0, f64::max)
    };
    let order = (err(33) / err(65)).log2();
    assert!(order > 3.8, "observed order {order}");
}

#[test]
fn partial_differentiates_along_each_axis() {
    let grid = Grid::grid3((0.0, 1.0), (0.5, 1.5), (-1.0, 1.0), [9, 7, 11]).unwrap();
    let f = Field::from_fn(grid, 2, |p, out| {
        out[0] = p[0] * p[0] * p[1] + p[2].powi(3);
        out[1] = p[0] * p[1] * p[2];
    })
    .unwrap();
    let d0 = partial(&f, 0, 1).unwrap();
    let d2 = partial(&f, 2, 2).unwrap();
    for p in 0..f.grid().len() {
        let c = f.grid().coords(p);
        assert!((d0.get(p, 0) - 2.0 * c[0] * c[1]).abs() < 1e-10);
        assert!((d0.get(p, 1) - c[1] * c[2]).abs() < 1e-10);
        assert!((d2.get(p, 0) - 6.0 * c[2]).abs() < 1e-9);
        assert!(d2.get(p, 1).abs() < 1e-9);
    }
    assert_eq!(partial(&f, 3, 1).unwrap_err(), FieldError::AxisOutOfRange { axis: 3, dim: 3 });
    assert_eq!(partial(&f, 0, 3).unwrap_err(), FieldError::BadOrder(3));
}

#[test]
fn jacobian_of_linear_map_is_constant() {
    let grid = Grid::grid2((0.0, 1.0), (0.0, 2.0), 6, 8).unwrap();
    let x = Field::from_fn(grid, 3, |p, out| {
        out[0] = 2.0 * p[0] - p[1];
        out[1] = p[1];
        out[2] = 0.5 * p[0] + 3.0 * p[1];
    })
    .unwrap();
    let j = jacobian(&x).unwrap();
    assert_eq!((j.rows(), j.cols()), (3, 2));
    let expect = [2.0, -1.0, 0.0, 1.0, 0.5, 3.0];
    for p in 0..x.grid().len() {
        for (a, b) in j.at(p).iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn grid_endpoints_and_interior() {
    let ax = Axis::new(0.1, 0.7, 7);
    assert_eq!(ax.coord(6), 0.7);
    assert_relative_eq!(ax.h(), 0.1, epsilon = 1e-15);
    let grid = Grid::grid2((0.0, 1.0), (0.0, 1.0), 10, 8).unwrap();
    assert_eq!(grid.interior(3).count(), 4 * 2);
    assert!(matches!(Grid::grid2((0.0, 1.0), (0.0, 1.0), 4, 8), Err(FieldError::GridTooSmall { .. })));
    assert!(matches!(Grid::grid2((1.0, 1.0), (0.0, 1.0), 5, 8), Err(FieldError::EmptyAxis { .. })));
}

#[test]
fn non_finite_values_are_rejected() {
    let grid = Grid::grid2((0.0, 1.0), (0.0, 1.0), 5, 5).unwrap();
    let mut data = vec![0.0; 25];
    data[7] = f64::NAN;
    assert_eq!(Field::new(grid.clone(), 1, data).unwrap_err(), FieldError::NonFiniteEntry { node: 7 });
    assert!(matches!(Field::new(grid, 2, vec![0.0; 3]), Err(FieldError::LengthMismatch { .. })));
}

#[test]
fn singular_values_of_scaled_rotation() {
    let (c, s) = (0.3f64.cos(), 0.3f64.sin());
    // R · diag(3, 2) with a 3 × 2 padding row of zeros.
    let m = [3.0 * c, -2.0 * s, 3.0 * s, 2.0 * c, 0.0, 0.0];
    let sv = singular_values(&m, 3, 2).unwrap();
    assert_relative_eq!(sv[0], 3.0, epsilon = 1e-12);
    assert_relative_eq!(sv[1], 2.0, epsilon = 1e-12);
    let svd = node_svd(&m, 3, 2).unwrap();
    assert_eq!(svd.sigma.len(), 2);
    assert_relative_eq!(svd.v[(0, 0)].abs(), 1.0, epsilon = 1e-12);
}

#[test]
fn numeric_rank_uses_relative_threshold() {
    assert_eq!(numeric_rank(&[1.0, 1e-3, 1e-9], 1e-6), 2);
    assert_eq!(numeric_rank(&[5.0, 5e-6, 0.0], 1e-6), 2);
    assert_eq!(numeric_rank(&[0.0, 0.0], 1e-6), 0);
}

#[test]
fn rank_profile_of_rank_one_field() {
    let grid = Grid::grid2((0.0, 1.0), (0.0, 1.0), 5, 5).unwrap();
    // x = (f(v1 + v2), 0, 0) has a rank-1 Jacobian.
    let x = Field::from_fn(grid, 3, |p, out| out[0] = (p[0] + p[1]).exp()).unwrap();
    let rp = rank_profile(&jacobian(&x).unwrap(), 1e-6).unwrap();
    assert!(rp.ranks().iter().all(|&r| r == 1));
    assert_eq!(rp.interior_fraction(1, |s| s[1] < 1e-12), 1.0);
    assert!(matches!(rank_profile(&jacobian(&x).unwrap(), 1.5), Err(FieldError::BadThreshold(_))));
}

#[test]
fn affine_span_of_planar_cloud() {
    let pts: Vec<f64> = (0..50)
        .flat_map(|k| {
            let (s, t) = ((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos());
            [1.0 + s, 2.0 - t, 3.0 + s + t, 0.5, -s]
        })
        .collect();
    assert_eq!(affine_span_dim(&pts, 5, 1e-6).unwrap(), 2);
    let line: Vec<f64> = (0..10).flat_map(|k| [k as f64, 2.0 * k as f64, 7.0]).collect();
    assert_eq!(affine_span_dim(&line, 3, 1e-6).unwrap(), 1);
    assert!(matches!(affine_span_dim(&[1.0, 2.0], 2, 1e-6), Err(FieldError::TooFewPoints(1))));
}

#[test]
fn small_dense_helpers() {
    let a = [4.0, 1.0, 1.0, 3.0];
    let inv = invert(&a, 2).unwrap();
    assert_relative_eq!(inv[0], 3.0 / 11.0, epsilon = 1e-15);
    assert_relative_eq!(inv[1], -1.0 / 11.0, epsilon = 1e-15);
    assert!(invert(&[1.0, 2.0, 2.0, 4.0], 2).is_none());
    assert_relative_eq!(min_eigenvalue(&a, 2), (7.0 - 5f64.sqrt()) / 2.0, epsilon = 1e-12);
}
