//! Five-point finite-difference stencils on uniform lines.
//!
//! Interior nodes use the fourth-order central formulas. The two nodes next
//! to each end use one-sided five-point formulas; for the first derivative
//! they are exact on quartics, for the second derivative exact on cubics.

use super::{Field, FieldError, Grid, MatrixField};

const D1_C: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];
const D1_B0: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];
const D1_B1: [f64; 5] = [-3.0, -10.0, 18.0, -6.0, 1.0];

const D2_C: [f64; 5] = [-1.0, 16.0, -30.0, 16.0, -1.0];
const D2_B0: [f64; 5] = [35.0, -104.0, 114.0, -56.0, 11.0];
const D2_B1: [f64; 5] = [11.0, -20.0, 6.0, 4.0, -1.0];

/// Derivative of order 1 or 2 of a uniformly sampled line.
///
/// `src` and `dst` are read and written with the given element stride so the
/// same routine serves rows, columns and components of flat arrays.
pub fn diff_line(
    src: &[f64],
    dst: &mut [f64],
    n: usize,
    stride: usize,
    h: f64,
    order: u8,
) {
    let (c, b0, b1, scale, flip) = match order {
        1 => (&D1_C, &D1_B0, &D1_B1, 1.0 / (12.0 * h), -1.0),
        _ => (&D2_C, &D2_B0, &D2_B1, 1.0 / (12.0 * h * h), 1.0),
    };
    let at = |i: usize| src[i * stride];
    let dot = |w: &[f64; 5], start: usize| (0..5).map(|k| w[k] * at(start + k)).sum::<f64>();
    let dot_rev = |w: &[f64; 5], end: usize| (0..5).map(|k| w[k] * at(end - k)).sum::<f64>();
    dst[0] = dot(b0, 0) * scale;
    dst[stride] = dot(b1, 0) * scale;
    for i in 2..n - 2 {
        dst[i * stride] = dot(c, i - 2) * scale;
    }
    dst[(n - 2) * stride] = flip * dot_rev(b1, n - 1) * scale;
    dst[(n - 1) * stride] = flip * dot_rev(b0, n - 1) * scale;
}

/// Derivative of a field along one chart axis.
pub fn partial(field: &Field, axis: usize, order: u8) -> Result<Field, FieldError> {
    let grid = field.grid();
    if axis >= grid.dim() {
        return Err(FieldError::AxisOutOfRange { axis, dim: grid.dim() });
    }
    if !(1..=2).contains(&order) {
        return Err(FieldError::BadOrder(order));
    }
    let n = grid.axis(axis).n;
    if n < super::grid::MIN_NODES {
        return Err(FieldError::GridTooSmall { axis, n });
    }
    let h = grid.h(axis);
    let nc = field.ncomp();
    let inner = grid.stride(axis) * nc;
    let outer = grid.len() / (n * grid.stride(axis));
    let src = field.data();
    let mut out = vec![0.0; src.len()];
    for o in 0..outer {
        let base = o * n * inner;
        for j in 0..inner {
            let off = base + j;
            diff_line(&src[off..], &mut out[off..], n, inner, h, order);
        }
    }
    Field::new(grid.clone(), nc, out)
}

/// Per-node Jacobian with column `i` equal to the first derivative along axis `i`.
pub fn jacobian(x: &Field) -> Result<MatrixField, FieldError> {
    let cols: Vec<Field> = (0..x.grid().dim())
        .map(|k| partial(x, k, 1))
        .collect::<Result<_, _>>()?;
    jacobian_from_columns(x.grid(), &cols)
}

/// Assembles a Jacobian field from precomputed derivative columns.
pub fn jacobian_from_columns(grid: &Grid, cols: &[Field]) -> Result<MatrixField, FieldError> {
    let m = cols.len();
    let n = cols.first().map_or(0, |c| c.ncomp());
    let mut data = Vec::with_capacity(grid.len() * n * m);
    for p in 0..grid.len() {
        for r in 0..n {
            for c in cols {
                data.push(c.get(p, r));
            }
        }
    }
    MatrixField::new(grid.clone(), n, m, data)
}
