//! Tensor-product cubic Lagrange interpolation on a grid.

use super::{Axis, Field, FieldError};

/// First node and the four weights of the cubic through the nodes
/// `start..start + 4` evaluated at coordinate `t`.
pub fn cubic_weights(axis: &Axis, t: f64) -> Result<(usize, [f64; 4]), FieldError> {
    if !axis.contains(t) {
        return Err(FieldError::OutOfGrid { value: t, min: axis.min, max: axis.max });
    }
    let s = axis.locate(t).clamp(0.0, (axis.n - 1) as f64);
    let nearest = s.round();
    if (s - nearest).abs() < 1e-12 {
        let mut w = [0.0; 4];
        let i = nearest as usize;
        let start = i.saturating_sub(1).min(axis.n - 4);
        w[i - start] = 1.0;
        return Ok((start, w));
    }
    let cell = (s.floor() as usize).min(axis.n - 2);
    let start = cell.saturating_sub(1).min(axis.n - 4);
    let x = s - start as f64;
    let mut w = [0.0; 4];
    for (i, wi) in w.iter_mut().enumerate() {
        let mut num = 1.0;
        let mut den = 1.0;
        for j in 0..4 {
            if j != i {
                num *= x - j as f64;
                den *= i as f64 - j as f64;
            }
        }
        *wi = num / den;
    }
    Ok((start, w))
}

/// Interpolated field value at an arbitrary chart point.
pub fn sample_cubic(field: &Field, point: &[f64]) -> Result<Vec<f64>, FieldError> {
    let grid = field.grid();
    let dim = grid.dim();
    if point.len() != dim {
        return Err(FieldError::BadDimension(point.len()));
    }
    let mut starts = [0usize; 3];
    let mut weights = [[1.0, 0.0, 0.0, 0.0]; 3];
    for k in 0..dim {
        let (s, w) = cubic_weights(grid.axis(k), point[k])?;
        starts[k] = s;
        weights[k] = w;
    }
    let nc = field.ncomp();
    let mut out = vec![0.0; nc];
    let span = |k: usize| if k < dim { 4 } else { 1 };
    let mut idx = [0usize; 3];
    for a in 0..span(0) {
        for b in 0..span(1) {
            for c in 0..span(2) {
                let w = weights[0][a] * weights[1][b] * weights[2][c];
                if w == 0.0 {
                    continue;
                }
                idx[0] = starts[0] + a;
                idx[1] = starts[1] + b;
                idx[2] = starts[2] + c;
                let node = grid.index(&idx[..dim]);
                for (o, v) in out.iter_mut().zip(field.at(node)) {
                    *o += w * v;
                }
            }
        }
    }
    Ok(out)
}

/// Four-point Lagrange interpolation of a uniformly sampled line at fractional index `s`.
pub fn cubic_on_line(values: &[f64], s: f64) -> f64 {
    let n = values.len();
    let cell = (s.floor().max(0.0) as usize).min(n - 2);
    let start = cell.saturating_sub(1).min(n - 4);
    let x = s - start as f64;
    let mut acc = 0.0;
    for i in 0..4 {
        let mut w = 1.0;
        for j in 0..4 {
            if j != i {
                w *= (x - j as f64) / (i as f64 - j as f64);
            }
        }
        acc += w * values[start + i];
    }
    acc
}
