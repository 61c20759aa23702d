use crate::fieldcalc::{cubic_weights, Axis, Field, Grid};

use super::LiftError;

/// (v₂, v₃) ↦ (u₂, u₃) = (v₂ cos v₃, v₂ sin v₃).
pub fn polar_to_cartesian(v2: f64, v3: f64) -> (f64, f64) {
    (v2 * v3.cos(), v2 * v3.sin())
}

/// Inverse of [`polar_to_cartesian`] on the branch v₃ ∈ (−π, π].
pub fn cartesian_to_polar(u2: f64, u3: f64) -> (f64, f64) {
    (u2.hypot(u3), u3.atan2(u2))
}

/// Resamples every first-axis slice of a three-axis field at new points of the
/// last two axes, with bicubic Lagrange weights.
fn resample(
    field: &Field,
    target: Grid,
    map: impl Fn(f64, f64) -> (f64, f64),
    check: impl Fn(f64, f64) -> Result<(), LiftError>,
) -> Result<Field, LiftError> {
    let src = field.grid();
    let (sa, sb) = (*src.axis(1), *src.axis(2));
    let (ta, tb) = (*target.axis(1), *target.axis(2));
    let n1 = src.axis(0).n;
    let nc = field.ncomp();
    let mut data = vec![0.0; target.len() * nc];
    for ia in 0..ta.n {
        for ib in 0..tb.n {
            let (p, q) = map(ta.coord(ia), tb.coord(ib));
            check(p, q)?;
            if !sa.contains(p) || !sb.contains(q) {
                return Err(LiftError::OutsideChart(p, q));
            }
            let (s0, w0) = cubic_weights(&sa, p)?;
            let (s1, w1) = cubic_weights(&sb, q)?;
            for i1 in 0..n1 {
                let dst = (target.index(&[i1, ia, ib])) * nc;
                for (a, wa) in w0.iter().enumerate() {
                    for (b, wb) in w1.iter().enumerate() {
                        let w = wa * wb;
                        if w == 0.0 {
                            continue;
                        }
                        let node = src.index(&[i1, s0 + a, s1 + b]);
                        for c in 0..nc {
                            data[dst + c] += w * field.get(node, c);
                        }
                    }
                }
            }
        }
    }
    Ok(Field::new(target, nc, data)?)
}

/// Resamples a field over the polar v-chart (v₁, v₂, v₃) onto a rectangular
/// Cartesian u-grid (u₁ = v₁, u₂, u₃).
pub fn polar_to_cartesian_chart(field: &Field, u2: Axis, u3: Axis) -> Result<Field, LiftError> {
    let src = field.grid();
    let target = Grid::new(vec![*src.axis(0), u2, u3])?;
    let v2_min = src.axis(1).min;
    resample(field, target, cartesian_to_polar, |r, _| {
        if r < v2_min {
            Err(LiftError::OriginSingularity { radius: r, v2_min })
        } else {
            Ok(())
        }
    })
}

/// Resamples a field over the Cartesian u-chart back onto a polar v-grid.
pub fn cartesian_to_polar_chart(field: &Field, v2: Axis, v3: Axis) -> Result<Field, LiftError> {
    let src = field.grid();
    let target = Grid::new(vec![*src.axis(0), v2, v3])?;
    resample(field, target, polar_to_cartesian, |_, _| Ok(()))
}

/// Resamples a field of symmetric covariant 2-tensors (blocks of 3 × 3
/// components in the v-chart) onto a u-grid and transforms each block with the
/// chart Jacobian ∂v/∂u, so that T_u(i, j) = ∂vᵏ/∂uⁱ ∂vˡ/∂uʲ T_v(k, l).
pub fn covariant_to_cartesian(field: &Field, u2: Axis, u3: Axis) -> Result<Field, LiftError> {
    if field.ncomp() % 9 != 0 {
        return Err(LiftError::Field(crate::fieldcalc::FieldError::LengthMismatch {
            expected: 9,
            got: field.ncomp(),
        }));
    }
    let resampled = polar_to_cartesian_chart(field, u2, u3)?;
    let grid = resampled.grid().clone();
    let blocks = field.ncomp() / 9;
    Ok(Field::from_nodes(grid.clone(), field.ncomp(), |p, out| {
        let c = grid.coords(p);
        let (a, b) = (c[1], c[2]);
        let r2 = a * a + b * b;
        let r = r2.sqrt();
        // j[k][i] = ∂vᵏ/∂uⁱ
        let j = [[1.0, 0.0, 0.0], [0.0, a / r, b / r], [0.0, -b / r2, a / r2]];
        let src = resampled.at(p);
        for blk in 0..blocks {
            let t = &src[blk * 9..blk * 9 + 9];
            for i in 0..3 {
                for jj in 0..3 {
                    let mut s = 0.0;
                    for k in 0..3 {
                        for l in 0..3 {
                            s += j[k][i] * j[l][jj] * t[k * 3 + l];
                        }
                    }
                    out[blk * 9 + i * 3 + jj] = s;
                }
            }
        }
    })?)
}
