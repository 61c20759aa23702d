use nalgebra::{Matrix2, Matrix3};

use crate::fieldcalc::{cubic_on_line, Field, Grid};
use crate::geometry::{metric_from_jet, Jet};
use crate::INTERIOR_BAND;

use super::{reduced_system_residuals, Case, CodazziError, CodazziSolution, SurfaceSpec};

/// Largest tolerated sup-norm gap between the two integration orders.
pub const PATH_TOLERANCE: f64 = 1e-3;

/// A metric on the (v₁, v₂) plane given in closed form with first derivatives.
pub trait BaseMetric {
    /// [g11, g12, g22] and their v₁- and v₂-derivatives.
    fn metric_jet(&self, v1: f64, v2: f64) -> [[f64; 3]; 3];
}

impl BaseMetric for Case {
    fn metric_jet(&self, v1: f64, v2: f64) -> [[f64; 3]; 3] {
        Case::metric_jet(self, v1, v2)
    }
}

/// The flat metric dv₁² + dv₂².
#[derive(Debug, Clone, Copy)]
pub struct Euclidean;

impl BaseMetric for Euclidean {
    fn metric_jet(&self, _: f64, _: f64) -> [[f64; 3]; 3] {
        [[1.0, 0.0, 1.0], [0.0; 3], [0.0; 3]]
    }
}

/// Reconstructed base surface x̄ ⊂ ℝ³ with its moving frame.
#[derive(Debug, Clone)]
pub struct BuiltSurface {
    pub spec: SurfaceSpec,
    pub x: Field,
    /// ∂₁x̄ and ∂₂x̄ as integrated (not differenced).
    pub e1: Field,
    pub e2: Field,
    pub normal: Field,
    /// Interior sup-norm deviation of the differenced metric from the prescribed one.
    pub metric_residual: f64,
    /// Interior sup-norm of the reduced-system residual of the Codazzi data.
    pub codazzi_residual: f64,
    /// Sup-norm gap between the two integration orders.
    pub path_difference: f64,
}

struct Sheet {
    b: [Vec<f64>; 3],
    n1: usize,
    n2: usize,
}

impl Sheet {
    fn at(&self, c: usize, i: usize, j: usize) -> f64 {
        self.b[c][i * self.n2 + j]
    }
}

fn christoffel2(jet: &[[f64; 3]; 3]) -> ([[f64; 2]; 2], [[[f64; 2]; 2]; 2]) {
    let [g, d1, d2] = *jet;
    let gm = [[g[0], g[1]], [g[1], g[2]]];
    let det = g[0] * g[2] - g[1] * g[1];
    let gi = [[g[2] / det, -g[1] / det], [-g[1] / det, g[0] / det]];
    let dg = |a: usize, i: usize, j: usize| {
        let d = if a == 0 { &d1 } else { &d2 };
        d[if i == j { 2 * i } else { 1 }]
    };
    let mut gam = [[[0.0; 2]; 2]; 2];
    for k in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                gam[k][i][j] = (0..2)
                    .map(|l| 0.5 * gi[k][l] * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j)))
                    .sum();
            }
        }
    }
    let _ = gm;
    (gi, gam)
}

/// d/dv_axis of the 12-vector (x̄, e₁, e₂, n̄) given the local second form.
fn frame_rhs<M: BaseMetric>(model: &M, axis: usize, v: [f64; 2], b: [f64; 3], y: &[f64; 12]) -> [f64; 12] {
    let (gi, gam) = christoffel2(&model.metric_jet(v[0], v[1]));
    let bm = [[b[0], b[1]], [b[1], b[2]]];
    let e = |s: usize| [y[3 + 3 * s], y[4 + 3 * s], y[5 + 3 * s]];
    let n = [y[9], y[10], y[11]];
    let mut out = [0.0; 12];
    let ea = e(axis);
    out[..3].copy_from_slice(&ea);
    for i in 0..2 {
        for c in 0..3 {
            out[3 + 3 * i + c] =
                gam[0][axis][i] * e(0)[c] + gam[1][axis][i] * e(1)[c] + bm[axis][i] * n[c];
        }
    }
    for s in 0..2 {
        let w = (0..2).map(|p| bm[axis][p] * gi[p][s]).sum::<f64>();
        for c in 0..3 {
            out[9 + c] -= w * e(s)[c];
        }
    }
    out
}

/// Restores orthonormality of F G^{−1/2} by its polar factor, G = diag(g, 1).
fn polar_correct(g: [f64; 3], y: &mut [f64; 12]) {
    let gm = Matrix2::new(g[0], g[1], g[1], g[2]);
    let sqrt_det = gm.determinant().sqrt();
    let s = (gm + Matrix2::identity() * sqrt_det) / (gm.trace() + 2.0 * sqrt_det).sqrt();
    let s_inv = s.try_inverse().expect("metric is positive definite");
    let mut half = Matrix3::identity();
    let mut half_inv = Matrix3::identity();
    for i in 0..2 {
        for j in 0..2 {
            half[(i, j)] = s[(i, j)];
            half_inv[(i, j)] = s_inv[(i, j)];
        }
    }
    let f = Matrix3::new(y[3], y[6], y[9], y[4], y[7], y[10], y[5], y[8], y[11]);
    let svd = (f * half_inv).svd(true, true);
    let q = svd.u.expect("u requested") * svd.v_t.expect("v_t requested");
    let fixed = q * half;
    for col in 0..3 {
        for r in 0..3 {
            y[3 + 3 * col + r] = fixed[(r, col)];
        }
    }
}

/// RK4 along one grid line. `values(c, s)` interpolates b̄ component `c` at
/// fractional line index `s`; `coord(s)` gives the chart point.
fn integrate_line<M: BaseMetric>(
    model: &M,
    axis: usize,
    steps: usize,
    h: f64,
    start: [f64; 12],
    coord: &dyn Fn(f64) -> [f64; 2],
    values: &dyn Fn(f64) -> [f64; 3],
) -> Vec<[f64; 12]> {
    let mut out = Vec::with_capacity(steps + 1);
    let mut y = start;
    out.push(y);
    let add = |y: &[f64; 12], k: &[f64; 12], a: f64| {
        let mut r = *y;
        r.iter_mut().zip(k).for_each(|(ri, ki)| *ri += a * ki);
        r
    };
    for i in 0..steps {
        let s = i as f64;
        let f = |t: f64, y: &[f64; 12]| frame_rhs(model, axis, coord(t), values(t), y);
        let k1 = f(s, &y);
        let k2 = f(s + 0.5, &add(&y, &k1, 0.5 * h));
        let k3 = f(s + 0.5, &add(&y, &k2, 0.5 * h));
        let k4 = f(s + 1.0, &add(&y, &k3, h));
        for q in 0..12 {
            y[q] += h / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
        }
        let v = coord(s + 1.0);
        polar_correct(model.metric_jet(v[0], v[1])[0], &mut y);
        out.push(y);
    }
    out
}

/// Frame at the corner (v1_min, v2_min): e₁ along the first ambient axis,
/// e₂ in the first two, n̄ = e₃.
fn initial_frame(g: [f64; 3]) -> [f64; 12] {
    let s11 = g[0].sqrt();
    let e2x = g[1] / s11;
    let e2y = (g[2] - e2x * e2x).sqrt();
    [0.0, 0.0, 0.0, s11, 0.0, 0.0, e2x, e2y, 0.0, 0.0, 0.0, 1.0]
}

/// Integrates the frame over the whole sheet; `v1_first` selects the order
/// (edge v₂ = v2_min along v₁, then v₂ lines) or its transpose.
fn integrate_sheet<M: BaseMetric>(model: &M, grid: &Grid, sheet: &Sheet, v1_first: bool) -> Vec<[f64; 12]> {
    let (ax1, ax2) = (*grid.axis(0), *grid.axis(1));
    let (n1, n2) = (sheet.n1, sheet.n2);
    let mut states = vec![[0.0; 12]; n1 * n2];
    let start = initial_frame(model.metric_jet(ax1.min, ax2.min)[0]);
    let line_v1 = |j: usize, y0: [f64; 12]| {
        let col: [Vec<f64>; 3] = std::array::from_fn(|c| (0..n1).map(|i| sheet.at(c, i, j)).collect());
        let v2 = ax2.coord(j);
        integrate_line(
            model,
            0,
            n1 - 1,
            ax1.h(),
            y0,
            &|s| [ax1.min + s * ax1.h(), v2],
            &|s| std::array::from_fn(|c| cubic_on_line(&col[c], s)),
        )
    };
    let line_v2 = |i: usize, y0: [f64; 12]| {
        let row: [Vec<f64>; 3] = std::array::from_fn(|c| (0..n2).map(|j| sheet.at(c, i, j)).collect());
        let v1 = ax1.coord(i);
        integrate_line(
            model,
            1,
            n2 - 1,
            ax2.h(),
            y0,
            &|s| [v1, ax2.min + s * ax2.h()],
            &|s| std::array::from_fn(|c| cubic_on_line(&row[c], s)),
        )
    };
    if v1_first {
        let edge = line_v1(0, start);
        for (i, y0) in edge.into_iter().enumerate() {
            for (j, y) in line_v2(i, y0).into_iter().enumerate() {
                states[i * n2 + j] = y;
            }
        }
    } else {
        let edge = line_v2(0, start);
        for (j, y0) in edge.into_iter().enumerate() {
            for (i, y) in line_v1(j, y0).into_iter().enumerate() {
                states[i * n2 + j] = y;
            }
        }
    }
    states
}

fn unpack(grid: &Grid, states: &[[f64; 12]], offset: usize) -> Result<Field, CodazziError> {
    let data = states.iter().flat_map(|y| y[offset..offset + 3].to_vec()).collect();
    Ok(Field::new(grid.clone(), 3, data)?)
}

/// Integrates the Gauss–Weingarten frame system for a closed-form metric
/// and sampled second form; returns (x̄, e₁, e₂, n̄) and the path gap.
pub fn integrate_frame_with<M: BaseMetric>(
    model: &M,
    grid: &Grid,
    b11: &Field,
    b12: &Field,
    b22: &Field,
) -> Result<([Field; 4], f64), CodazziError> {
    if grid.dim() != 2 {
        return Err(CodazziError::Domain("frame integration needs a 2D grid".into()));
    }
    let sheet = Sheet {
        b: [b11.data().to_vec(), b12.data().to_vec(), b22.data().to_vec()],
        n1: grid.axis(0).n,
        n2: grid.axis(1).n,
    };
    let a = integrate_sheet(model, grid, &sheet, true);
    let b = integrate_sheet(model, grid, &sheet, false);
    let gap = a
        .iter()
        .zip(&b)
        .flat_map(|(p, q)| (0..3).map(move |c| (p[c] - q[c]).abs()))
        .fold(0.0, f64::max);
    let fields = [unpack(grid, &a, 0)?, unpack(grid, &a, 3)?, unpack(grid, &a, 6)?, unpack(grid, &a, 9)?];
    Ok((fields, gap))
}

/// Reconstructs the base surface from its Codazzi data.
pub fn integrate_frame(spec: &SurfaceSpec, sol: &CodazziSolution) -> Result<BuiltSurface, CodazziError> {
    spec.validate()?;
    let grid = spec.grid()?;
    if sol.b11.grid() != &grid {
        return Err(CodazziError::Domain("solution grid differs from the surface domain".into()));
    }
    let ([x, e1, e2, normal], gap) = integrate_frame_with(&spec.case, &grid, &sol.b11, &sol.b12, &sol.b22)?;
    if gap > PATH_TOLERANCE {
        return Err(CodazziError::PathInconsistency { difference: gap });
    }
    let g = metric_from_jet(&Jet::first_order(&x)?)?;
    let prescribed = super::prescribed_metric(spec)?;
    let metric_residual = g.max_deviation(&prescribed, INTERIOR_BAND);
    let codazzi_residual = reduced_system_residuals(spec, sol)?.sup_interior(INTERIOR_BAND);
    Ok(BuiltSurface {
        spec: spec.clone(),
        x,
        e1,
        e2,
        normal,
        metric_residual,
        codazzi_residual,
        path_difference: gap,
    })
}

/// Solves the Codazzi system and reconstructs the base surface in one call.
pub fn build_surface(spec: &SurfaceSpec) -> Result<(CodazziSolution, BuiltSurface), CodazziError> {
    let sol = super::solve_codazzi(spec)?;
    let surface = integrate_frame(spec, &sol)?;
    Ok((sol, surface))
}
