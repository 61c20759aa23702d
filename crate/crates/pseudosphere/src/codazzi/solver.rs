use crate::fieldcalc::{diff_line, Field};

use super::{CodazziError, SurfaceSpec};

/// Smallest admissible |b̄₂₂| during the constraint solve.
pub const PIVOT_FLOOR: f64 = 1e-8;
/// Any field magnitude above this aborts the evolution.
pub const BLOW_UP: f64 = 1e6;

/// Second fundamental form of the base surface on the domain of its `SurfaceSpec`.
#[derive(Debug, Clone)]
pub struct CodazziSolution {
    pub b11: Field,
    pub b12: Field,
    pub b22: Field,
    /// Gauss-constraint residual just before each projection, per node.
    pub gauss_residual: Field,
    /// Number of RK4 substeps per grid interval in v₁.
    pub substeps: usize,
}

impl CodazziSolution {
    pub fn min_abs_b12(&self) -> f64 {
        self.b12.data().iter().fold(f64::INFINITY, |m, v| m.min(v.abs()))
    }

    /// (b̄₁₁, b̄₁₂, b̄₂₂) at a node.
    pub fn at(&self, node: usize) -> [f64; 3] {
        [self.b11.get(node, 0), self.b12.get(node, 0), self.b22.get(node, 0)]
    }

    /// The three components as one field.
    pub fn stacked(&self) -> Field {
        Field::stack(&[&self.b11, &self.b12, &self.b22]).expect("solution fields share a grid")
    }
}

struct Line<'a> {
    spec: &'a SurfaceSpec,
    v2: Vec<f64>,
    h2: f64,
    d2b11: Vec<f64>,
    d2b12: Vec<f64>,
}

impl Line<'_> {
    /// d/dv₁ of the state (b̄₁₁, b̄₁₂, b̄₂₂), stored as three consecutive blocks of n2.
    fn rhs(&mut self, v1: f64, y: &[f64], dy: &mut [f64]) -> Result<(), CodazziError> {
        let n = self.v2.len();
        let (b11, rest) = y.split_at(n);
        let (b12, b22) = rest.split_at(n);
        diff_line(b11, &mut self.d2b11, n, 1, self.h2, 1);
        diff_line(b12, &mut self.d2b12, n, 1, self.h2, 1);
        let case = self.spec.case;
        for j in 0..n {
            let v2 = self.v2[j];
            if b22[j].abs() < PIVOT_FLOOR {
                return Err(CodazziError::PivotLoss { v1, v2, value: b22[j] });
            }
            let (c12, c22) = case.codazzi_terms(v1, v2, b11[j], b12[j], b22[j]);
            let db12 = self.d2b11[j] + c12;
            let db22 = self.d2b12[j] + c22;
            let db11 = (case.gauss_rhs_d1(v1, v2) + 2.0 * b12[j] * db12 - b11[j] * db22) / b22[j];
            dy[j] = db11;
            dy[n + j] = db12;
            dy[2 * n + j] = db22;
        }
        Ok(())
    }
}

/// Solves the reduced Gauss–Codazzi system by the method of lines.
///
/// The v₂ direction is discretized with the five-point stencils and the
/// state is advanced in v₁ by classical RK4 with substeps no longer than a
/// quarter of the v₂ spacing. b̄₁₂ and b̄₂₂ follow the two Codazzi equations;
/// b̄₁₁ follows the v₁-derivative of the Gauss constraint and, after every
/// substep, the larger of b̄₁₁, b̄₂₂ in magnitude is re-solved from the
/// constraint itself. The residual removed by that projection is recorded.
pub fn solve_codazzi(spec: &SurfaceSpec) -> Result<CodazziSolution, CodazziError> {
    spec.validate()?;
    let grid = spec.grid()?;
    let (ax1, ax2) = (*grid.axis(0), *grid.axis(1));
    let (n1, n2) = (ax1.n, ax2.n);
    let (h1, h2) = (ax1.h(), ax2.h());
    let substeps = (h1 / (h2 / 4.0)).ceil().max(1.0) as usize;
    let dt = h1 / substeps as f64;
    let case = spec.case;

    let v2: Vec<f64> = (0..n2).map(|j| ax2.coord(j)).collect();
    let (b12_0, b22_0) = spec.initial_line()?;
    let mut y = vec![0.0; 3 * n2];
    for j in 0..n2 {
        if b22_0[j].abs() < PIVOT_FLOOR {
            return Err(CodazziError::PivotLoss { v1: ax1.min, v2: v2[j], value: b22_0[j] });
        }
        y[j] = (b12_0[j] * b12_0[j] + case.gauss_rhs(ax1.min, v2[j])) / b22_0[j];
        y[n2 + j] = b12_0[j];
        y[2 * n2 + j] = b22_0[j];
    }

    let mut line = Line { spec, v2: v2.clone(), h2, d2b11: vec![0.0; n2], d2b12: vec![0.0; n2] };
    let mut out = [vec![0.0; n1 * n2], vec![0.0; n1 * n2], vec![0.0; n1 * n2]];
    let mut resid = vec![0.0; n1 * n2];
    let store = |out: &mut [Vec<f64>; 3], i: usize, y: &[f64]| {
        for c in 0..3 {
            out[c][i * n2..(i + 1) * n2].copy_from_slice(&y[c * n2..(c + 1) * n2]);
        }
    };
    for j in 0..n2 {
        resid[j] = constraint(case, ax1.min, v2[j], y[j], y[n2 + j], y[2 * n2 + j]).abs();
    }
    store(&mut out, 0, &y);

    let len = 3 * n2;
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len]);
    let mut v1 = ax1.min;
    for i in 1..n1 {
        let mut row_resid = vec![0.0f64; n2];
        for s in 0..substeps {
            line.rhs(v1, &y, &mut k1)?;
            axpy(&mut tmp, &y, 0.5 * dt, &k1);
            line.rhs(v1 + 0.5 * dt, &tmp, &mut k2)?;
            axpy(&mut tmp, &y, 0.5 * dt, &k2);
            line.rhs(v1 + 0.5 * dt, &tmp, &mut k3)?;
            axpy(&mut tmp, &y, dt, &k3);
            line.rhs(v1 + dt, &tmp, &mut k4)?;
            for q in 0..len {
                y[q] += dt / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
            }
            v1 = if s + 1 == substeps { ax1.coord(i) } else { v1 + dt };
            for j in 0..n2 {
                let (b11, b12, b22) = (y[j], y[n2 + j], y[2 * n2 + j]);
                row_resid[j] = row_resid[j].max(constraint(case, v1, v2[j], b11, b12, b22).abs());
                let rhs = b12 * b12 + case.gauss_rhs(v1, v2[j]);
                if b22.abs() >= b11.abs() {
                    if b22.abs() < PIVOT_FLOOR {
                        return Err(CodazziError::PivotLoss { v1, v2: v2[j], value: b22 });
                    }
                    y[j] = rhs / b22;
                } else {
                    y[2 * n2 + j] = rhs / b11;
                }
            }
            if let Some(q) = y.iter().position(|v| !v.is_finite() || v.abs() > BLOW_UP) {
                return Err(CodazziError::BlowUp { v1, v2: v2[q % n2] });
            }
        }
        resid[i * n2..(i + 1) * n2].copy_from_slice(&row_resid);
        store(&mut out, i, &y);
    }

    let [b11, b12, b22] = out;
    Ok(CodazziSolution {
        b11: Field::new(grid.clone(), 1, b11)?,
        b12: Field::new(grid.clone(), 1, b12)?,
        b22: Field::new(grid.clone(), 1, b22)?,
        gauss_residual: Field::new(grid, 1, resid)?,
        substeps,
    })
}

fn constraint(case: super::Case, v1: f64, v2: f64, b11: f64, b12: f64, b22: f64) -> f64 {
    b11 * b22 - b12 * b12 - case.gauss_rhs(v1, v2)
}

fn axpy(out: &mut [f64], y: &[f64], a: f64, k: &[f64]) {
    for ((o, yv), kv) in out.iter_mut().zip(y).zip(k) {
        *o = yv + a * kv;
    }
}

/// Residuals of the reduced Gauss and two Codazzi equations evaluated on a
/// solution with fresh finite differences (three components per node).
pub fn reduced_system_residuals(spec: &SurfaceSpec, sol: &CodazziSolution) -> Result<Field, CodazziError> {
    let b = sol.stacked();
    let d1 = crate::fieldcalc::partial(&b, 0, 1)?;
    let d2 = crate::fieldcalc::partial(&b, 1, 1)?;
    let grid = b.grid().clone();
    let case = spec.case;
    Ok(Field::from_nodes(grid.clone(), 3, |p, out| {
        let c = grid.coords(p);
        let pick = |f: &Field| [f.get(p, 0), f.get(p, 1), f.get(p, 2)];
        out.copy_from_slice(&case.reduced_residuals(c[0], c[1], pick(&b), pick(&d1), pick(&d2)));
    })?)
}
