use crate::codazzi::{Case, CodazziSolution, SurfaceSpec};
use crate::fieldcalc::{Axis, Grid};
use crate::geometry::{MetricField, NormalFrameField, SecondFormField, TorsionField};

use super::{LiftError, LiftedSubmanifold};

/// Which closed-form family supplies the reference data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferenceVariant {
    /// The forms written for the two examples directly in terms of b̄.
    Example,
    /// The canonical forms of the classification, with f and a₃₃ chosen to match the case.
    Canonical,
}

/// Canonical metric-and-forms template of the classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CanonicalTemplate {
    /// a₃₃ ≡ 1, f ≡ 1.
    Case1,
    /// a₃₃ = v₂², f = f₀/v₂².
    Case2 { f0: f64 },
}

impl CanonicalTemplate {
    pub fn for_case(case: Case) -> Self {
        match case {
            Case::Example1 => CanonicalTemplate::Case1,
            Case::Example2 { a } => CanonicalTemplate::Case2 { f0: a * a - 1.0 },
        }
    }

    fn a33(&self, v2: f64) -> f64 {
        match self {
            CanonicalTemplate::Case1 => 1.0,
            CanonicalTemplate::Case2 { .. } => v2 * v2,
        }
    }

    fn f(&self, v2: f64) -> f64 {
        match self {
            CanonicalTemplate::Case1 => 1.0,
            CanonicalTemplate::Case2 { f0 } => f0 / (v2 * v2),
        }
    }

    /// Diagonal metric (1, e^{−2v₁}, e^{−2v₁}a₃₃).
    pub fn metric(&self, v1: f64, v2: f64) -> [f64; 3] {
        let e = (-2.0 * v1).exp();
        [1.0, e, e * self.a33(v2)]
    }

    /// Diagonal of b¹ from the closed-form solution of the normal-1 equations.
    pub fn b1(&self, v1: f64, v2: f64) -> Result<[f64; 3], LiftError> {
        let e = (-2.0 * v1).exp();
        let s = (self.f(v2) / e - 1.0).sqrt();
        if !(s.is_finite() && s > 0.0) {
            return Err(crate::codazzi::CodazziError::Domain(format!(
                "canonical forms undefined at (v1, v2) = ({v1}, {v2})"
            ))
            .into());
        }
        let b11 = 1.0 / s;
        Ok([b11, e * b11, -e * self.a33(v2) / b11])
    }

    /// (μ₁₂|₁, μ₁₂|₂) in terms of b² = (b²₁₁, b²₁₂, b²₂₂).
    pub fn mu(&self, v1: f64, v2: f64, b: [f64; 3]) -> [f64; 2] {
        let e2 = (2.0 * v1).exp();
        match *self {
            CanonicalTemplate::Case1 => {
                let s = (e2 - 1.0).sqrt();
                [b[0] / s, b[1] / s]
            }
            CanonicalTemplate::Case2 { f0 } => {
                let s = (f0 * e2 - v2 * v2).sqrt();
                [(v2 * b[0] - e2 * b[1]) / s, (v2 * b[1] - e2 * b[2]) / s]
            }
        }
    }

    /// Residuals of the reduced system the b² coefficients must satisfy.
    pub fn reduced_residuals(&self, v1: f64, v2: f64, b: [f64; 3], d1: [f64; 3], d2: [f64; 3]) -> [f64; 3] {
        let e2 = (2.0 * v1).exp();
        match *self {
            CanonicalTemplate::Case1 => {
                let s = e2 - 1.0;
                [
                    b[0] * b[2] - b[1] * b[1] + 1.0 / s,
                    d2[0] - d1[1] + b[1] * e2 / s,
                    d2[1] - d1[2] - b[0] / s - b[2],
                ]
            }
            CanonicalTemplate::Case2 { f0 } => {
                let s = f0 * e2 - v2 * v2;
                [
                    b[0] * b[2] - b[1] * b[1] + f0 / s,
                    d2[0] - d1[1] + (f0 * b[1] - v2 * b[2]) * e2 / s,
                    d2[1] - d1[2] + (v2 * b[1] - f0 * b[0]) / s - b[2],
                ]
            }
        }
    }
}

/// Closed-form metric, second forms (b¹, b²) and torsion over a lift grid.
#[derive(Debug, Clone)]
pub struct ReferenceForms {
    pub metric: MetricField,
    pub forms: SecondFormField,
    pub torsion: TorsionField,
}

/// b¹ diagonal and (μ₁₂|₁, μ₁₂|₂) as written for the examples.
fn example_forms(case: Case, v1: f64, v2: f64, b: [f64; 3]) -> ([f64; 3], [f64; 2]) {
    let r = (-v1).exp();
    let e = r * r;
    match case {
        Case::Example1 => {
            let s = (1.0 - e).sqrt();
            ([r / s, r * e / s, -r * s], [r * b[0] / s, r * b[1] / s])
        }
        Case::Example2 { a } => {
            let s = (a * a - 1.0 - e * v2 * v2).sqrt();
            let ri = 1.0 / r;
            (
                [r * v2 / s, r * e * v2 / s, -r * v2 * s],
                [(r * v2 * b[0] - ri * b[1]) / s, (r * v2 * b[1] - ri * b[2]) / s],
            )
        }
    }
}

fn assemble(
    grid: Grid,
    case_metric: impl Fn(f64, f64) -> [f64; 3],
    forms_at: impl Fn(usize, f64, f64) -> Result<([f64; 3], [f64; 3], [f64; 2]), LiftError>,
) -> Result<ReferenceForms, LiftError> {
    let n3 = grid.axis(2).n;
    let mut b = vec![0.0; grid.len() * 18];
    let mut mu = vec![0.0; grid.len() * 3];
    let mut g = vec![0.0; grid.len() * 9];
    for p in 0..grid.len() {
        let c = grid.coords(p);
        let (b1, b2, m) = forms_at(p / n3, c[0], c[1])?;
        let blk = &mut b[p * 18..(p + 1) * 18];
        blk[0] = b1[0];
        blk[4] = b1[1];
        blk[8] = b1[2];
        blk[9] = b2[0];
        blk[10] = b2[1];
        blk[12] = b2[1];
        blk[13] = b2[2];
        mu[p * 3] = m[0];
        mu[p * 3 + 1] = m[1];
        let d = case_metric(c[0], c[1]);
        g[p * 9] = d[0];
        g[p * 9 + 4] = d[1];
        g[p * 9 + 8] = d[2];
    }
    Ok(ReferenceForms {
        metric: MetricField::new(grid.clone(), 3, g).map_err(|e| {
            LiftError::Codazzi(crate::codazzi::CodazziError::Geometry(e))
        })?,
        forms: SecondFormField::new(grid.clone(), 3, 2, b)
            .map_err(|e| LiftError::Codazzi(e.into()))?,
        torsion: TorsionField::new(grid, 3, 2, mu).map_err(|e| LiftError::Codazzi(e.into()))?,
    })
}

/// Closed-form references for the lift of `spec` over the v₃ axis `v3`, with b² = b̄.
pub fn reference_forms(
    spec: &SurfaceSpec,
    sol: &CodazziSolution,
    v3: Axis,
    variant: ReferenceVariant,
) -> Result<ReferenceForms, LiftError> {
    spec.validate()?;
    match variant {
        ReferenceVariant::Canonical => {
            canonical_forms(CanonicalTemplate::for_case(spec.case), sol, v3)
        }
        ReferenceVariant::Example => {
            let grid = sol.b11.grid().extend(v3)?;
            let case = spec.case;
            let metric = move |v1: f64, v2: f64| match case {
                Case::Example1 => [1.0, (-2.0 * v1).exp(), (-2.0 * v1).exp()],
                Case::Example2 { .. } => [1.0, (-2.0 * v1).exp(), (-2.0 * v1).exp() * v2 * v2],
            };
            assemble(grid, metric, |q, v1, v2| {
                let b = sol.at(q);
                let (b1, m) = example_forms(case, v1, v2, b);
                if b1.iter().chain(&m).any(|v| !v.is_finite()) {
                    return Err(crate::codazzi::CodazziError::Domain(format!(
                        "closed forms undefined at (v1, v2) = ({v1}, {v2})"
                    ))
                    .into());
                }
                Ok((b1, b, m))
            })
        }
    }
}

/// Canonical-template references evaluated with b² = b̄ from `sol`.
pub fn canonical_forms(
    template: CanonicalTemplate,
    sol: &CodazziSolution,
    v3: Axis,
) -> Result<ReferenceForms, LiftError> {
    let grid = sol.b11.grid().extend(v3)?;
    assemble(grid, |v1, v2| template.metric(v1, v2), |q, v1, v2| {
        let b = sol.at(q);
        Ok((template.b1(v1, v2)?, b, template.mu(v1, v2, b)))
    })
}

/// The closed-form normal frame (n₁, n₂) of a lift, built from the integrated
/// base frame (∂₁x̄, ∂₂x̄, n̄).
pub fn reference_frame(lifted: &LiftedSubmanifold) -> Result<NormalFrameField, LiftError> {
    let grid = lifted.grid().clone();
    let n3 = grid.axis(2).n;
    let base = &lifted.base;
    let mut data = vec![0.0; grid.len() * 10];
    for p in 0..grid.len() {
        let c = grid.coords(p);
        let q = p / n3;
        let (v1, v2, v3) = (c[0], c[1], c[2]);
        let (e1, e2, nb) = (base.e1.at(q), base.e2.at(q), base.normal.at(q));
        let r = (-v1).exp();
        let n1: [f64; 5] = match lifted.spec.case {
            Case::Example1 => {
                let s = (1.0 - r * r).sqrt();
                let k = r / s;
                [k * e1[0], k * e1[1], k * e1[2], s * v3.cos(), s * v3.sin()]
            }
            Case::Example2 { a } => {
                let d = a * a - 1.0 - r * r * v2 * v2;
                let sd = d.sqrt();
                let k = sd / d;
                let t: Vec<f64> = (0..3).map(|i| k * (r * v2 * e1[i] - e2[i] / r)).collect();
                [t[0], t[1], t[2], sd / a * (a * v3).cos(), sd / a * (a * v3).sin()]
            }
        };
        data[p * 10..p * 10 + 5].copy_from_slice(&n1);
        data[p * 10 + 5..p * 10 + 8].copy_from_slice(nb);
    }
    NormalFrameField::new(grid, 5, 2, data).map_err(|e| LiftError::Codazzi(e.into()))
}
