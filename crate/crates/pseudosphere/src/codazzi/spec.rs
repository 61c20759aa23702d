use serde::{Deserialize, Serialize};

use crate::fieldcalc::Grid;
use crate::geometry::MetricField;

use super::CodazziError;

/// Smallest admissible v1_min for Example 1.
pub const EXAMPLE1_V1_MIN: f64 = 0.2;
/// Safety margin below the cone √(a² − 1) for Example 2.
pub const EXAMPLE2_CONE_MARGIN: f64 = 0.1;

/// Which base surface is built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "example", rename_all = "snake_case")]
pub enum Case {
    /// Metric (1 − e^{−2v₁})dv₁² + e^{−2v₁}dv₂².
    Example1,
    /// Metric (1 − e^{−2v₁}v₂²/a²)dv₁² + 2e^{−2v₁}(v₂/a²)dv₁dv₂ + e^{−2v₁}(1 − 1/a²)dv₂², a > 1.
    Example2 { a: f64 },
}

impl Case {
    pub fn label(&self) -> String {
        match self {
            Case::Example1 => "example 1".to_string(),
            Case::Example2 { a } => format!("example 2 (a = {a})"),
        }
    }

    /// The parameter f₀ = a² − 1 of the second family; `None` for Example 1.
    pub fn f0(&self) -> Option<f64> {
        match self {
            Case::Example1 => None,
            Case::Example2 { a } => Some(a * a - 1.0),
        }
    }

    /// Metric coefficients [g11, g12, g22] and their v₁- and v₂-derivatives.
    pub fn metric_jet(&self, v1: f64, v2: f64) -> [[f64; 3]; 3] {
        let e = (-2.0 * v1).exp();
        match *self {
            Case::Example1 => [[1.0 - e, 0.0, e], [2.0 * e, 0.0, -2.0 * e], [0.0; 3]],
            Case::Example2 { a } => {
                let a2 = a * a;
                [
                    [1.0 - e * v2 * v2 / a2, e * v2 / a2, e * (1.0 - 1.0 / a2)],
                    [2.0 * e * v2 * v2 / a2, -2.0 * e * v2 / a2, -2.0 * e * (1.0 - 1.0 / a2)],
                    [-2.0 * e * v2 / a2, e / a2, 0.0],
                ]
            }
        }
    }

    pub fn metric(&self, v1: f64, v2: f64) -> [f64; 3] {
        self.metric_jet(v1, v2)[0]
    }

    /// D = a² − 1 − v₂²e^{−2v₁} (Example 2), or 1 − e^{−2v₁} (Example 1).
    pub fn cone(&self, v1: f64, v2: f64) -> f64 {
        let e = (-2.0 * v1).exp();
        match *self {
            Case::Example1 => 1.0 - e,
            Case::Example2 { a } => a * a - 1.0 - v2 * v2 * e,
        }
    }

    /// Gauss curvature of the base metric.
    pub fn gauss_curvature(&self, v1: f64, v2: f64) -> f64 {
        let d = self.cone(v1, v2);
        match *self {
            Case::Example1 => -1.0 / (d * d),
            Case::Example2 { a } => -a * a * (a * a - 1.0) / (d * d),
        }
    }

    /// Right-hand side of the Gauss constraint b̄₁₁b̄₂₂ − b̄₁₂² = K det g.
    pub fn gauss_rhs(&self, v1: f64, v2: f64) -> f64 {
        let e = (-2.0 * v1).exp();
        let d = self.cone(v1, v2);
        match *self {
            Case::Example1 => -e / d,
            Case::Example2 { a } => -(a * a - 1.0) * e / d,
        }
    }

    /// v₁-derivative of [`Case::gauss_rhs`].
    pub fn gauss_rhs_d1(&self, v1: f64, v2: f64) -> f64 {
        let e = (-2.0 * v1).exp();
        let d = self.cone(v1, v2);
        match *self {
            Case::Example1 => 2.0 * e / (d * d),
            Case::Example2 { a } => {
                let f = a * a - 1.0;
                2.0 * f * f * e / (d * d)
            }
        }
    }

    /// Lower-order Codazzi terms: ∂₁b̄₁₂ = ∂₂b̄₁₁ + c₁₂ and ∂₁b̄₂₂ = ∂₂b̄₁₂ + c₂₂.
    pub fn codazzi_terms(&self, v1: f64, v2: f64, b11: f64, b12: f64, b22: f64) -> (f64, f64) {
        let e = (-2.0 * v1).exp();
        let d = self.cone(v1, v2);
        match *self {
            Case::Example1 => (b12 / d, -e * b11 / d - b22),
            Case::Example2 { a } => {
                let f = a * a - 1.0;
                ((f * b12 - v2 * b22) / d, -e * (f * b11 - v2 * b12) / d - b22)
            }
        }
    }

    /// Residuals of the reduced Gauss and Codazzi equations given b̄ and its derivatives.
    ///
    /// `d1` and `d2` hold (∂b̄₁₁, ∂b̄₁₂, ∂b̄₂₂) along v₁ and v₂.
    pub fn reduced_residuals(&self, v1: f64, v2: f64, b: [f64; 3], d1: [f64; 3], d2: [f64; 3]) -> [f64; 3] {
        let (c12, c22) = self.codazzi_terms(v1, v2, b[0], b[1], b[2]);
        [
            b[0] * b[2] - b[1] * b[1] - self.gauss_rhs(v1, v2),
            d2[0] - d1[1] + c12,
            d2[1] - d1[2] + c22,
        ]
    }
}

/// Sampling box of the base surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub v1: (f64, f64),
    pub v2: (f64, f64),
    pub n1: usize,
    pub n2: usize,
}

impl Domain {
    pub fn grid(&self) -> Result<Grid, CodazziError> {
        Ok(Grid::grid2(self.v1, self.v2, self.n1, self.n2)?)
    }

    pub fn with_counts(&self, n1: usize, n2: usize) -> Self {
        Self { n1, n2, ..*self }
    }
}

/// Codazzi data on the initial line v₁ = v1_min.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialData {
    /// b̄₁₁ = 0 and b̄₂₂ = c₀ + amplitude·sin(wavenumber·v₂); b̄₁₂ follows from
    /// the Gauss constraint with the chosen sign.
    Canonical {
        c0: f64,
        negative_b12: bool,
        amplitude: f64,
        wavenumber: f64,
    },
    /// Explicit samples of b̄₁₂ and b̄₂₂ at the n2 nodes of the initial line.
    Sampled { b12: Vec<f64>, b22: Vec<f64> },
}

impl Default for InitialData {
    fn default() -> Self {
        InitialData::Canonical { c0: 2.0, negative_b12: true, amplitude: 0.0, wavenumber: 0.0 }
    }
}

/// Parameters selecting and sampling one base surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub case: Case,
    pub domain: Domain,
    pub initial: InitialData,
}

impl SurfaceSpec {
    /// Default sampling for a case, `n × n` nodes.
    pub fn new(case: Case, n: usize) -> Self {
        let v2 = match case {
            Case::Example1 => (0.0, 1.0),
            Case::Example2 { .. } => (0.5, 1.5),
        };
        Self {
            case,
            domain: Domain { v1: (0.5, 1.0), v2, n1: n, n2: n },
            initial: InitialData::default(),
        }
    }

    pub fn example1(n: usize) -> Self {
        Self::new(Case::Example1, n)
    }

    pub fn example2(a: f64, n: usize) -> Self {
        Self::new(Case::Example2 { a }, n)
    }

    pub fn grid(&self) -> Result<Grid, CodazziError> {
        self.domain.grid()
    }

    /// Checks every domain guard; run before any computation.
    pub fn validate(&self) -> Result<(), CodazziError> {
        let d = &self.domain;
        if d.n1 < 5 || d.n2 < 5 {
            return Err(CodazziError::Domain(format!(
                "grid needs at least 5 nodes per axis, got {} x {}",
                d.n1, d.n2
            )));
        }
        if !(d.v1.1 > d.v1.0 && d.v2.1 > d.v2.0) {
            return Err(CodazziError::Domain("domain ranges must be non-empty".into()));
        }
        match self.case {
            Case::Example1 => {
                if d.v1.0 < EXAMPLE1_V1_MIN {
                    return Err(CodazziError::Domain(format!(
                        "example 1 requires v1 > 0 with margin: v1_min = {} < {}",
                        d.v1.0, EXAMPLE1_V1_MIN
                    )));
                }
            }
            Case::Example2 { a } => {
                if !(a > 1.0) || !a.is_finite() {
                    return Err(CodazziError::Domain(format!(
                        "example 2 requires a > 1, got a = {a}"
                    )));
                }
                if d.v2.0 <= 0.0 {
                    return Err(CodazziError::Domain(format!(
                        "example 2 requires v2 > 0 (polar radius), got v2_min = {}",
                        d.v2.0
                    )));
                }
                let worst = d.v2.1.abs().max(d.v2.0.abs()) * (-d.v1.0).exp();
                let bound = (a * a - 1.0).sqrt() - EXAMPLE2_CONE_MARGIN;
                if worst >= bound {
                    return Err(CodazziError::Domain(format!(
                        "example 2 requires v2 e^(-v1) < sqrt(a^2 - 1) - {EXAMPLE2_CONE_MARGIN}: \
                         max {worst:.4} >= {bound:.4}"
                    )));
                }
            }
        }
        if let InitialData::Sampled { b12, b22 } = &self.initial {
            if b12.len() != d.n2 || b22.len() != d.n2 {
                return Err(CodazziError::Domain(format!(
                    "initial samples must have n2 = {} entries",
                    d.n2
                )));
            }
            if b12.iter().any(|v| v.abs() < 1e-12) {
                return Err(CodazziError::Domain("initial b12 must not vanish".into()));
            }
        }
        Ok(())
    }

    /// Initial-line samples (b̄₁₂, b̄₂₂) at the n2 nodes of v1_min.
    pub fn initial_line(&self) -> Result<(Vec<f64>, Vec<f64>), CodazziError> {
        let grid = self.grid()?;
        let ax = *grid.axis(1);
        let v1 = self.domain.v1.0;
        match &self.initial {
            InitialData::Sampled { b12, b22 } => Ok((b12.clone(), b22.clone())),
            InitialData::Canonical { c0, negative_b12, amplitude, wavenumber } => {
                let sign = if *negative_b12 { -1.0 } else { 1.0 };
                let mut b12 = Vec::with_capacity(ax.n);
                let mut b22 = Vec::with_capacity(ax.n);
                for j in 0..ax.n {
                    let v2 = ax.coord(j);
                    let rhs = self.case.gauss_rhs(v1, v2);
                    b12.push(sign * (-rhs).sqrt());
                    b22.push(c0 + amplitude * (wavenumber * v2).sin());
                }
                Ok((b12, b22))
            }
        }
    }
}

/// Exact metric of the base surface sampled on the domain of its `SurfaceSpec`.
pub fn prescribed_metric(spec: &SurfaceSpec) -> Result<MetricField, CodazziError> {
    spec.validate()?;
    let case = spec.case;
    Ok(MetricField::from_fn(spec.grid()?, 2, |c, out| {
        let [g11, g12, g22] = case.metric(c[0], c[1]);
        out.copy_from_slice(&[g11, g12, g12, g22]);
    })?)
}
