//! Check batteries that run the full pipeline and collect named, toleranced
//! verdicts into a [`VerificationReport`].

mod case_id;
mod example;
mod pipeline;
mod sweep;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codazzi::SurfaceSpec;
use crate::Error;

pub use case_id::{verify_case_identification, verify_case_identification_with};
pub use example::verify_example;
pub use pipeline::{run_pipeline, Pipeline, LIFT_V3};
pub use sweep::{sweep, verify_beltrami, SweepReport, SweepRow};

/// Tolerance ladder shared by all batteries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Identities that hold to rounding.
    pub algebraic: f64,
    /// Pointwise quantities built from one or two finite-difference levels.
    pub pointwise: f64,
    /// Curvatures, which differentiate the sampled data once more.
    pub curvature: f64,
    /// Induced metric of the lift and orthonormal-frame comparisons.
    pub frame: f64,
    /// Relative singular-value threshold of the rank decision.
    pub rank_tau: f64,
    /// Metric recovered after resampling into the Cartesian chart.
    pub chart_metric: f64,
    /// Ambient components that vanish identically.
    pub flat_components: f64,
    /// Drift per unit length of coordinates held fixed by null curves.
    pub drift: f64,
    /// Drift per unit length of the horospherical coordinate u₁.
    pub horosphere_drift: f64,
    /// Distance between the ends of a closed null curve.
    pub closure: f64,
    /// Angle between ξ₃ and the measured kernel.
    pub kernel_angle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            algebraic: 1e-10,
            pointwise: 5e-4,
            curvature: 5e-3,
            frame: 1e-6,
            rank_tau: 1e-6,
            chart_metric: 1e-4,
            flat_components: 1e-8,
            drift: 1e-4,
            horosphere_drift: 1e-5,
            closure: 1e-3,
            kernel_angle: 1e-4,
        }
    }
}

/// Knobs of a verification run beyond the surface itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Nodes along v₃ of the standard lift.
    pub n3: usize,
    pub tolerances: Tolerances,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { n3: 17, tolerances: Tolerances::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Below,
    AtMost,
    AtLeast,
    Above,
}

impl Relation {
    fn holds(self, measured: f64, tol: f64) -> bool {
        match self {
            Relation::Below => measured < tol,
            Relation::AtMost => measured <= tol,
            Relation::AtLeast => measured >= tol,
            Relation::Above => measured > tol,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Relation::Below => "<",
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
            Relation::Above => ">",
        }
    }
}

/// A single named verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub claim: String,
    /// Which statement about the geometry the check reproduces.
    pub anchor: String,
    pub measured: f64,
    pub relation: Relation,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: &str, claim: &str, anchor: &str, measured: f64, relation: Relation, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            claim: claim.into(),
            anchor: anchor.into(),
            measured,
            relation,
            tolerance,
            passed: relation.holds(measured, tolerance),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub title: String,
    pub spec: Option<SurfaceSpec>,
    pub n3: Option<usize>,
    pub tolerances: Tolerances,
    pub version: String,
}

impl RunMetadata {
    pub fn new(title: &str, spec: Option<SurfaceSpec>, n3: Option<usize>, tolerances: Tolerances) -> Self {
        Self {
            title: title.into(),
            spec,
            n3,
            tolerances,
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub metadata: RunMetadata,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn new(metadata: RunMetadata) -> Self {
        Self { metadata, checks: Vec::new(), passed: true }
    }

    pub fn push(&mut self, check: Check) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Appends every check of `other`, prefixing names with `prefix`.
    pub fn absorb(&mut self, prefix: &str, other: VerificationReport) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.push(c);
        }
    }

    /// Fixed-width summary table.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.metadata.title);
        if let Some(spec) = &self.metadata.spec {
            let d = &spec.domain;
            let _ = writeln!(
                s,
                "{}: v1 in [{}, {}], v2 in [{}, {}], {} x {} nodes{}",
                spec.case.label(),
                d.v1.0,
                d.v1.1,
                d.v2.0,
                d.v2.1,
                d.n1,
                d.n2,
                self.metadata.n3.map(|n| format!(" x {n} along v3")).unwrap_or_default()
            );
        }
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(4).max(5);
        let _ = writeln!(s, "{:<6} {:<width$} {:>12} {:>3} {:>10}  claim", "result", "check", "measured", "", "tolerance");
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{:<6} {:<width$} {:>12.4e} {:>3} {:>10.2e}  {}",
                if c.passed { "pass" } else { "FAIL" },
                c.name,
                c.measured,
                c.relation.symbol(),
                c.tolerance,
                c.claim
            );
        }
        let failed = self.failures().count();
        let _ = writeln!(
            s,
            "{} of {} checks passed: {}",
            self.checks.len() - failed,
            self.checks.len(),
            if self.passed { "PASS" } else { "FAIL" }
        );
        s
    }
}

/// An upstream failure, tagged with the pipeline stage that raised it.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("stage `{stage}` failed: {source}")]
pub struct VerifyError {
    pub stage: String,
    pub source: Error,
}

impl VerifyError {
    pub fn is_domain(&self) -> bool {
        self.source.is_domain()
    }
}

pub(crate) fn stage<T, E: Into<Error>>(name: &str, r: Result<T, E>) -> Result<T, VerifyError> {
    r.map_err(|e| VerifyError { stage: name.into(), source: e.into() })
}
