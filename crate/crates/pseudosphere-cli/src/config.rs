use std::path::{Path, PathBuf};

use pseudosphere::codazzi::{Case, InitialData, SurfaceSpec};
use pseudosphere::fieldcalc::MIN_NODES;
use pseudosphere::verify::{Tolerances, VerifyOptions};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// a-values of the default image-curvature sweep.
pub const DEFAULT_SWEEP: [f64; 4] = [1.5, 2.0, 4.0, 8.0];

/// Which meshes `export` writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExportToggles {
    pub base: bool,
    pub image: bool,
    pub slices: bool,
}

impl Default for ExportToggles {
    fn default() -> Self {
        Self { base: true, image: true, slices: true }
    }
}

/// Everything a command needs, assembled from a JSON file and flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// 1 or 2.
    pub example: u8,
    /// Parameter of Example 2; defaults to 2.
    pub a: Option<f64>,
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    /// Overrides of the default sampling box.
    pub v1: Option<(f64, f64)>,
    pub v2: Option<(f64, f64)>,
    pub initial: InitialData,
    pub tolerances: Tolerances,
    pub out: PathBuf,
    pub export: ExportToggles,
    /// a-values for the image-curvature sweep on the default Example-2
    /// domain with n1 × n1 nodes; empty means no sweep.
    pub sweep_a: Vec<f64>,
    /// Run on the classical tractrix surface instead of an example.
    pub beltrami: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            example: 1,
            a: None,
            n1: 128,
            n2: 128,
            n3: 17,
            v1: None,
            v2: None,
            initial: InitialData::default(),
            tolerances: Tolerances::default(),
            out: PathBuf::from("out"),
            export: ExportToggles::default(),
            sweep_a: Vec::new(),
            beltrami: false,
        }
    }
}

impl RunConfig {
    pub fn from_json_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn case(&self) -> Result<Case, CliError> {
        match (self.example, self.a) {
            (1, None) => Ok(Case::Example1),
            (1, Some(_)) => Err(CliError::Config("--a applies to example 2 only".into())),
            (2, a) => Ok(Case::Example2 { a: a.unwrap_or(2.0) }),
            (e, _) => Err(CliError::Config(format!("unknown example {e}; choose 1 or 2"))),
        }
    }

    /// Surface spec for `case` with this config's sampling.
    pub fn spec_for(&self, case: Case) -> SurfaceSpec {
        let mut spec = SurfaceSpec::new(case, self.n1);
        spec.domain.n2 = self.n2;
        if let Some(v1) = self.v1 {
            spec.domain.v1 = v1;
        }
        if let Some(v2) = self.v2 {
            spec.domain.v2 = v2;
        }
        spec.initial = self.initial.clone();
        spec
    }

    pub fn spec(&self) -> Result<SurfaceSpec, CliError> {
        Ok(self.spec_for(self.case()?))
    }

    pub fn options(&self) -> VerifyOptions {
        VerifyOptions { n3: self.n3, tolerances: self.tolerances }
    }

    /// Sweep values, falling back to [`DEFAULT_SWEEP`].
    pub fn sweep_values(&self) -> Vec<f64> {
        if self.sweep_a.is_empty() {
            DEFAULT_SWEEP.to_vec()
        } else {
            self.sweep_a.clone()
        }
    }

    /// Rejects every domain-guard violation. Runs before any computation.
    pub fn validate(&self) -> Result<(), CliError> {
        let spec = self.spec()?;
        if !self.beltrami {
            spec.validate().map_err(|e| CliError::Domain(e.to_string()))?;
        } else if self.n1 < MIN_NODES || self.n2 < MIN_NODES {
            return Err(CliError::Config(format!("grid needs at least {MIN_NODES} nodes per axis")));
        }
        if self.n3 < MIN_NODES {
            return Err(CliError::Config(format!("n3 = {} is below the minimum of {MIN_NODES}", self.n3)));
        }
        for a in &self.sweep_a {
            SurfaceSpec::example2(*a, self.n1)
                .validate()
                .map_err(|e| CliError::Domain(format!("sweep value a = {a}: {e}")))?;
        }
        let t = &self.tolerances;
        let ladder = [
            ("algebraic", t.algebraic),
            ("pointwise", t.pointwise),
            ("curvature", t.curvature),
            ("frame", t.frame),
            ("chart_metric", t.chart_metric),
            ("flat_components", t.flat_components),
            ("drift", t.drift),
            ("horosphere_drift", t.horosphere_drift),
            ("closure", t.closure),
            ("kernel_angle", t.kernel_angle),
        ];
        if let Some((name, v)) = ladder.iter().find(|(_, v)| !(v.is_finite() && *v > 0.0)) {
            return Err(CliError::Config(format!("tolerance {name} = {v} must be positive")));
        }
        if !(t.rank_tau > 0.0 && t.rank_tau < 1.0) {
            return Err(CliError::Config(format!("rank_tau = {} must lie in (0, 1)", t.rank_tau)));
        }
        Ok(())
    }
}
