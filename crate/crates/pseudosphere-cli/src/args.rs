use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "pseudosphere", version, about = "Pseudo-spherical submanifolds of R^5 and their Bianchi transformations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the Codazzi system and reconstruct the base surface.
    Build(RunArgs),
    /// Build and lift the base surface to F^3 in R^5.
    Lift(RunArgs),
    /// Apply the Bianchi transformation to the lift.
    Bianchi(RunArgs),
    /// Run the check battery and write report.json / report.txt.
    Verify(RunArgs),
    /// Write OBJ meshes of the base surface, the Bianchi image and slices of F^3.
    Export(RunArgs),
    /// Image curvature of Example 2 over several values of a.
    Sweep(RunArgs),
}

impl Command {
    pub fn args(&self) -> &RunArgs {
        match self {
            Command::Build(a)
            | Command::Lift(a)
            | Command::Bianchi(a)
            | Command::Verify(a)
            | Command::Export(a)
            | Command::Sweep(a) => a,
        }
    }
}

/// Flags shared by every command. Flags override values from `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// JSON file with a full or partial run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Example surface, 1 or 2.
    #[arg(long)]
    pub example: Option<u8>,
    /// Parameter a > 1 of Example 2.
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub n1: Option<usize>,
    #[arg(long)]
    pub n2: Option<usize>,
    /// Nodes along v3 of the lift.
    #[arg(long)]
    pub n3: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Tolerance of curvature checks.
    #[arg(long)]
    pub tol_curvature: Option<f64>,
    /// Tolerance of pointwise checks.
    #[arg(long)]
    pub tol_pointwise: Option<f64>,
    /// Comma-separated a-values for the image-curvature sweep.
    #[arg(long, value_delimiter = ',')]
    pub sweep_a: Vec<f64>,
    /// Use the classical tractrix surface.
    #[arg(long)]
    pub beltrami: bool,
    #[arg(long)]
    pub no_base: bool,
    #[arg(long)]
    pub no_image: bool,
    #[arg(long)]
    pub no_slices: bool,
}

impl RunArgs {
    /// Config file (or defaults) overlaid with the given flags.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_json_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(e) = self.example {
            cfg.example = e;
        }
        if self.a.is_some() {
            cfg.a = self.a;
        }
        if let Some(n) = self.n1 {
            cfg.n1 = n;
        }
        if let Some(n) = self.n2 {
            cfg.n2 = n;
        }
        if let Some(n) = self.n3 {
            cfg.n3 = n;
        }
        if let Some(out) = &self.out {
            cfg.out = out.clone();
        }
        if let Some(t) = self.tol_curvature {
            cfg.tolerances.curvature = t;
        }
        if let Some(t) = self.tol_pointwise {
            cfg.tolerances.pointwise = t;
        }
        if !self.sweep_a.is_empty() {
            cfg.sweep_a = self.sweep_a.clone();
        }
        cfg.beltrami |= self.beltrami;
        cfg.export.base &= !self.no_base;
        cfg.export.image &= !self.no_image;
        cfg.export.slices &= !self.no_slices;
        Ok(cfg)
    }
}
