//! CSV fields with JSON headers, and the run manifest that indexes them.
//!
//! A field file has one row per node in row-major order: the node's chart
//! coordinates followed by its components. Numbers use the shortest decimal
//! representation that parses back to the same `f64`, so reloading is exact.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use pseudosphere::codazzi::{CodazziSolution, SurfaceSpec};
use pseudosphere::fieldcalc::{Field, Grid};
use pseudosphere::verify::Tolerances;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const MANIFEST: &str = "manifest.json";
const COORDS: [&str; 3] = ["v1", "v2", "v3"];

/// Header of one serialized field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub file: String,
    pub grid: Grid,
    pub component_count: usize,
    pub units: String,
    /// Column names, coordinates first.
    pub columns: Vec<String>,
}

/// Index of every artifact written into one output directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub spec: Option<SurfaceSpec>,
    pub n3: Option<usize>,
    pub tolerances: Tolerances,
    /// Commands that contributed, in order.
    pub commands: Vec<String>,
    pub fields: BTreeMap<String, FieldHeader>,
    pub meshes: Vec<String>,
    pub reports: Vec<String>,
    /// Scalar diagnostics keyed by name.
    pub summary: BTreeMap<String, f64>,
}

impl Manifest {
    pub fn new(spec: Option<SurfaceSpec>, n3: Option<usize>, tolerances: Tolerances) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").into(),
            spec,
            n3,
            tolerances,
            commands: Vec::new(),
            fields: BTreeMap::new(),
            meshes: Vec::new(),
            reports: Vec::new(),
            summary: BTreeMap::new(),
        }
    }

    /// The manifest already in `dir` if it describes the same run, else a fresh one.
    pub fn open(dir: &Path, spec: Option<SurfaceSpec>, n3: Option<usize>, tolerances: Tolerances) -> Self {
        match load_manifest(dir) {
            Ok(m) if m.spec == spec && m.n3 == n3 && m.tolerances == tolerances => m,
            _ => Self::new(spec, n3, tolerances),
        }
    }

    pub fn save(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let path = dir.join(MANIFEST);
        write_text(&path, &serde_json::to_string_pretty(self)?)?;
        Ok(path)
    }

    pub fn field(&self, key: &str) -> Result<&FieldHeader, CliError> {
        self.fields
            .get(key)
            .ok_or_else(|| CliError::Format { path: PathBuf::from(MANIFEST), reason: format!("no field `{key}`") })
    }

    pub fn note(&mut self, command: &str) {
        if !self.commands.iter().any(|c| c == command) {
            self.commands.push(command.into());
        }
    }

    pub fn add_unique(list: &mut Vec<String>, item: &str) {
        if !list.iter().any(|c| c == item) {
            list.push(item.into());
        }
    }
}

pub fn load_manifest(dir: &Path) -> Result<Manifest, CliError> {
    let path = dir.join(MANIFEST);
    let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// Writes `field` to `dir/{stem}.csv` and returns its header.
pub fn write_field(dir: &Path, stem: &str, field: &Field, names: &[&str], units: &str) -> Result<FieldHeader, CliError> {
    let grid = field.grid();
    let dim = grid.dim();
    if names.len() != field.ncomp() {
        return Err(CliError::Format {
            path: PathBuf::from(stem),
            reason: format!("{} column names for {} components", names.len(), field.ncomp()),
        });
    }
    let file = format!("{stem}.csv");
    let path = dir.join(&file);
    let mut columns: Vec<String> = COORDS[..dim].iter().map(|s| s.to_string()).collect();
    columns.extend(names.iter().map(|s| s.to_string()));
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(&columns)?;
    let mut row = Vec::with_capacity(columns.len());
    for (p, vals) in field.nodes().enumerate() {
        row.clear();
        row.extend(grid.coords(p)[..dim].iter().map(|c| c.to_string()));
        row.extend(vals.iter().map(|v| v.to_string()));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;
    Ok(FieldHeader { file, grid: grid.clone(), component_count: field.ncomp(), units: units.into(), columns })
}

/// Reads a field written by [`write_field`], checking its coordinates
/// against the header grid.
pub fn read_field(dir: &Path, header: &FieldHeader) -> Result<Field, CliError> {
    let path = dir.join(&header.file);
    let bad = |reason: String| CliError::Format { path: path.clone(), reason };
    let grid = &header.grid;
    let dim = grid.dim();
    let width = dim + header.component_count;
    if header.columns.len() != width {
        return Err(bad(format!("header lists {} columns, expected {width}", header.columns.len())));
    }
    let mut r = csv::Reader::from_path(&path)?;
    let mut data = Vec::with_capacity(grid.len() * header.component_count);
    let mut count = 0;
    for (p, rec) in r.records().enumerate() {
        let rec = rec?;
        if rec.len() != width {
            return Err(bad(format!("row {p} has {} entries, expected {width}", rec.len())));
        }
        if p >= grid.len() {
            return Err(bad(format!("more than {} rows", grid.len())));
        }
        let vals = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(|e| bad(format!("row {p}: `{s}`: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let c = grid.coords(p);
        if vals[..dim] != c[..dim] {
            return Err(bad(format!("row {p} coordinates {:?} do not match the grid {:?}", &vals[..dim], &c[..dim])));
        }
        data.extend_from_slice(&vals[dim..]);
        count += 1;
    }
    if count != grid.len() {
        return Err(bad(format!("{count} rows for a grid of {} nodes", grid.len())));
    }
    Field::new(grid.clone(), header.component_count, data).map_err(|e| bad(e.to_string()))
}

/// Loads the `key` field of the manifest in `dir`.
pub fn load_field(dir: &Path, key: &str) -> Result<Field, CliError> {
    let m = load_manifest(dir)?;
    read_field(dir, m.field(key)?)
}

/// Reloads the Codazzi data written by `build`.
pub fn load_codazzi(dir: &Path) -> Result<CodazziSolution, CliError> {
    let m = load_manifest(dir)?;
    let f = read_field(dir, m.field("codazzi")?)?;
    let substeps = m.summary.get("substeps").copied().unwrap_or(1.0) as usize;
    Ok(CodazziSolution {
        b11: f.component(0),
        b12: f.component(1),
        b22: f.component(2),
        gauss_residual: f.component(3),
        substeps,
    })
}
