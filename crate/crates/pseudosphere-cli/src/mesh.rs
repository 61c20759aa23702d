//! Wavefront OBJ export of sampled surfaces.

use std::fmt::Write as _;
use std::path::Path;

use pseudosphere::fieldcalc::Field;
use pseudosphere::INTERIOR_BAND;

use crate::io::write_text;
use crate::CliError;

/// Triangulates a 2D-grid field with three components: every grid cell
/// becomes two triangles with a common orientation. Vertex `p` of the OBJ
/// is grid node `p` (1-based in the file).
pub fn grid_mesh_obj(x: &Field, title: &str) -> Result<String, CliError> {
    check_surface(x)?;
    let (n1, n2) = (x.grid().axis(0).n, x.grid().axis(1).n);
    let mut s = header(title, x);
    for i in 0..n1 - 1 {
        for j in 0..n2 - 1 {
            let a = i * n2 + j + 1;
            let b = a + n2;
            let _ = writeln!(s, "f {a} {b} {}", b + 1);
            let _ = writeln!(s, "f {a} {} {}", b + 1, a + 1);
        }
    }
    Ok(s)
}

/// A polyline through the given vertex order.
pub fn polyline_obj(points: &[[f64; 3]], title: &str) -> String {
    let mut s = format!("# {title}\n# polyline with {} vertices\n", points.len());
    for p in points {
        vertex(&mut s, p);
    }
    s += "l";
    for k in 1..=points.len() {
        let _ = write!(s, " {k}");
    }
    s.push('\n');
    s
}

/// Per-vertex scalar attribute: `vertex,interior,<name>`, vertices 1-based.
pub fn write_attribute(path: &Path, name: &str, values: &Field) -> Result<(), CliError> {
    let grid = values.grid();
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["vertex", "interior", name])?;
    for (p, v) in values.nodes().enumerate() {
        let interior = if grid.is_interior(p, INTERIOR_BAND) { "1" } else { "0" };
        w.write_record([(p + 1).to_string(), interior.to_string(), v[0].to_string()])?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_obj(path: &Path, text: &str) -> Result<(), CliError> {
    write_text(path, text)
}

fn check_surface(x: &Field) -> Result<(), CliError> {
    if x.grid().dim() != 2 || x.ncomp() != 3 {
        return Err(CliError::Format {
            path: "mesh".into(),
            reason: format!("need a 2D grid into R^3, got {}D with {} components", x.grid().dim(), x.ncomp()),
        });
    }
    Ok(())
}

fn header(title: &str, x: &Field) -> String {
    let (n1, n2) = (x.grid().axis(0).n, x.grid().axis(1).n);
    let mut s = format!("# {title}\n# {n1} x {n2} grid, vertex index = row-major node + 1\n");
    for p in x.nodes() {
        vertex(&mut s, p);
    }
    s
}

/// Nine significant digits.
fn vertex(s: &mut String, p: &[f64]) {
    let _ = writeln!(s, "v {:.8e} {:.8e} {:.8e}", p[0], p[1], p[2]);
}
