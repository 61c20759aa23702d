use std::path::{Path, PathBuf};

use pseudosphere::bianchi::{
    beltrami_surface, bianchi_transform, project_slice, AffineFrame, BELTRAMI_U1, BELTRAMI_U2,
};
use pseudosphere::codazzi::build_surface;
use pseudosphere::fieldcalc::{affine_span_dim, Axis, Field, Grid};
use pseudosphere::geometry::{induced_metric, shape_operator};
use pseudosphere::lift::{lift, CanonicalTemplate, LiftedSubmanifold};
use pseudosphere::verify::{
    run_pipeline, sweep, verify_beltrami, verify_case_identification, verify_example, VerificationReport, LIFT_V3,
};
use pseudosphere::INTERIOR_BAND;

use crate::config::RunConfig;
use crate::io::{ensure_dir, write_field, write_text, Manifest};
use crate::mesh::{grid_mesh_obj, polyline_obj, write_attribute, write_obj};
use crate::{lib, CliError};

/// Singular-value ratio σ₂/σ₁ that counts as clearly nonzero.
const SIGMA2_FLOOR: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Build,
    Lift,
    Bianchi,
    Verify,
    Export,
    Sweep,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Build => "build",
            Task::Lift => "lift",
            Task::Bianchi => "bianchi",
            Task::Verify => "verify",
            Task::Export => "export",
            Task::Sweep => "sweep",
        }
    }
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone)]
pub struct Outcome {
    /// False when a verification check failed.
    pub passed: bool,
    pub text: String,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    fn ok(text: String, files: Vec<PathBuf>) -> Self {
        Self { passed: true, text, files }
    }
}

/// Validates `cfg`, then runs `task` and writes its artifacts into `cfg.out`.
pub fn execute(task: Task, cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    ensure_dir(&cfg.out)?;
    match task {
        Task::Build => build(cfg),
        Task::Lift => lift_cmd(cfg),
        Task::Bianchi => bianchi(cfg),
        Task::Verify => verify(cfg),
        Task::Export => export(cfg),
        Task::Sweep => sweep_cmd(cfg),
    }
}

fn manifest(cfg: &RunConfig) -> Result<Manifest, CliError> {
    let spec = if cfg.beltrami { None } else { Some(cfg.spec()?) };
    Ok(Manifest::open(&cfg.out, spec, Some(cfg.n3), cfg.tolerances))
}

fn save(m: &mut Manifest, task: Task, dir: &Path, files: &mut Vec<PathBuf>) -> Result<(), CliError> {
    m.note(task.name());
    files.push(m.save(dir)?);
    Ok(())
}

fn summary_text(title: &str, m: &Manifest, keys: &[&str]) -> String {
    let mut s = format!("{title}\n");
    for k in keys {
        if let Some(v) = m.summary.get(*k) {
            s += &format!("  {k:<28} {v:.6e}\n");
        }
    }
    s
}

fn build(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = cfg.spec()?;
    let dir = &cfg.out;
    let (sol, surf) = lib(build_surface(&spec))?;
    let mut m = manifest(cfg)?;
    let mut files = Vec::new();
    let surface = lib(Field::stack(&[&surf.x, &surf.e1, &surf.e2, &surf.normal]))?;
    let names = ["x1", "x2", "x3", "e1_1", "e1_2", "e1_3", "e2_1", "e2_2", "e2_3", "n_1", "n_2", "n_3"];
    m.fields.insert("surface".into(), write_field(dir, "surface", &surface, &names, "length")?);
    let codazzi = lib(Field::stack(&[&sol.b11, &sol.b12, &sol.b22, &sol.gauss_residual]))?;
    let names = ["b11", "b12", "b22", "gauss_residual"];
    m.fields.insert("codazzi".into(), write_field(dir, "codazzi", &codazzi, &names, "inverse length")?);
    files.push(dir.join("surface.csv"));
    files.push(dir.join("codazzi.csv"));
    for (k, v) in [
        ("metric_residual", surf.metric_residual),
        ("codazzi_residual", surf.codazzi_residual),
        ("path_difference", surf.path_difference),
        ("min_abs_b12", sol.min_abs_b12()),
        ("substeps", sol.substeps as f64),
    ] {
        m.summary.insert(k.into(), v);
    }
    save(&mut m, Task::Build, dir, &mut files)?;
    let text = summary_text(
        &format!("built {}", spec.case.label()),
        &m,
        &["metric_residual", "codazzi_residual", "path_difference", "min_abs_b12"],
    );
    Ok(Outcome::ok(text, files))
}

fn lifted(cfg: &RunConfig) -> Result<LiftedSubmanifold, CliError> {
    let spec = cfg.spec()?;
    let (_, surf) = lib(build_surface(&spec))?;
    lib(lift(&surf, &spec, Axis::new(LIFT_V3.0, LIFT_V3.1, cfg.n3)))
}

fn lift_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let dir = &cfg.out;
    let lf = lifted(cfg)?;
    let g = lib(induced_metric(&lf.x))?;
    let template = CanonicalTemplate::for_case(lf.spec.case);
    let grid = lf.grid();
    let mut dev = 0.0_f64;
    for p in grid.interior(INTERIOR_BAND) {
        let c = grid.coords(p);
        let d = template.metric(c[0], c[1]);
        for i in 0..3 {
            for j in 0..3 {
                let r = if i == j { d[i] } else { 0.0 };
                dev = dev.max((g.get(p, i, j) - r).abs());
            }
        }
    }
    let mut m = manifest(cfg)?;
    let mut files = vec![dir.join("lift.csv")];
    m.fields.insert("lift".into(), write_field(dir, "lift", &lf.x, &["x1", "x2", "x3", "x4", "x5"], "length")?);
    m.summary.insert("lift_metric_deviation".into(), dev);
    save(&mut m, Task::Lift, dir, &mut files)?;
    let text = summary_text(&format!("lifted {} to R^5", lf.spec.case.label()), &m, &["lift_metric_deviation"]);
    Ok(Outcome::ok(text, files))
}

fn bianchi(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let dir = &cfg.out;
    let tau = cfg.tolerances.rank_tau;
    let lf = lifted(cfg)?;
    let br = lib(bianchi_transform(&lf.x, tau))?;
    let grid = lf.grid().clone();
    let data = lib(Field::from_nodes(grid.clone(), 12, |p, out| {
        out[..5].copy_from_slice(br.image.at(p));
        out[5..8].copy_from_slice(br.ranks.sigma(p));
        out[8] = br.ranks.rank(p) as f64;
        out[9..].copy_from_slice(br.kernel.at(p));
    }))?;
    let names = ["y1", "y2", "y3", "y4", "y5", "sigma1", "sigma2", "sigma3", "rank", "k1", "k2", "k3"];
    let mut m = manifest(cfg)?;
    let mut files = vec![dir.join("bianchi.csv"), dir.join("image_slice.csv")];
    m.fields.insert("bianchi".into(), write_field(dir, "bianchi", &data, &names, "length")?);

    let frame = AffineFrame::fit(&br.image);
    let slice = lib(project_slice(&br.image, &frame, cfg.n3 / 2))?;
    let shape = lib(shape_operator(&slice))?;
    let slice_k = lib(Field::stack(&[&slice, &shape.gauss_curvature]))?;
    m.fields.insert(
        "image_slice".into(),
        write_field(dir, "image_slice", &slice_k, &["z1", "z2", "z3", "gauss_curvature"], "length")?,
    );
    let rank2 = br.ranks.interior_fraction(INTERIOR_BAND, |s| s[2] / s[0] < tau && s[1] / s[0] > SIGMA2_FLOOR);
    let span = lib(affine_span_dim(br.image.data(), 5, tau))?;
    let k_interior: Vec<f64> =
        slice.grid().interior(INTERIOR_BAND).map(|p| shape.gauss_curvature.get(p, 0)).collect();
    for (k, v) in [
        ("rank2_fraction", rank2),
        ("components_4_5", br.image.select(&[3, 4]).sup()),
        ("affine_span_dim", span as f64),
        ("image_curvature_min", k_interior.iter().copied().fold(f64::INFINITY, f64::min)),
        ("image_curvature_max", k_interior.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
    ] {
        m.summary.insert(k.into(), v);
    }
    save(&mut m, Task::Bianchi, dir, &mut files)?;
    let text = summary_text(
        &format!("Bianchi image of {}", lf.spec.case.label()),
        &m,
        &["rank2_fraction", "components_4_5", "affine_span_dim", "image_curvature_min", "image_curvature_max"],
    );
    Ok(Outcome::ok(text, files))
}

fn write_report(dir: &Path, report: &VerificationReport, text: &str, files: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let json = dir.join("report.json");
    write_text(&json, &serde_json::to_string_pretty(report)?)?;
    let txt = dir.join("report.txt");
    write_text(&txt, text)?;
    files.push(json);
    files.push(txt);
    Ok(())
}

fn verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if !cfg.beltrami && !cfg.sweep_a.is_empty() {
        return sweep_cmd(cfg);
    }
    let dir = &cfg.out;
    let report = if cfg.beltrami {
        verify_beltrami(cfg.n1, &cfg.tolerances)?
    } else {
        let spec = cfg.spec()?;
        let mut rep = verify_example(&spec, &cfg.options())?;
        rep.absorb("", verify_case_identification(&spec, &cfg.options())?);
        rep
    };
    let text = report.to_text();
    let mut m = manifest(cfg)?;
    let mut files = Vec::new();
    write_report(dir, &report, &text, &mut files)?;
    Manifest::add_unique(&mut m.reports, "report.json");
    save(&mut m, Task::Verify, dir, &mut files)?;
    Ok(Outcome { passed: report.passed, text, files })
}

fn sweep_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let dir = &cfg.out;
    let sr = sweep(&cfg.sweep_values(), cfg.n1, &cfg.options())?;
    let mut files = Vec::new();
    let table = dir.join("sweep.csv");
    let mut w = csv::Writer::from_path(&table)?;
    w.write_record(["a", "expected", "mean", "min", "max"])?;
    for r in &sr.rows {
        w.write_record([r.a, r.expected, r.mean, r.min, r.max].map(|v| v.to_string()))?;
    }
    w.flush().map_err(|e| CliError::io(&table, e))?;
    files.push(table);
    let text = sr.to_text();
    write_report(dir, &sr.report, &text, &mut files)?;
    let mut m = Manifest::open(dir, None, Some(cfg.n3), cfg.tolerances);
    Manifest::add_unique(&mut m.reports, "report.json");
    save(&mut m, Task::Sweep, dir, &mut files)?;
    Ok(Outcome { passed: sr.report.passed, text, files })
}

/// The 2D slice at last-axis index `k` of a field on a three-axis grid.
fn slice(x: &Field, k: usize) -> Result<Field, CliError> {
    let grid = x.grid();
    let g2 = lib(Grid::new(grid.axes()[..2].to_vec()))?;
    let n2 = g2.axis(1).n;
    lib(Field::from_nodes(g2, x.ncomp(), |p, out| {
        out.copy_from_slice(x.at(grid.index(&[p / n2, p % n2, k])));
    }))
}

fn project(x: &Field, frame: &AffineFrame) -> Result<Field, CliError> {
    lib(Field::from_nodes(x.grid().clone(), 3, |p, out| out.copy_from_slice(&frame.project(x.at(p)))))
}

/// Vertices of a collapsed image, ordered along its line and deduplicated.
fn line_vertices(x: &Field) -> Vec<[f64; 3]> {
    let frame = AffineFrame::fit(x);
    let mut pts: Vec<(f64, [f64; 3])> = x.nodes().map(|q| (frame.project(q)[0], [q[0], q[1], q[2]])).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let extent = pts.last().map_or(0.0, |l| l.0) - pts.first().map_or(0.0, |f| f.0);
    let gap = 1e-9 * extent.max(1e-300);
    let mut out: Vec<(f64, [f64; 3])> = Vec::new();
    for p in pts {
        if out.last().is_none_or(|l| p.0 - l.0 > gap) {
            out.push(p);
        }
    }
    out.into_iter().map(|p| p.1).collect()
}

/// Writes `x` (2D grid into ℝ³) as a mesh with a curvature attribute file,
/// or as a polyline when the sampled points span at most a line.
fn export_surface(dir: &Path, stem: &str, title: &str, x: &Field, tau: f64, files: &mut Vec<PathBuf>) -> Result<bool, CliError> {
    let span = lib(affine_span_dim(x.data(), 3, tau))?;
    let obj = dir.join(format!("{stem}.obj"));
    if span <= 1 {
        write_obj(&obj, &polyline_obj(&line_vertices(x), title))?;
        files.push(obj);
        return Ok(false);
    }
    write_obj(&obj, &grid_mesh_obj(x, title)?)?;
    files.push(obj);
    let shape = lib(shape_operator(x))?;
    let attr = dir.join(format!("{stem}_curvature.csv"));
    write_attribute(&attr, "gauss_curvature", &shape.gauss_curvature)?;
    files.push(attr);
    Ok(true)
}

fn export(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let dir = &cfg.out;
    let tau = cfg.tolerances.rank_tau;
    let mut files = Vec::new();
    let mut lines = Vec::new();
    let mut m = manifest(cfg)?;
    let mut record = |m: &mut Manifest, stem: &str, mesh: bool| {
        let kind = if mesh { "mesh" } else { "polyline" };
        lines.push(format!("  {stem}.obj ({kind})"));
        Manifest::add_unique(&mut m.meshes, &format!("{stem}.obj"));
    };
    if cfg.beltrami {
        let x = lib(beltrami_surface(BELTRAMI_U1, BELTRAMI_U2, cfg.n1, cfg.n2))?;
        let mesh = export_surface(dir, "beltrami", "tractrix surface", &x, tau, &mut files)?;
        record(&mut m, "beltrami", mesh);
        let br = lib(bianchi_transform(&x, tau))?;
        let mesh = export_surface(dir, "beltrami_image", "Bianchi image of the tractrix surface", &br.image, tau, &mut files)?;
        record(&mut m, "beltrami_image", mesh);
    } else {
        let spec = cfg.spec()?;
        let pl = run_pipeline(&spec, cfg.n3, tau)?;
        if cfg.export.base {
            let mesh = export_surface(dir, "base", "base surface", &pl.surface.x, tau, &mut files)?;
            record(&mut m, "base", mesh);
        }
        if cfg.export.image {
            let mesh = export_surface(dir, "image", "Bianchi image, middle v3 slice", &pl.image_slice, tau, &mut files)?;
            record(&mut m, "image", mesh);
        }
        if cfg.export.slices {
            let n3 = cfg.n3;
            for k in [0, n3 / 2, n3 - 1] {
                let s = slice(&pl.lifted.x, k)?;
                let frame = AffineFrame::fit(&s);
                let stem = format!("slice_{k}");
                let title = format!("F3 at v3 = {}, projected to its best-fit R3", pl.v3_axis().coord(k));
                let mesh = export_surface(dir, &stem, &title, &project(&s, &frame)?, tau, &mut files)?;
                record(&mut m, &stem, mesh);
            }
        }
    }
    save(&mut m, Task::Export, dir, &mut files)?;
    Ok(Outcome::ok(format!("exported to {}\n{}\n", dir.display(), lines.join("\n")), files))
}
