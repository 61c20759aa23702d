//! One line per acceptance criterion, each evaluated at its stated tolerance
//! on the default 128 × 128 × 17 grids.

use std::process::ExitCode;
use std::thread;

use pseudosphere::codazzi::SurfaceSpec;
use pseudosphere::verify::{
    sweep, verify_beltrami, verify_case_identification, verify_example, SweepReport, VerificationReport,
    VerifyOptions,
};

const N: usize = 128;

struct Reports {
    ex1: VerificationReport,
    ex2: VerificationReport,
    id1: VerificationReport,
    id2: VerificationReport,
    sweep: SweepReport,
    beltrami: VerificationReport,
}

fn compute() -> Reports {
    let opts = VerifyOptions::default();
    thread::scope(|s| {
        let ex1 = s.spawn(|| verify_example(&SurfaceSpec::example1(N), &opts).expect("example 1 battery"));
        let ex2 = s.spawn(|| verify_example(&SurfaceSpec::example2(2.0, N), &opts).expect("example 2 battery"));
        let id1 = s.spawn(|| verify_case_identification(&SurfaceSpec::example1(N), &opts).expect("case 1 identification"));
        let id2 =
            s.spawn(|| verify_case_identification(&SurfaceSpec::example2(2.0, N), &opts).expect("case 2 identification"));
        let sw = s.spawn(|| sweep(&[1.5, 2.0, 4.0, 8.0], N, &opts).expect("sweep"));
        let bel = s.spawn(|| verify_beltrami(N, &opts.tolerances).expect("beltrami control"));
        Reports {
            ex1: ex1.join().unwrap(),
            ex2: ex2.join().unwrap(),
            id1: id1.join().unwrap(),
            id2: id2.join().unwrap(),
            sweep: sw.join().unwrap(),
            beltrami: bel.join().unwrap(),
        }
    })
}

#[derive(Clone, Copy)]
enum Rel {
    Lt,
    Le,
    Ge,
    Gt,
    Eq,
}

struct Part {
    label: String,
    measured: f64,
    rel: Rel,
    bound: f64,
}

impl Part {
    fn passed(&self) -> bool {
        match self.rel {
            Rel::Lt => self.measured < self.bound,
            Rel::Le => self.measured <= self.bound,
            Rel::Ge => self.measured >= self.bound,
            Rel::Gt => self.measured > self.bound,
            Rel::Eq => self.measured == self.bound,
        }
    }

    fn describe(&self) -> String {
        let op = match self.rel {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Ge => ">=",
            Rel::Gt => ">",
            Rel::Eq => "==",
        };
        format!("{} = {:.3e} {op} {:.1e}", self.label, self.measured, self.bound)
    }
}

struct Criterion {
    parts: Vec<Part>,
}

impl Criterion {
    fn new() -> Self {
        Self { parts: Vec::new() }
    }

    fn value(mut self, label: &str, measured: f64, rel: Rel, bound: f64) -> Self {
        self.parts.push(Part { label: label.into(), measured, rel, bound });
        self
    }

    /// Reads the measured value of a named check; a missing check fails.
    fn check(self, tag: &str, rep: &VerificationReport, name: &str, rel: Rel, bound: f64) -> Self {
        let measured = rep.check(name).map_or(f64::NAN, |c| c.measured);
        self.value(&format!("{tag}:{name}"), measured, rel, bound)
    }

    fn both(self, r: &Reports, name: &str, rel: Rel, bound: f64) -> Self {
        self.check("ex1", &r.ex1, name, rel, bound).check("ex2", &r.ex2, name, rel, bound)
    }

    fn passed(&self) -> bool {
        self.parts.iter().all(Part::passed)
    }
}

fn criteria(r: &Reports) -> Vec<(&'static str, Criterion)> {
    let rows = &r.sweep.rows;
    let mean_gap = rows.windows(2).map(|w| w[1].mean - w[0].mean).fold(f64::INFINITY, f64::min);
    let closest = rows.iter().map(|row| (row.mean + 1.0).abs()).collect::<Vec<_>>();
    let toward_minus_one = closest.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
    let a2 = rows.iter().find(|row| row.a == 2.0).expect("a = 2 in sweep");
    let a2_spread = (a2.min + 4.0 / 3.0).abs().max((a2.max + 4.0 / 3.0).abs());

    vec![
        (
            "pseudo-sphericity of the lift",
            Criterion::new()
                .both(r, "lift.sectional_coordinate_planes", Rel::Lt, 5e-3)
                .both(r, "lift.sectional_generic_planes", Rel::Lt, 5e-3),
        ),
        (
            "rank-2 degeneracy of the Bianchi Jacobian",
            Criterion::new().both(r, "bianchi.rank_sigma3", Rel::Ge, 0.99).both(r, "bianchi.rank_sigma2", Rel::Ge, 0.99),
        ),
        (
            "image lies in a three-dimensional subspace",
            Criterion::new().both(r, "bianchi.components_4_5", Rel::Lt, 1e-8).both(r, "bianchi.affine_span", Rel::Le, 3.0),
        ),
        (
            "curvature of the Bianchi image",
            Criterion::new()
                .check("ex1", &r.ex1, "bianchi.image_curvature", Rel::Lt, 5e-3)
                .check("ex2", &r.ex2, "bianchi.image_curvature", Rel::Lt, 5e-3)
                .value("sweep:a=2 pointwise |K + 4/3|", a2_spread, Rel::Lt, 5e-3)
                .value("sweep:smallest increase of K", mean_gap, Rel::Gt, 0.0)
                .value("sweep:smallest approach to -1", toward_minus_one, Rel::Gt, 0.0)
                .value("sweep:largest K", rows.iter().map(|row| row.mean).fold(f64::MIN, f64::max), Rel::Lt, -1.0),
        ),
        (
            "holonomic degeneracy",
            Criterion::new()
                .both(r, "holonomicity.residual", Rel::Lt, 5e-4)
                .both(r, "holonomicity.negative_control", Rel::Ge, 5e-4),
        ),
        (
            "null curves",
            Criterion::new()
                .check("ex1", &r.ex1, "null_curves.u1_drift", Rel::Lt, 1e-4)
                .check("ex1", &r.ex1, "null_curves.u2_drift", Rel::Lt, 1e-4)
                .check("ex2", &r.ex2, "null_curves.v2_drift", Rel::Lt, 1e-4)
                .check("ex2", &r.ex2, "null_curves.closure", Rel::Lt, 1e-3),
        ),
        (
            "closed-form and canonical forms",
            Criterion::new()
                .both(r, "forms.b1_closed_form", Rel::Lt, 5e-4)
                .both(r, "forms.b2_closed_form", Rel::Lt, 5e-4)
                .both(r, "forms.torsion_closed_form", Rel::Lt, 5e-4)
                .both(r, "forms.torsion_v3", Rel::Lt, 5e-4)
                .check("id1", &r.id1, "case_id.b1", Rel::Lt, 5e-4)
                .check("id1", &r.id1, "case_id.b2", Rel::Lt, 5e-4)
                .check("id1", &r.id1, "case_id.torsion", Rel::Lt, 5e-4)
                .check("id2", &r.id2, "case_id.b1", Rel::Lt, 5e-4)
                .check("id2", &r.id2, "case_id.b2", Rel::Lt, 5e-4)
                .check("id2", &r.id2, "case_id.torsion", Rel::Lt, 5e-4),
        ),
        (
            "structure equations and reduced system",
            Criterion::new()
                .both(r, "lift.gauss_equation", Rel::Lt, 5e-4)
                .both(r, "lift.codazzi_equation", Rel::Lt, 5e-4)
                .both(r, "lift.ricci_equation", Rel::Lt, 5e-4)
                .both(r, "codazzi.reduced_system", Rel::Lt, 5e-4)
                .both(r, "codazzi.convergence_order", Rel::Ge, 3.5),
        ),
        (
            "base-metric fidelity",
            Criterion::new().both(r, "base.metric", Rel::Lt, 5e-4).both(r, "base.gauss_curvature", Rel::Lt, 5e-3),
        ),
        (
            "Beltrami control collapses to a line",
            Criterion::new()
                .check("beltrami", &r.beltrami, "beltrami.rank_one", Rel::Eq, 1.0)
                .check("beltrami", &r.beltrami, "beltrami.affine_span", Rel::Eq, 1.0),
        ),
    ]
}

fn main() -> ExitCode {
    let verbose = std::env::args().any(|a| a == "--nocapture" || a == "-v");
    let reports = compute();
    let mut failed = 0;
    for (i, (title, c)) in criteria(&reports).iter().enumerate() {
        let ok = c.passed();
        failed += usize::from(!ok);
        println!("criterion {:>2} {}: {}", i + 1, if ok { "PASS" } else { "FAIL" }, title);
        for p in &c.parts {
            if verbose || !p.passed() {
                println!("    {} {}", if p.passed() { "ok  " } else { "FAIL" }, p.describe());
            }
        }
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
