use crate::fieldcalc::{sample_cubic, Field};
use crate::geometry::MetricField;

use super::BianchiError;

/// An integral curve of a direction field, parametrized by g-arclength.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub points: Vec<Vec<f64>>,
    pub arclength: f64,
    /// Set when the curve reached the grid boundary before the requested length.
    pub exit: Option<BianchiError>,
}

impl Trajectory {
    pub fn start(&self) -> &[f64] {
        &self.points[0]
    }

    pub fn end(&self) -> &[f64] {
        self.points.last().expect("trajectory has a seed")
    }

    /// max |c(s) − c(0)| / L for chart coordinate `axis`.
    pub fn drift(&self, axis: usize) -> f64 {
        if self.arclength <= 0.0 {
            return f64::INFINITY;
        }
        let c0 = self.start()[axis];
        self.points.iter().map(|q| (q[axis] - c0).abs()).fold(0.0, f64::max) / self.arclength
    }
}

fn unit_direction(kernel: &Field, g: &Field, q: &[f64]) -> Result<Vec<f64>, BianchiError> {
    let k = sample_cubic(kernel, q)?;
    let gm = sample_cubic(g, q)?;
    let m = k.len();
    let mut s = 0.0;
    for i in 0..m {
        for j in 0..m {
            s += k[i] * gm[i * m + j] * k[j];
        }
    }
    let s = s.sqrt();
    Ok(k.into_iter().map(|v| v / s).collect())
}

/// Integrates the kernel direction at unit g-speed with classical RK4 steps of
/// arclength `ds`, for total arclength `length` or until the grid is left.
pub fn trace_null_curve(
    kernel: &Field,
    g: &MetricField,
    seed: &[f64],
    length: f64,
    ds: f64,
) -> Result<Trajectory, BianchiError> {
    trace(kernel, &g.as_field(), seed, length, ds)
}

fn trace(kernel: &Field, g: &Field, seed: &[f64], length: f64, ds: f64) -> Result<Trajectory, BianchiError> {
    let mut q = seed.to_vec();
    unit_direction(kernel, g, &q)?;
    let steps = (length / ds).ceil().max(1.0) as usize;
    let h = length / steps as f64;
    let mut points = vec![q.clone()];
    let mut arclength = 0.0;
    for _ in 0..steps {
        let stage = |base: &[f64], k: &[f64], c: f64| -> Vec<f64> {
            base.iter().zip(k).map(|(b, k)| b + c * h * k).collect()
        };
        let step = (|| -> Result<Vec<f64>, BianchiError> {
            let k1 = unit_direction(kernel, g, &q)?;
            let k2 = unit_direction(kernel, g, &stage(&q, &k1, 0.5))?;
            let k3 = unit_direction(kernel, g, &stage(&q, &k2, 0.5))?;
            let k4 = unit_direction(kernel, g, &stage(&q, &k3, 1.0))?;
            Ok((0..q.len())
                .map(|i| q[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
                .collect())
        })();
        match step {
            Ok(next) if kernel.grid().axes().iter().zip(&next).all(|(a, v)| a.contains(*v)) => {
                q = next;
                arclength += h;
                points.push(q.clone());
            }
            Ok(next) => {
                return Ok(Trajectory { points, arclength, exit: Some(BianchiError::LeftDomain { point: next }) });
            }
            Err(_) => {
                return Ok(Trajectory { points, arclength, exit: Some(BianchiError::LeftDomain { point: q }) });
            }
        }
    }
    Ok(Trajectory { points, arclength, exit: None })
}

/// Trajectories from several seeds with their worst coordinate drifts.
#[derive(Debug, Clone)]
pub struct NullCurveSummary {
    pub trajectories: Vec<Trajectory>,
    /// Axes whose drift is summarized, and the worst drift per unit length of each.
    pub axes: Vec<usize>,
    pub drifts: Vec<f64>,
}

impl NullCurveSummary {
    pub fn passes(&self, tol: f64) -> bool {
        self.drifts.iter().all(|&d| d < tol)
    }

    pub fn left_domain(&self) -> usize {
        self.trajectories.iter().filter(|t| t.exit.is_some()).count()
    }
}

/// Traces the kernel from every seed and reports the drift of the chart
/// coordinates `axes`, which must stay constant along null curves.
pub fn null_curve_check(
    kernel: &Field,
    g: &MetricField,
    seeds: &[Vec<f64>],
    length: f64,
    ds: f64,
    axes: &[usize],
) -> Result<NullCurveSummary, BianchiError> {
    let gf = g.as_field();
    let trajectories = seeds
        .iter()
        .map(|s| trace(kernel, &gf, s, length, ds))
        .collect::<Result<Vec<_>, _>>()?;
    let drifts = axes
        .iter()
        .map(|&a| trajectories.iter().map(|t| t.drift(a)).fold(0.0, f64::max))
        .collect();
    Ok(NullCurveSummary { trajectories, axes: axes.to_vec(), drifts })
}
