use nalgebra::DMatrix;

use crate::fieldcalc::{Field, Grid};

use super::metric::dot;
use super::{GeometryError, Jet};

/// Seed residuals below this norm are treated as lying in the tangent space.
const SEED_FLOOR: f64 = 1e-6;

/// Orthonormal normal vectors n₁..n_k of an immersion at every node.
#[derive(Debug, Clone)]
pub struct NormalFrameField {
    grid: Grid,
    ambient: usize,
    codim: usize,
    data: Vec<f64>,
}

impl NormalFrameField {
    pub fn new(grid: Grid, ambient: usize, codim: usize, data: Vec<f64>) -> Result<Self, GeometryError> {
        if data.len() != grid.len() * ambient * codim {
            return Err(GeometryError::Shape("frame storage does not match grid".into()));
        }
        Ok(Self { grid, ambient, codim, data })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    /// Normal vector `s` at a node.
    pub fn normal(&self, node: usize, s: usize) -> &[f64] {
        let start = (node * self.codim + s) * self.ambient;
        &self.data[start..start + self.ambient]
    }

    pub fn at(&self, node: usize) -> &[f64] {
        let w = self.codim * self.ambient;
        &self.data[node * w..(node + 1) * w]
    }

    /// All normals as one field with `codim · ambient` components.
    pub fn as_field(&self) -> Field {
        Field::new(self.grid.clone(), self.codim * self.ambient, self.data.clone())
            .expect("finite frame")
    }

    /// Single normal as an immersion-shaped field.
    pub fn normal_field(&self, s: usize) -> Field {
        let a = self.ambient;
        let data = (0..self.grid.len())
            .flat_map(|p| self.normal(p, s).to_vec())
            .collect::<Vec<_>>();
        Field::new(self.grid.clone(), a, data).expect("finite frame")
    }
}

/// Node that precedes `node` in the raster sweep used for sign continuity.
///
/// The sweep walks the last axis first, then steps along the middle axis at
/// index 0 of the last, and along the first axis at the origin of the others.
pub fn raster_parent(grid: &Grid, node: usize) -> Option<usize> {
    let idx = grid.multi_index(node);
    let d = grid.dim();
    for k in (0..d).rev() {
        if idx[k] > 0 {
            let mut q = idx;
            q[k] -= 1;
            return Some(grid.index(&q[..d]));
        }
    }
    None
}

/// Orthonormal basis of the tangent space spanned by the Jacobian columns.
pub(crate) fn tangent_basis(jet: &Jet, node: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for i in 0..jet.dim() {
        let mut v = jet.tangent(node, i).to_vec();
        for _ in 0..2 {
            for e in &basis {
                let c = dot(&v, e);
                v.iter_mut().zip(e).for_each(|(a, b)| *a -= c * b);
            }
        }
        let n = dot(&v, &v).sqrt();
        v.iter_mut().for_each(|a| *a /= n);
        basis.push(v);
    }
    basis
}

fn residual(seed: &[f64], against: &[Vec<f64>]) -> Vec<f64> {
    let mut v = seed.to_vec();
    for _ in 0..2 {
        for e in against {
            let c = dot(&v, e);
            v.iter_mut().zip(e).for_each(|(a, b)| *a -= c * b);
        }
    }
    v
}

/// Normal frame by Gram–Schmidt of the standard ambient axes.
pub fn normal_frame(jet: &Jet) -> Result<NormalFrameField, GeometryError> {
    let a = jet.ambient();
    let seeds: Vec<Vec<f64>> = (0..a)
        .map(|k| (0..a).map(|i| if i == k { 1.0 } else { 0.0 }).collect())
        .collect();
    normal_frame_with_seed(jet, &seeds)
}

/// Ordered index subsets of size `k` drawn from `0..n`.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Normal frame by Gram–Schmidt of a seed basis against the tangent columns.
///
/// One subset of `codim` seeds is used at every node so the frame varies
/// smoothly: the subset whose normal projections have the largest worst-case
/// Gram volume over the grid. Signs are made continuous along the raster
/// sweep of [`raster_parent`].
pub fn normal_frame_with_seed(jet: &Jet, seeds: &[Vec<f64>]) -> Result<NormalFrameField, GeometryError> {
    let grid = jet.grid().clone();
    let amb = jet.ambient();
    let m = jet.dim();
    if amb <= m {
        return Err(GeometryError::Shape("immersion has no normal space".into()));
    }
    let codim = amb - m;
    if seeds.len() < codim {
        return Err(GeometryError::SeedDegenerate { node: anchor_node(&grid) });
    }

    let combos = combinations(seeds.len(), codim);
    let mut worst = vec![(f64::INFINITY, 0usize); combos.len()];
    for p in 0..grid.len() {
        let tangent = tangent_basis(jet, p);
        let r: Vec<Vec<f64>> = seeds.iter().map(|s| residual(s, &tangent)).collect();
        for (c, combo) in combos.iter().enumerate() {
            let gram = DMatrix::from_fn(codim, codim, |i, j| dot(&r[combo[i]], &r[combo[j]]));
            let vol = gram.determinant();
            if vol < worst[c].0 {
                worst[c] = (vol, p);
            }
        }
    }
    let (best, &(vol, node)) = worst
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
        .expect("at least one seed subset");
    if !(vol > SEED_FLOOR * SEED_FLOOR) {
        return Err(GeometryError::SeedDegenerate { node });
    }
    let chosen = &combos[best];

    let mut data = vec![0.0; grid.len() * codim * amb];
    for p in 0..grid.len() {
        let mut acc = tangent_basis(jet, p);
        for (s, &k) in chosen.iter().enumerate() {
            let r = residual(&seeds[k], &acc);
            let norm = dot(&r, &r).sqrt();
            if norm <= SEED_FLOOR {
                return Err(GeometryError::SeedDegenerate { node: p });
            }
            let n: Vec<f64> = r.iter().map(|v| v / norm).collect();
            data[(p * codim + s) * amb..(p * codim + s + 1) * amb].copy_from_slice(&n);
            acc.push(n);
        }
    }
    let mut frame = NormalFrameField::new(grid, amb, codim, data)?;
    enforce_sign_continuity(&mut frame);
    Ok(frame)
}

/// Flips each normal to agree in sign with the same normal at the raster parent.
pub(crate) fn enforce_sign_continuity(frame: &mut NormalFrameField) {
    let grid = frame.grid.clone();
    let (amb, codim) = (frame.ambient, frame.codim);
    for p in 0..grid.len() {
        if let Some(q) = raster_parent(&grid, p) {
            for s in 0..codim {
                let (ps, qs) = ((p * codim + s) * amb, (q * codim + s) * amb);
                let c: f64 = (0..amb).map(|i| frame.data[ps + i] * frame.data[qs + i]).sum();
                if c < 0.0 {
                    frame.data[ps..ps + amb].iter_mut().for_each(|v| *v = -*v);
                }
            }
        }
    }
}

/// The node at the middle of every axis.
pub fn anchor_node(grid: &Grid) -> usize {
    let mid: Vec<usize> = grid.axes().iter().map(|a| a.n / 2).collect();
    grid.index(&mid)
}
