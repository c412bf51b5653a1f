use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use super::nelder_mead::nelder_mead;
use super::objective::Objective;
use super::search::{pair_program, OracleValue};
use crate::error::{Error, Result};
use crate::spaces::{Polytope, Space};

pub const DEFAULT_GRID_DENSITY: usize = 200_000;
const REFINE_POINTS: usize = 16;
const REFINE_BUDGET: usize = 500;

/// Exhaustive search over 2x2 operators for a planar polytope space.
///
/// The directions are a grid on the boundary of the cube `[-1, 1]^4` with
/// `m` points per edge, `8 m^3 >= density`, projected to the unit sphere of
/// the Frobenius norm. The ball is first put in isotropic position (the
/// index is invariant under linear isomorphisms), which keeps the Lipschitz
/// constant small. The best grid points are refined by Nelder-Mead and the
/// pair programs.
pub fn index_oracle_2d(space: &Space, density: usize) -> Result<OracleValue> {
    let p = space
        .polytope()
        .filter(|p| p.dim() == 2)
        .ok_or_else(|| Error::unsupported("the grid oracle needs a 2-dimensional polytope space"))?;
    let (iso, _) = isotropic(p)?;
    let objective = Objective::for_polytope(&iso);
    let m = grid_side(density);
    let h = 2.0 / (m - 1) as f64;
    let coord = |k: usize| -1.0 + k as f64 * h;
    // T and -T have the same ratio, so only the faces with a +1 coordinate.
    let per_face = m * m * m;
    let points = 4 * per_face;
    let mut values: Vec<(f64, usize)> = (0..points)
        .into_par_iter()
        .map(|idx| {
            let x = grid_point(idx, m, &coord);
            (objective.ratio(2, &x), idx)
        })
        .collect();
    values.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let grid_min = values[0].0;
    let refined = values
        .par_iter()
        .take(REFINE_POINTS)
        .map(|&(_, idx)| {
            let x0 = grid_point(idx, m, &coord);
            let mut f = |x: &[f64]| objective.ratio(2, x);
            let r = nelder_mead(&mut f, &x0, h, REFINE_BUDGET);
            let mut best = r.value;
            let mat = Objective::real_matrix(2, &r.x);
            for (v, g) in attaining_pairs(&iso, &mat) {
                if let Some((_, cand)) = pair_program(&iso, v, g) {
                    best = best.min(objective.ratio(2, cand.transpose().as_slice()));
                }
            }
            best
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let kappa = distortion(&iso);
    let covering = h * 3f64.sqrt() / 2.0;
    Ok(OracleValue {
        value: grid_min.min(refined),
        grid_bound: 2.0 * 2f64.sqrt() * kappa * kappa * covering,
        grid_points: points,
    })
}

/// Smallest `m` with `8 m^3 >= density`.
pub fn grid_side(density: usize) -> usize {
    let mut m = 2;
    while 8 * m * m * m < density {
        m += 1;
    }
    m
}

fn grid_point(idx: usize, m: usize, coord: &impl Fn(usize) -> f64) -> [f64; 4] {
    let per_face = m * m * m;
    let face = idx / per_face;
    let mut r = idx % per_face;
    let mut x = [0.0; 4];
    x[face] = 1.0;
    for (k, slot) in x.iter_mut().enumerate() {
        if k != face {
            *slot = coord(r % m);
            r /= m;
        }
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.map(|v| v / norm)
}

fn attaining_pairs(p: &Polytope, m: &DMatrix<f64>) -> Vec<(usize, usize)> {
    let mut scored: Vec<(f64, usize, usize)> = Vec::new();
    for (i, v) in p.vertices().iter().enumerate() {
        let tv = m * v;
        for (j, f) in p.facets().iter().enumerate() {
            scored.push((f.dot(&tv), i, j));
        }
    }
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let top = scored[0].0;
    scored
        .into_iter()
        .take_while(|s| s.0 >= top * (1.0 - 1e-6))
        .take(4)
        .map(|s| (s.1, s.2))
        .collect()
}

/// The polytope mapped by `A = M^{-1/2}`, `M` the vertex second moment;
/// returns the image and `A`.
pub(crate) fn isotropic(p: &Polytope) -> Result<(Polytope, DMatrix<f64>)> {
    let n = p.dim();
    let mut moment = DMatrix::zeros(n, n);
    for v in p.vertices() {
        moment += v * v.transpose();
    }
    moment /= p.vertices().len() as f64;
    let eig = SymmetricEigen::new(moment);
    if eig.eigenvalues.min() <= 1e-12 * eig.eigenvalues.max() {
        return Err(Error::input("degenerate polytope"));
    }
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
    let a = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose();
    let a_inv_t = a
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Internal("singular isotropic map".into()))?
        .transpose();
    let vertices: Vec<DVector<f64>> = p.vertices().iter().map(|v| &a * v).collect();
    let facets: Vec<DVector<f64>> = p.facets().iter().map(|f| &a_inv_t * f).collect();
    Ok((Polytope::from_parts(vertices, facets)?, a))
}

/// Circumradius over inradius of the ball.
fn distortion(p: &Polytope) -> f64 {
    let outer = p.vertices().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let inner = p.facets().iter().map(|f| 1.0 / f.norm()).fold(f64::INFINITY, f64::min);
    outer / inner
}
