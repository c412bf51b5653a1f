use std::f64::consts::PI;

use nalgebra::DVector;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::require_polytope;
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Sense};
use crate::seed;
use crate::spaces::{Polytope, Space};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LushConfig {
    pub x_grid: usize,
    pub y_grid: usize,
    pub epsilons: Vec<f64>,
    /// Candidate slice functionals; the facet functionals when `None`.
    pub candidates: Option<Vec<Vec<f64>>>,
    /// Seeds the sphere points in dimension above 2.
    pub seed: u64,
}

impl Default for LushConfig {
    fn default() -> Self {
        Self {
            x_grid: 64,
            y_grid: 64,
            epsilons: vec![0.5, 0.25, 0.1],
            candidates: None,
            seed: 0,
        }
    }
}

/// A triple `(x, y, eps)` for which no candidate `y*` with `y*(y) > 1 - eps`
/// brings `x` within `eps` of the absolutely convex hull of its slice.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LushFailure {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub epsilon: f64,
    /// Smallest distance over the admissible candidates.
    pub best_distance: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LushReport {
    pub triples: usize,
    pub failures: Vec<LushFailure>,
    pub pass_rate: f64,
    pub candidates: usize,
    pub note: String,
}

/// Sampled test of the lushness condition
/// `dist(x, aco S(B, y*, eps)) < eps` on grids of unit vectors `x` and `y`.
///
/// Distances are exact: the closed slice `{z in B : y*(z) >= 1 - eps}` is
/// kept in facet form, and the hull of `S ∪ -S` is written as
/// `{a - b : a in t S, b in (1 - t) S}`.
pub fn lushness_test(space: &Space, config: &LushConfig) -> Result<LushReport> {
    let p = require_polytope(space)?;
    if config.epsilons.iter().any(|&e| !(e > 0.0 && e < 1.0)) {
        return Err(Error::input("epsilons must lie in (0, 1)"));
    }
    let candidates: Vec<DVector<f64>> = match &config.candidates {
        Some(c) => c
            .iter()
            .map(|f| {
                Error::check_dim(p.dim(), f.len())?;
                let n = p.dual_norm(f);
                if n <= 0.0 {
                    return Err(Error::input("zero candidate functional"));
                }
                Ok(DVector::from_column_slice(f) / n)
            })
            .collect::<Result<_>>()?,
        None => p.facets().to_vec(),
    };
    let xs = sphere_grid(p, config.x_grid, seed::derive(config.seed, "lush-x"));
    let ys = sphere_grid(p, config.y_grid, seed::derive(config.seed, "lush-y"));
    let eps = &config.epsilons;
    // dist[x][candidate][eps] does not depend on y.
    let dist: Vec<Vec<Vec<f64>>> = xs
        .par_iter()
        .map(|x| {
            candidates
                .iter()
                .map(|f| eps.iter().map(|&e| slice_hull_distance(p, f, e, x)).collect())
                .collect()
        })
        .collect();
    let mut failures = Vec::new();
    let mut triples = 0;
    for (k, &e) in eps.iter().enumerate() {
        for y in &ys {
            let admissible: Vec<usize> = (0..candidates.len())
                .filter(|&c| candidates[c].dot(y) > 1.0 - e)
                .collect();
            for (xi, x) in xs.iter().enumerate() {
                triples += 1;
                let best = admissible.iter().map(|&c| dist[xi][c][k]).fold(f64::INFINITY, f64::min);
                if !(best < e) {
                    failures.push(LushFailure {
                        x: x.as_slice().to_vec(),
                        y: y.as_slice().to_vec(),
                        epsilon: e,
                        best_distance: best,
                    });
                }
            }
        }
    }
    let pass_rate = if triples == 0 {
        1.0
    } else {
        1.0 - failures.len() as f64 / triples as f64
    };
    let note = if config.candidates.is_none() {
        "candidates restricted to facet functionals"
    } else {
        "candidates supplied by caller"
    };
    Ok(LushReport {
        triples,
        failures,
        pass_rate,
        candidates: candidates.len(),
        note: note.into(),
    })
}

/// Equally spaced angles in the plane, seeded directions otherwise, scaled
/// to the unit sphere of the space.
fn sphere_grid(p: &Polytope, count: usize, seed: u64) -> Vec<DVector<f64>> {
    let dirs: Vec<DVector<f64>> = if p.dim() == 2 {
        (0..count)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / count as f64;
                DVector::from_vec(vec![t.cos(), t.sin()])
            })
            .collect()
    } else {
        let mut rng = seed::rng(seed);
        (0..count)
            .map(|_| DVector::from_fn(p.dim(), |_, _| rng.random_range(-1.0..1.0)))
            .collect()
    };
    dirs.into_iter()
        .filter_map(|d| {
            let n = p.norm(d.as_slice());
            (n > 1e-12).then(|| d / n)
        })
        .collect()
}

/// `dist(x, conv(S ∪ -S))` in the norm of the space, where
/// `S = {z in B : f(z) >= 1 - eps}`; infinite when `S` is empty.
fn slice_hull_distance(p: &Polytope, f: &DVector<f64>, eps: f64, x: &DVector<f64>) -> f64 {
    let n = p.dim();
    let mut lp = LinearProgram::new(Sense::Minimize);
    let r = lp.var(1.0, 0.0, f64::INFINITY);
    let t = lp.var(0.0, 0.0, 1.0);
    let a: Vec<usize> = (0..n).map(|_| lp.free_var(0.0)).collect();
    let b: Vec<usize> = (0..n).map(|_| lp.free_var(0.0)).collect();
    let lin = |vars: &[usize], w: &DVector<f64>| -> Vec<(usize, f64)> {
        vars.iter().zip(w.iter()).map(|(&v, &c)| (v, c)).collect()
    };
    for g in p.facets() {
        // g.a <= t and g.b <= 1 - t
        let mut row = lin(&a, g);
        row.push((t, -1.0));
        lp.le(&row, 0.0);
        let mut row = lin(&b, g);
        row.push((t, 1.0));
        lp.le(&row, 1.0);
        // g.(x - a + b) <= r
        let mut row: Vec<(usize, f64)> = lin(&a, g).into_iter().map(|(v, c)| (v, -c)).collect();
        row.extend(lin(&b, g));
        row.push((r, -1.0));
        lp.le(&row, -g.dot(x));
    }
    // f.a >= (1 - eps) t and f.b >= (1 - eps)(1 - t)
    let mut row = lin(&a, f);
    row.push((t, -(1.0 - eps)));
    lp.ge(&row, 0.0);
    let mut row = lin(&b, f);
    row.push((t, 1.0 - eps));
    lp.ge(&row, 1.0 - eps);
    lp.solve().map_or(f64::INFINITY, |s| s.objective)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_space, parse_space_expr};

    fn space(s: &str) -> Space {
        build_space(&parse_space_expr(s).unwrap()).unwrap()
    }

    #[test]
    fn square_passes_everywhere() {
        let r = lushness_test(&space("linf(2)"), &LushConfig::default()).unwrap();
        assert_eq!(r.triples, 64 * 64 * 3);
        assert!(r.failures.is_empty());
        assert_eq!(r.pass_rate, 1.0);
    }

    #[test]
    fn hexagon_fails_somewhere() {
        let r = lushness_test(&space("hexquot"), &LushConfig::default()).unwrap();
        assert!(!r.failures.is_empty());
        assert!(r.failures.iter().all(|f| f.best_distance >= f.epsilon));
    }

    #[test]
    fn point_in_its_own_slice() {
        let sp = space("hexquot");
        let p = sp.polytope().unwrap();
        for (i, x) in p.vertices().iter().enumerate() {
            for &j in &p.incidence()[i] {
                assert!(slice_hull_distance(p, &p.facets()[j], 0.5, x) < 1e-9);
            }
        }
    }

    #[test]
    fn square_slices() {
        // conv of the two opposite edges x1 = +-1 is the whole square.
        let sp = space("linf(2)");
        let p = sp.polytope().unwrap();
        let f = DVector::from_vec(vec![1.0, 0.0]);
        let x = DVector::from_vec(vec![0.0, 1.0]);
        assert!(slice_hull_distance(p, &f, 0.1, &x) < 1e-9);
        let empty = slice_hull_distance(p, &(f * 0.5), 0.1, &x);
        assert!(empty.is_infinite());
    }

    #[test]
    fn rejects_bad_input() {
        let cfg = LushConfig {
            epsilons: vec![1.5],
            ..Default::default()
        };
        assert!(lushness_test(&space("linf(2)"), &cfg).is_err());
        assert!(lushness_test(&space("hilbert(2, real)"), &LushConfig::default()).is_err());
    }
}
