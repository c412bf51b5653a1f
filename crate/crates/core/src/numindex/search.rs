use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::nelder_mead::nelder_mead;
use super::objective::Objective;
use super::KnownIndex;
use crate::error::Result;
use crate::lp::{LinearProgram, Sense};
use crate::numrange::{radius_auto, RadiusCertificate};
use crate::operators::Operator;
use crate::seed;
use crate::spaces::enumerate::close;
use crate::spaces::{Polytope, Space};
use crate::C64;

/// Multistart parameters for [`index_search_upper`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub starts: usize,
    /// Objective evaluations per start.
    pub budget: usize,
    pub seed: u64,
    /// Refine polytope results with the linear programs at norm-attaining pairs.
    pub polish: bool,
}

impl SearchConfig {
    /// 256 starts of 500 evaluations up to dimension 3, 64 of 300 above.
    pub fn for_dim(dim: usize, seed: u64) -> Self {
        let (starts, budget) = if dim <= 3 { (256, 500) } else { (64, 300) };
        Self {
            starts,
            budget,
            seed,
            polish: true,
        }
    }

    pub fn for_space(space: &Space, seed: u64) -> Self {
        Self::for_dim(space.dim(), seed)
    }
}

/// Value from the exhaustive 2-D grid, with its resolution bound.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleValue {
    pub value: f64,
    pub grid_bound: f64,
    pub grid_points: usize,
}

#[derive(Clone, Debug)]
pub struct IndexEstimate {
    /// `v(witness) / ||witness||`, an upper bound for the index.
    pub upper: f64,
    /// Normalised to `||witness|| = 1`.
    pub witness: Operator,
    pub witness_radius: RadiusCertificate,
    pub oracle: Option<OracleValue>,
    pub known: Option<KnownIndex>,
    pub config: SearchConfig,
    pub evaluations: usize,
}

impl IndexEstimate {
    /// The oracle value when one was computed, else the search bound.
    pub fn best(&self) -> f64 {
        self.oracle.as_ref().map_or(self.upper, |o| o.value.min(self.upper))
    }
}

struct StartResult {
    value: f64,
    x: Vec<f64>,
    evaluations: usize,
}

/// Minimises `v(T) / ||T||` by multistart Nelder-Mead over the entries of `T`.
pub fn index_search_upper(space: &Space, config: &SearchConfig) -> Result<IndexEstimate> {
    let n = space.dim();
    let objective = Objective::for_space(space);
    let dim = objective.params(n);
    let polytope = space.polytope().filter(|_| config.polish);
    let runs: Vec<StartResult> = (0..config.starts.max(1))
        .into_par_iter()
        .map(|s| {
            let mut rng = seed::rng(seed::derive_index(config.seed, s as u64));
            let x0: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let mut f = |x: &[f64]| objective.ratio(n, x);
            let r = nelder_mead(&mut f, &x0, 0.5, config.budget);
            let (mut value, mut x) = (r.value, r.x);
            if let Some(p) = polytope {
                if let Some((v, m)) = polish(p, &objective, &Objective::real_matrix(n, &x)) {
                    if v < value {
                        value = v;
                        x = m.transpose().as_slice().to_vec();
                    }
                }
            }
            StartResult {
                value,
                x: normalise(&objective, n, &x),
                evaluations: r.evaluations,
            }
        })
        .collect();
    let evaluations = runs.iter().map(|r| r.evaluations).sum();
    let best = runs
        .into_iter()
        .reduce(|a, b| {
            let tie = (a.value - b.value).abs() <= 1e-12;
            if b.value < a.value && !tie || tie && lex_less(&b.x, &a.x) {
                b
            } else {
                a
            }
        })
        .expect("at least one start");
    let witness = Operator::new(space.clone(), objective.matrix(n, &best.x))?;
    finish(witness, config.clone(), evaluations)
}

/// Re-evaluates the witness with the certified engines.
pub(crate) fn finish(witness: Operator, config: SearchConfig, evaluations: usize) -> Result<IndexEstimate> {
    let norm = witness.norm().value;
    let witness = if norm > 0.0 {
        witness.scaled(C64::new(1.0 / norm, 0.0))?
    } else {
        witness
    };
    let radius = radius_auto(&witness)?;
    let upper = radius.value / witness.norm().value;
    Ok(IndexEstimate {
        upper,
        witness,
        witness_radius: radius,
        oracle: None,
        known: None,
        config,
        evaluations,
    })
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return x < y;
        }
    }
    false
}

/// Scales the parameters to `||T|| = 1`.
fn normalise(objective: &Objective, n: usize, x: &[f64]) -> Vec<f64> {
    let (_, norm) = objective.radius_and_norm(n, x);
    if norm > 0.0 && norm.is_finite() {
        x.iter().map(|v| v / norm).collect()
    } else {
        x.to_vec()
    }
}

/// Vertices and facets up to sign.
fn half(points: &[DVector<f64>]) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let np = -p;
        if !kept.iter().any(|&k| close(&points[k], &np) || close(&points[k], p)) {
            kept.push(i);
        }
    }
    kept
}

/// `min t` subject to `|f(T x)| <= t` on every extreme dual pair and
/// `g(T v) = 1`. The minimum over all vertex-facet choices `(v, g)` is the
/// numerical index of the polytope.
pub fn pair_program(p: &Polytope, v: usize, g: usize) -> Option<(f64, DMatrix<f64>)> {
    let n = p.dim();
    let mut lp = LinearProgram::new(Sense::Minimize);
    let entries: Vec<usize> = (0..n * n).map(|_| lp.free_var(0.0)).collect();
    let t = lp.var(1.0, 0.0, f64::INFINITY);
    let row = |f: &DVector<f64>, x: &DVector<f64>| -> Vec<(usize, f64)> {
        let mut r = Vec::with_capacity(n * n + 1);
        for i in 0..n {
            for j in 0..n {
                let c = f[i] * x[j];
                if c != 0.0 {
                    r.push((entries[i * n + j], c));
                }
            }
        }
        r
    };
    for (i, j) in p.incident_pairs_mod_sign() {
        let mut r = row(&p.facets()[j], &p.vertices()[i]);
        r.push((t, -1.0));
        lp.le(&r, 0.0);
        for e in r.iter_mut() {
            e.1 = -e.1;
        }
        r.last_mut().expect("t column").1 = -1.0;
        lp.le(&r, 0.0);
    }
    lp.eq(&row(&p.facets()[g], &p.vertices()[v]), 1.0);
    let sol = lp.solve().ok()?;
    let m = DMatrix::from_fn(n, n, |i, j| sol.values[entries[i * n + j]]);
    Some((sol.objective, m))
}

/// Runs [`pair_program`] at the pairs where `m` attains its norm and returns
/// the best exactly re-evaluated ratio.
fn polish(p: &Polytope, objective: &Objective, m: &DMatrix<f64>) -> Option<(f64, DMatrix<f64>)> {
    const MAX_PAIRS: usize = 4;
    let n = p.dim();
    let mut scored: Vec<(f64, usize, usize)> = Vec::new();
    let fs = half(p.facets());
    for v in half(p.vertices()) {
        let tv = m * &p.vertices()[v];
        for &g in &fs {
            let val = p.facets()[g].dot(&tv);
            scored.push((val.abs(), v, g));
        }
    }
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let top = scored.first()?.0;
    let mut best: Option<(f64, DMatrix<f64>)> = None;
    for &(val, v, g) in scored.iter().take(MAX_PAIRS) {
        if val < top * (1.0 - 1e-6) {
            break;
        }
        let Some((_, cand)) = pair_program(p, v, g) else {
            continue;
        };
        let ratio = objective.ratio(n, cand.transpose().as_slice());
        if best.as_ref().is_none_or(|b| ratio < b.0) {
            best = Some((ratio, cand));
        }
    }
    best
}

/// The index of a polytope space by solving [`pair_program`] for every
/// vertex-facet choice up to sign. Exact up to the LP tolerance.
pub fn polytope_index_lp(p: &Polytope) -> Option<(f64, DMatrix<f64>)> {
    let objective = Objective::for_polytope(p);
    let n = p.dim();
    let fs = half(p.facets());
    let pairs: Vec<(usize, usize)> = half(p.vertices())
        .into_iter()
        .flat_map(|v| fs.iter().map(move |&g| (v, g)))
        .collect();
    pairs
        .par_iter()
        .filter_map(|&(v, g)| pair_program(p, v, g))
        .map(|(_, m)| (objective.ratio(n, m.transpose().as_slice()), m))
        .collect::<Vec<_>>()
        .into_iter()
        .reduce(|a, b| if b.0 < a.0 { b } else { a })
}
