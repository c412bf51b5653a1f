use serde::{Deserialize, Serialize};

use super::require_polytope;
use crate::error::Result;
use crate::spaces::Space;
use crate::TAU_PAIR;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairReport {
    pub pairs: usize,
    pub min: f64,
    pub max: f64,
    /// Whether `|f(x)| = 1` for every extreme `x` and extreme `f`.
    pub all_one: bool,
    /// Distinct values of `|f(x)|` rounded to `1e-9`, ascending, with counts.
    pub histogram: Vec<(f64, usize)>,
}

/// `|f(x)|` over every vertex `x` of the ball and every vertex `f` of the
/// dual ball.
pub fn extreme_pair_report(space: &Space) -> Result<PairReport> {
    let p = require_polytope(space)?;
    let mut values: Vec<f64> = Vec::with_capacity(p.vertices().len() * p.facets().len());
    for v in p.vertices() {
        for f in p.facets() {
            values.push(f.dot(v).abs());
        }
    }
    let mut keys: Vec<i64> = values.iter().map(|v| (v * 1e9).round() as i64).collect();
    keys.sort_unstable();
    let mut histogram: Vec<(f64, usize)> = Vec::new();
    for k in keys {
        match histogram.last_mut() {
            Some(last) if (last.0 * 1e9).round() as i64 == k => last.1 += 1,
            _ => histogram.push((k as f64 * 1e-9, 1)),
        }
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(0.0, f64::max);
    Ok(PairReport {
        pairs: values.len(),
        min,
        max,
        all_one: values.iter().all(|v| (v - 1.0).abs() <= TAU_PAIR),
        histogram,
    })
}
