//! Brute-force vertex enumeration for small symmetric polytopes given by
//! halfspaces `a . x <= 1`.
//!
//! Every `dim`-subset of the halfspaces is solved as a linear system and kept
//! when feasible. The number of subsets is capped by a budget so callers can
//! fall back to an oracle representation for large sections.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Default cap on the number of `dim`-subsets examined.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 250_000;

const FEAS_TOL: f64 = 1e-9;
const DEDUP_TOL: f64 = 1e-9;

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Removes zero rows and duplicates (up to `DEDUP_TOL`).
pub fn dedup_vectors(vs: &[DVector<f64>]) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(vs.len());
    for v in vs {
        if v.amax() < 1e-12 {
            continue;
        }
        if !out.iter().any(|w| close(w, v)) {
            out.push(v.clone());
        }
    }
    out
}

pub fn close(a: &DVector<f64>, b: &DVector<f64>) -> bool {
    let scale = 1.0f64.max(a.amax()).max(b.amax());
    (a - b).amax() <= DEDUP_TOL * scale
}

/// Number of subsets `enumerate_vertices` would examine.
pub fn enumeration_cost(dim: usize, halfspaces: usize) -> u64 {
    binomial(halfspaces, dim)
}

/// Vertices of the bounded polytope `{x : a . x <= 1 for every a}`.
pub fn enumerate_vertices(dim: usize, halfspaces: &[DVector<f64>], budget: u64) -> Result<Vec<DVector<f64>>> {
    let hs = dedup_vectors(halfspaces);
    if hs.iter().any(|a| a.len() != dim) {
        return Err(Error::input("halfspace dimension mismatch"));
    }
    if rank(&hs, dim) < dim {
        return Err(Error::input("halfspaces do not bound a polytope"));
    }
    let cost = enumeration_cost(dim, hs.len());
    if cost > budget {
        return Err(Error::unsupported(format!(
            "vertex enumeration needs {cost} subsets (budget {budget})"
        )));
    }

    let ones = DVector::from_element(dim, 1.0);
    let mut vertices: Vec<DVector<f64>> = Vec::new();
    let mut idx: Vec<usize> = (0..dim).collect();
    let m = hs.len();
    loop {
        let a = DMatrix::from_fn(dim, dim, |r, c| hs[idx[r]][c]);
        if let Some(x) = solve_well_posed(a, &ones) {
            let feasible = hs.iter().all(|h| h.dot(&x) <= 1.0 + FEAS_TOL);
            if feasible && !vertices.iter().any(|v| close(v, &x)) {
                vertices.push(x);
            }
        }
        // next combination
        let mut i = dim;
        loop {
            if i == 0 {
                return Ok(vertices);
            }
            i -= 1;
            if idx[i] != i + m - dim {
                break;
            }
            if i == 0 {
                return Ok(vertices);
            }
        }
        idx[i] += 1;
        for j in i + 1..dim {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn solve_well_posed(a: DMatrix<f64>, rhs: &DVector<f64>) -> Option<DVector<f64>> {
    let lu = a.full_piv_lu();
    let u = lu.u();
    let diag = u.diagonal();
    let max = diag.amax();
    let min = diag.iter().fold(f64::INFINITY, |m, d| m.min(d.abs()));
    if max == 0.0 || min <= 1e-10 * max {
        return None;
    }
    lu.solve(rhs)
}

/// Numerical rank of a set of vectors (as matrix rows).
pub fn rank(vs: &[DVector<f64>], dim: usize) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(vs.len(), dim, |r, c| vs[r][c]);
    let sv = m.singular_values();
    let max = sv.amax();
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > 1e-9 * max).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(12, 5), 792);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(200, 100), u64::MAX);
    }

    #[test]
    fn square_from_halfspaces() {
        let hs = vec![v(&[1., 0.]), v(&[-1., 0.]), v(&[0., 1.]), v(&[0., -1.])];
        let vs = enumerate_vertices(2, &hs, 100).unwrap();
        assert_eq!(vs.len(), 4);
        assert!(vs
            .iter()
            .all(|x| (x[0].abs() - 1.0).abs() < 1e-12 && (x[1].abs() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn octahedron_is_degenerate_but_found() {
        // cross-polytope in R^3: 8 halfspaces (+-1,+-1,+-1), 4 facets per vertex
        let mut hs = Vec::new();
        for s in 0..8 {
            hs.push(v(&[
                if s & 1 == 0 { 1. } else { -1. },
                if s & 2 == 0 { 1. } else { -1. },
                if s & 4 == 0 { 1. } else { -1. },
            ]));
        }
        let vs = enumerate_vertices(3, &hs, 1000).unwrap();
        assert_eq!(vs.len(), 6);
    }

    #[test]
    fn unbounded_and_budget_errors() {
        let hs = vec![v(&[1., 0.]), v(&[-1., 0.])];
        assert!(matches!(enumerate_vertices(2, &hs, 100), Err(Error::Input(_))));
        let hs = vec![v(&[1., 0.]), v(&[-1., 0.]), v(&[0., 1.]), v(&[0., -1.])];
        assert!(matches!(enumerate_vertices(2, &hs, 3), Err(Error::Unsupported(_))));
    }
}
