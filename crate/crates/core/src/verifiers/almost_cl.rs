use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::require_polytope;
use crate::error::Result;
use crate::lp::{LinearProgram, Sense};
use crate::spaces::{Polytope, Space};

/// A vertex outside `conv(F ∪ -F)` for a facet `F`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlmostClFailure {
    pub facet: usize,
    pub vertex: usize,
    /// Sup-norm distance in coordinates from the vertex to the hull.
    pub distance: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlmostClReport {
    pub holds: bool,
    pub facets_checked: usize,
    pub failures: Vec<AlmostClFailure>,
}

/// Distances below this count as membership.
const MEMBERSHIP_TOL: f64 = 1e-9;

/// The maximal convex subsets of the sphere of a polytope are its facets;
/// the ball is almost-CL iff every vertex lies in `conv(F ∪ -F)` for every
/// facet `F`.
pub fn almost_cl_test(space: &Space) -> Result<AlmostClReport> {
    let p = require_polytope(space)?;
    let mut facet_vertices: Vec<Vec<usize>> = vec![Vec::new(); p.facets().len()];
    for (i, fs) in p.incidence().iter().enumerate() {
        for &j in fs {
            facet_vertices[j].push(i);
        }
    }
    let tasks: Vec<(usize, usize)> = (0..p.facets().len())
        .flat_map(|j| (0..p.vertices().len()).map(move |i| (j, i)))
        .collect();
    let mut failures: Vec<AlmostClFailure> = tasks
        .par_iter()
        .filter_map(|&(j, i)| {
            let d = hull_distance(p, &facet_vertices[j], i)?;
            (d > MEMBERSHIP_TOL).then_some(AlmostClFailure {
                facet: j,
                vertex: i,
                distance: d,
            })
        })
        .collect();
    failures.sort_by_key(|f| (f.facet, f.vertex));
    Ok(AlmostClReport {
        holds: failures.is_empty(),
        facets_checked: p.facets().len(),
        failures,
    })
}

/// `min ||v - sum_k (l_k - m_k) a_k||_inf` over `l, m >= 0` with
/// `sum l + sum m = 1`, the `a_k` being the vertices of the facet.
fn hull_distance(p: &Polytope, facet: &[usize], vertex: usize) -> Option<f64> {
    let n = p.dim();
    let v = &p.vertices()[vertex];
    let mut lp = LinearProgram::new(Sense::Minimize);
    let r = lp.var(1.0, 0.0, f64::INFINITY);
    let plus: Vec<usize> = facet.iter().map(|_| lp.var(0.0, 0.0, f64::INFINITY)).collect();
    let minus: Vec<usize> = facet.iter().map(|_| lp.var(0.0, 0.0, f64::INFINITY)).collect();
    let all: Vec<(usize, f64)> = plus.iter().chain(&minus).map(|&k| (k, 1.0)).collect();
    lp.eq(&all, 1.0);
    for c in 0..n {
        let mut row: Vec<(usize, f64)> = Vec::with_capacity(2 * facet.len() + 1);
        for (k, &a) in facet.iter().enumerate() {
            let x = p.vertices()[a][c];
            row.push((plus[k], x));
            row.push((minus[k], -x));
        }
        let mut upper = row.clone();
        upper.push((r, -1.0));
        lp.le(&upper, v[c]);
        row.push((r, 1.0));
        lp.ge(&row, v[c]);
    }
    lp.solve().ok().map(|s| s.objective)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_space, parse_space_expr};

    fn test(s: &str) -> AlmostClReport {
        almost_cl_test(&build_space(&parse_space_expr(s).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn cube_and_cross_are_almost_cl() {
        assert!(test("linf(3)").holds);
        assert!(test("linf(2)").holds);
        assert!(test("l1(2)").holds);
        assert!(test("l1(3)").holds);
    }

    #[test]
    fn hexagon_is_not() {
        let r = test("hexquot");
        assert!(!r.holds);
        assert!(r.failures.iter().all(|f| f.distance > 0.1));
    }

    #[test]
    fn truncation_is_not() {
        assert!(!test("xtrunc(1)").holds);
    }
}
