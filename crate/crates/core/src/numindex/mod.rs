//! Numerical index estimation: multistart search for a minimising operator,
//! the exhaustive planar oracle, known values and the finite-dimensional
//! duality and sum checks.

mod nelder_mead;
mod objective;
mod oracle2d;
mod search;

use serde::{Deserialize, Serialize};

pub use nelder_mead::{nelder_mead, NmResult};
pub use oracle2d::{grid_side, index_oracle_2d, DEFAULT_GRID_DENSITY};
pub use search::{index_search_upper, pair_program, polytope_index_lp, IndexEstimate, OracleValue, SearchConfig};

use crate::constructions::{sum_spaces, SpaceExpr};
use crate::error::Result;
use crate::spaces::{dual_space, Field, Space, SumMode};

/// Tolerance for comparing two index estimates.
pub const INDEX_TOL: f64 = 2e-2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnownIndex {
    pub value: f64,
    pub citation: String,
}

/// Classical values: `1` for `l_inf`, `l_1` and every line, `0` for real
/// Hilbert spaces and `1/2` for complex ones of dimension at least 2.
pub fn known_index(expr: &SpaceExpr) -> Option<KnownIndex> {
    let known = |value: f64, citation: &str| {
        Some(KnownIndex {
            value,
            citation: citation.to_string(),
        })
    };
    match expr {
        SpaceExpr::Linf(_) | SpaceExpr::L1(_) => known(1.0, "L- and M-spaces have numerical index 1"),
        SpaceExpr::Lp(_, p) if *p == 1.0 => known(1.0, "L- and M-spaces have numerical index 1"),
        SpaceExpr::Lp(1, _) | SpaceExpr::Hilbert(1, _) => known(1.0, "one-dimensional space"),
        SpaceExpr::Lp(_, p) if *p == 2.0 => known(0.0, "real Hilbert space"),
        SpaceExpr::Hilbert(_, Field::Real) => known(0.0, "real Hilbert space"),
        SpaceExpr::Hilbert(_, Field::Complex) => known(0.5, "complex Hilbert space"),
        _ => None,
    }
}

/// Search bound, tightened by the planar oracle where it applies.
pub fn estimate_index(space: &Space, config: &SearchConfig) -> Result<IndexEstimate> {
    let mut est = index_search_upper(space, config)?;
    if space.dim() == 2 && space.polytope().is_some() {
        est.oracle = Some(index_oracle_2d(space, DEFAULT_GRID_DENSITY)?);
    }
    Ok(est)
}

#[derive(Clone, Debug)]
pub struct DualityReport {
    pub primal: IndexEstimate,
    pub dual: IndexEstimate,
    pub difference: f64,
    pub tolerance: f64,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.difference <= self.tolerance
    }
}

/// `n(X)` against `n(X*)`; they coincide in finite dimensions.
pub fn check_duality_equality_findim(space: &Space, config: &SearchConfig) -> Result<DualityReport> {
    let dual = dual_space(space)?;
    let primal = estimate_index(space, config)?;
    let dual = estimate_index(&dual, config)?;
    Ok(DualityReport {
        difference: (primal.best() - dual.best()).abs(),
        primal,
        dual,
        tolerance: INDEX_TOL,
    })
}

#[derive(Clone, Debug)]
pub struct SumReport {
    pub sum: IndexEstimate,
    pub left: IndexEstimate,
    pub right: IndexEstimate,
    /// `|n(A (+) B) - min(n(A), n(B))|`.
    pub discrepancy: f64,
    pub tolerance: f64,
}

impl SumReport {
    pub fn passed(&self) -> bool {
        self.discrepancy <= self.tolerance
    }
}

/// `n(A (+)_inf B) = n(A (+)_1 B) = min(n(A), n(B))`.
pub fn check_sum_formula(a: &Space, b: &Space, mode: SumMode, config: &SearchConfig) -> Result<SumReport> {
    let sum = sum_spaces(a, b, mode, &Default::default())?;
    let left = estimate_index(a, config)?;
    let right = estimate_index(b, config)?;
    let sum = estimate_index(&sum, &SearchConfig { ..config.clone() })?;
    Ok(SumReport {
        discrepancy: (sum.best() - left.best().min(right.best())).abs(),
        sum,
        left,
        right,
        tolerance: INDEX_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_space, parse_space_expr, random_polygon_space};
    use crate::numrange::radius_hilbert;
    use crate::operators::Operator;
    use nalgebra::DMatrix;

    fn space(s: &str) -> Space {
        build_space(&parse_space_expr(s).unwrap()).unwrap()
    }

    #[test]
    fn known_values() {
        let k = |s: &str| known_index(&parse_space_expr(s).unwrap()).map(|k| k.value);
        assert_eq!(k("linf(5)"), Some(1.0));
        assert_eq!(k("l1(2)"), Some(1.0));
        assert_eq!(k("hilbert(3, real)"), Some(0.0));
        assert_eq!(k("hilbert(2, complex)"), Some(0.5));
        assert_eq!(k("lp(4, 2)"), Some(0.0));
        assert_eq!(k("polygon(3)"), None);
        assert_eq!(k("hexquot"), None);
    }

    #[test]
    fn real_hilbert_plane_has_index_zero() {
        let sp = space("hilbert(2, real)");
        let est = index_search_upper(&sp, &SearchConfig::for_space(&sp, 1)).unwrap();
        assert!(est.upper <= 1e-6, "{}", est.upper);
        assert!(radius_hilbert(&est.witness).unwrap().value <= 1e-9);
        assert!((est.witness.norm().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cube_has_no_operator_below_one() {
        let sp = space("linf(3)");
        let est = index_search_upper(
            &sp,
            &SearchConfig {
                starts: 16,
                ..SearchConfig::for_space(&sp, 3)
            },
        )
        .unwrap();
        assert!(est.upper >= 1.0 - 1e-6);
    }

    #[test]
    fn search_is_deterministic() {
        let sp = space("hexquot");
        let cfg = SearchConfig {
            starts: 12,
            budget: 200,
            seed: 9,
            polish: false,
        };
        let a = index_search_upper(&sp, &cfg).unwrap();
        let b = index_search_upper(&sp, &cfg).unwrap();
        assert_eq!(a.upper, b.upper);
        assert_eq!(a.witness.matrix(), b.witness.matrix());
    }

    #[test]
    fn oracle_and_search_agree_on_planar_polytopes() {
        for s in ["hexquot", "polygon(2)", "polygon(5)", "dual(hexquot)"] {
            let sp = space(s);
            let oracle = index_oracle_2d(&sp, 20_000).unwrap();
            let est = index_search_upper(
                &sp,
                &SearchConfig {
                    starts: 32,
                    ..SearchConfig::for_space(&sp, 2)
                },
            )
            .unwrap();
            let exact = polytope_index_lp(sp.polytope().unwrap()).unwrap().0;
            assert!(est.upper >= oracle.value - INDEX_TOL, "{s}");
            assert!((est.upper - oracle.value).abs() <= INDEX_TOL, "{s}");
            assert!((oracle.value - exact).abs() < 1e-6, "{s}: {} vs {exact}", oracle.value);
            assert!(oracle.grid_bound > 0.0);
        }
    }

    #[test]
    fn oracle_rejects_other_spaces() {
        assert!(index_oracle_2d(&space("linf(3)"), 1000).is_err());
        assert!(index_oracle_2d(&space("hilbert(2, real)"), 1000).is_err());
    }

    #[test]
    fn grid_side_covers_density() {
        assert_eq!(grid_side(200_000), 30);
        assert!(8 * grid_side(1000).pow(3) >= 1000);
        assert!(8 * (grid_side(1000) - 1).pow(3) < 1000);
    }

    #[test]
    fn pair_programs_bound_every_operator() {
        // For any T attaining its norm at (v, g), the program at (v, g)
        // is at most v(T) / ||T||.
        let sp = space("hexquot");
        let p = sp.polytope().unwrap();
        let exact = polytope_index_lp(p).unwrap().0;
        for seed in 0..20 {
            let t = crate::operators::random_operator(&sp, seed, 1.0).unwrap();
            let ratio = crate::numrange::radius_exact_polytope(&t).unwrap().value / t.norm().value;
            assert!(ratio >= exact - 1e-9);
        }
    }

    #[test]
    fn duality_on_random_polygon() {
        let sp = random_polygon_space(11, 5).unwrap();
        let cfg = SearchConfig {
            starts: 16,
            ..SearchConfig::for_space(&sp, 4)
        };
        let r = check_duality_equality_findim(&sp, &cfg).unwrap();
        assert!(r.passed(), "{} vs {}", r.primal.best(), r.dual.best());
    }

    #[test]
    fn sum_formula_small() {
        let a = space("linf(2)");
        let b = space("hexquot");
        let cfg = SearchConfig {
            starts: 16,
            budget: 300,
            seed: 5,
            polish: true,
        };
        let r = check_sum_formula(&a, &b, SumMode::Inf, &cfg).unwrap();
        assert!(r.passed(), "{}", r.discrepancy);
        let r = check_sum_formula(&b, &b, SumMode::One, &cfg).unwrap();
        assert!(r.passed(), "{}", r.discrepancy);
    }

    #[test]
    fn isometry_conjugation_keeps_the_ratio() {
        let sp = space("linf(3)");
        let t = crate::operators::random_operator(&sp, 1, 1.0).unwrap();
        let perm = DMatrix::from_row_slice(3, 3, &[0.0, -1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
        let conj = &perm * t.real_matrix() * perm.transpose();
        let u = Operator::from_real(sp, &conj).unwrap();
        let r = |o: &Operator| crate::numrange::radius_exact_polytope(o).unwrap().value / o.norm().value;
        assert!((r(&t) - r(&u)).abs() < 1e-9);
    }
}
