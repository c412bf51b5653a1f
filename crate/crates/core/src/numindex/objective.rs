//! The scale-invariant objective `v(T) / ||T||` over raw matrix entries.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::numrange::{hermitian_part_max, maximize_on_circle, radius_limit_formula, AlphaSchedule};
use crate::operators::{norm_of_matrix, Operator};
use crate::spaces::{Field, Polytope, Space};
use crate::C64;

/// Value reported for the zero matrix, where the ratio is undefined.
const ZERO_MATRIX_VALUE: f64 = 1.0;

pub(crate) enum Objective {
    Polytope {
        /// Columns are the vertices.
        vertices: DMatrix<f64>,
        /// Rows are the facet functionals.
        facets: DMatrix<f64>,
        incidence: Vec<Vec<usize>>,
    },
    HilbertReal,
    HilbertComplex {
        grid: usize,
    },
    Generic {
        space: Space,
        schedule: AlphaSchedule,
    },
}

impl Objective {
    pub(crate) fn for_space(space: &Space) -> Self {
        if let Some(p) = space.polytope() {
            return Self::for_polytope(p);
        }
        match (space.is_hilbert(), space.field()) {
            (true, Field::Real) => Objective::HilbertReal,
            (true, Field::Complex) => Objective::HilbertComplex { grid: 180 },
            _ => Objective::Generic {
                space: space.clone(),
                schedule: AlphaSchedule::new((10..=20).map(|k| 0.5f64.powi(k)).collect(), 180, 1e-9)
                    .expect("valid schedule"),
            },
        }
    }

    pub(crate) fn for_polytope(p: &Polytope) -> Self {
        Objective::Polytope {
            vertices: DMatrix::from_columns(p.vertices()),
            facets: DMatrix::from_rows(&p.facets().iter().map(|f| f.transpose()).collect::<Vec<_>>()),
            incidence: p.incidence().to_vec(),
        }
    }

    /// Number of real parameters for an `n x n` operator.
    pub(crate) fn params(&self, n: usize) -> usize {
        match self {
            Objective::HilbertComplex { .. } => 2 * n * n,
            Objective::Generic { space, .. } if space.field() == Field::Complex => 2 * n * n,
            _ => n * n,
        }
    }

    pub(crate) fn is_complex(&self) -> bool {
        match self {
            Objective::HilbertComplex { .. } => true,
            Objective::Generic { space, .. } => space.field() == Field::Complex,
            _ => false,
        }
    }

    /// Row-major entries, real parts first then imaginary parts.
    pub(crate) fn matrix(&self, n: usize, x: &[f64]) -> DMatrix<C64> {
        let complex = self.is_complex();
        DMatrix::from_fn(n, n, |i, j| {
            let im = if complex { x[n * n + i * n + j] } else { 0.0 };
            C64::new(x[i * n + j], im)
        })
    }

    pub(crate) fn real_matrix(n: usize, x: &[f64]) -> DMatrix<f64> {
        DMatrix::from_fn(n, n, |i, j| x[i * n + j])
    }

    /// `(v(T), ||T||)`.
    pub(crate) fn radius_and_norm(&self, n: usize, x: &[f64]) -> (f64, f64) {
        match self {
            Objective::Polytope {
                vertices,
                facets,
                incidence,
            } => {
                let m = Self::real_matrix(n, x);
                let values = facets * (m * vertices);
                let norm = values.max();
                let mut radius: f64 = 0.0;
                for (i, fs) in incidence.iter().enumerate() {
                    for &j in fs {
                        radius = radius.max(values[(j, i)].abs());
                    }
                }
                (radius, norm)
            }
            Objective::HilbertReal => {
                let m = Self::real_matrix(n, x);
                if n == 2 {
                    let (a, d, b) = (m[(0, 0)], m[(1, 1)], 0.5 * (m[(0, 1)] + m[(1, 0)]));
                    let h = (0.5 * (a - d)).hypot(b);
                    let radius = (0.5 * (a + d)).abs() + h;
                    let fro2 = m.norm_squared();
                    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
                    let disc = (0.25 * fro2 * fro2 - det * det).max(0.0).sqrt();
                    return (radius, (0.5 * fro2 + disc).sqrt());
                }
                let s = (&m + m.transpose()) * 0.5;
                let eig = SymmetricEigen::new(s);
                let radius = eig.eigenvalues.iter().fold(0.0f64, |acc, l| acc.max(l.abs()));
                (radius, m.svd(false, false).singular_values.max())
            }
            Objective::HilbertComplex { grid } => {
                let m = self.matrix(n, x);
                let (_, radius) = maximize_on_circle(|t| hermitian_part_max(&m, t), *grid);
                let norm = if n == 2 {
                    let fro2 = m.norm_squared();
                    let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).norm();
                    (0.5 * fro2 + (0.25 * fro2 * fro2 - det * det).max(0.0).sqrt()).sqrt()
                } else {
                    m.svd(false, false).singular_values.max()
                };
                (radius.max(0.0), norm)
            }
            Objective::Generic { space, schedule } => {
                let m = self.matrix(n, x);
                let norm = norm_of_matrix(space, &m).value;
                let Ok(t) = Operator::new(space.clone(), m) else {
                    return (f64::NAN, norm);
                };
                let radius = radius_limit_formula(&t, schedule).map_or(f64::NAN, |c| c.value);
                (radius, norm)
            }
        }
    }

    pub(crate) fn ratio(&self, n: usize, x: &[f64]) -> f64 {
        let (radius, norm) = self.radius_and_norm(n, x);
        if !(norm > 1e-300) {
            return ZERO_MATRIX_VALUE;
        }
        radius / norm
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_space, parse_space_expr};
    use crate::numrange::{radius_exact_polytope, radius_hilbert};
    use crate::operators::random_operator;

    fn params_of(t: &Operator, complex: bool) -> Vec<f64> {
        let n = t.dim();
        let mut x: Vec<f64> = (0..n * n).map(|k| t.matrix()[(k / n, k % n)].re).collect();
        if complex {
            x.extend((0..n * n).map(|k| t.matrix()[(k / n, k % n)].im));
        }
        x
    }

    #[test]
    fn fast_paths_match_the_engines() {
        for s in [
            "hexquot",
            "linf(3)",
            "xtrunc(1)",
            "hilbert(2, real)",
            "hilbert(3, real)",
            "hilbert(2, complex)",
            "hilbert(3, complex)",
        ] {
            let space = build_space(&parse_space_expr(s).unwrap()).unwrap();
            let obj = Objective::for_space(&space);
            for seed in 0..20 {
                let t = random_operator(&space, seed, 1.0).unwrap();
                let x = params_of(&t, obj.is_complex());
                assert_eq!(x.len(), obj.params(t.dim()));
                let (r, n) = obj.radius_and_norm(t.dim(), &x);
                let cert = if space.polytope().is_some() {
                    radius_exact_polytope(&t).unwrap()
                } else {
                    radius_hilbert(&t).unwrap()
                };
                assert!((n - t.norm().value).abs() < 1e-9, "{s} norm {n} vs {}", t.norm().value);
                assert!((r - cert.value).abs() < 1e-9, "{s} radius {r} vs {}", cert.value);
            }
        }
    }

    #[test]
    fn zero_matrix_is_finite() {
        let obj = Objective::HilbertReal;
        assert_eq!(obj.ratio(2, &[0.0; 4]), ZERO_MATRIX_VALUE);
    }
}
