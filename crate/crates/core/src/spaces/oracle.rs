use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::enumerate::dedup_vectors;
use super::polytope::dot;
use super::Space;
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Sense};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SumMode {
    /// `||(a, b)|| = max(||a||, ||b||)`
    Inf,
    /// `||(a, b)|| = ||a|| + ||b||`
    One,
}

impl SumMode {
    pub fn dual(self) -> Self {
        match self {
            SumMode::Inf => SumMode::One,
            SumMode::One => SumMode::Inf,
        }
    }
}

/// Family tag of a [`NormOracle`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OracleFamily {
    Lp(f64),
    Hilbert,
    SubspaceOfPolytope,
    Sum(SumMode),
    Custom,
}

type NormFn = dyn Fn(&DVector<C64>) -> f64 + Send + Sync;
type SupportFn = dyn Fn(&DVector<C64>) -> DVector<C64> + Send + Sync;

/// User-supplied norm with its support functional.
#[derive(Clone)]
pub struct CustomNorm {
    pub name: String,
    pub norm: Arc<NormFn>,
    pub support: Arc<SupportFn>,
    /// The dual norm, when the caller can provide it.
    pub dual: Option<Arc<CustomNorm>>,
}

impl fmt::Debug for CustomNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomNorm")
            .field("name", &self.name)
            .field("has_dual", &self.dual.is_some())
            .finish()
    }
}

/// Norm of a subspace `span(basis)` of a polyhedral space, in basis
/// coordinates: `||c|| = max_i a_i . (B c)` over the ambient facets `a_i`.
#[derive(Clone, Debug)]
pub struct SubspaceNorm {
    ambient_facets: Vec<DVector<f64>>,
    basis: DMatrix<f64>,
    /// `B^T a_i`, zero rows and duplicates removed.
    restricted: Vec<DVector<f64>>,
    /// `B^T a_i` for every ambient facet, aligned with `ambient_facets`.
    restricted_all: Vec<DVector<f64>>,
}

impl SubspaceNorm {
    pub fn new(ambient_facets: Vec<DVector<f64>>, basis: DMatrix<f64>) -> Result<Self> {
        let n = basis.nrows();
        if ambient_facets.iter().any(|a| a.len() != n) {
            return Err(Error::input("basis rows do not match the ambient dimension"));
        }
        if basis.ncols() == 0 || basis.rank(1e-10) < basis.ncols() {
            return Err(Error::input("subspace basis is not linearly independent"));
        }
        let restricted_all: Vec<DVector<f64>> = ambient_facets.iter().map(|a| basis.tr_mul(a)).collect();
        let restricted = dedup_vectors(&restricted_all);
        Ok(Self {
            ambient_facets,
            basis,
            restricted,
            restricted_all,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn ambient_facets(&self) -> &[DVector<f64>] {
        &self.ambient_facets
    }

    /// Restricted facet functionals `B^T a_i` (deduplicated); they describe
    /// the section ball as `{c : r . c <= 1}`.
    pub fn restricted_facets(&self) -> &[DVector<f64>] {
        &self.restricted
    }

    pub fn norm(&self, c: &[f64]) -> f64 {
        self.restricted.iter().map(|r| dot(r.as_slice(), c)).fold(0.0, f64::max)
    }

    pub fn support(&self, c: &[f64]) -> DVector<f64> {
        let mut best = (0, f64::NEG_INFINITY);
        for (i, r) in self.restricted.iter().enumerate() {
            let v = dot(r.as_slice(), c);
            if v > best.1 {
                best = (i, v);
            }
        }
        self.restricted[best.0].clone()
    }

    /// Smallest dual norm of an extension of `g` to the ambient space.
    ///
    /// The ambient dual ball is the absolutely convex hull of the ambient
    /// facets, so the minimal extension solves
    /// `min sum(l) s.t. sum l_i B^T a_i = g, l >= 0`.
    pub fn min_extension_norm(&self, g: &[f64]) -> Result<f64> {
        if g.iter().all(|x| *x == 0.0) {
            return Ok(0.0);
        }
        let mut lp = LinearProgram::new(Sense::Minimize);
        let lam: Vec<usize> = (0..self.restricted_all.len())
            .map(|_| lp.var(1.0, 0.0, f64::INFINITY))
            .collect();
        for (k, gk) in g.iter().enumerate() {
            let row: Vec<(usize, f64)> = lam.iter().zip(&self.restricted_all).map(|(&v, r)| (v, r[k])).collect();
            lp.eq(&row, *gk);
        }
        Ok(lp.solve_expected("minimal Hahn-Banach extension")?.objective)
    }

    /// `max g . c` over the section ball, with the maximiser.
    pub fn max_pairing(&self, g: &[f64]) -> Result<(f64, DVector<f64>)> {
        let k = self.dim();
        let mut lp = LinearProgram::new(Sense::Maximize);
        let c: Vec<usize> = (0..k).map(|i| lp.free_var(g[i])).collect();
        for r in &self.restricted {
            let row: Vec<(usize, f64)> = c.iter().zip(r.iter()).map(|(&v, &a)| (v, a)).collect();
            lp.le(&row, 1.0);
        }
        let sol = lp.solve_expected("section support")?;
        Ok((
            sol.objective,
            DVector::from_iterator(k, c.iter().map(|&i| sol.values[i])),
        ))
    }
}

/// A norm given by evaluation routines rather than an explicit polytope.
#[derive(Clone, Debug)]
pub enum NormOracle {
    /// `l_p` norm, `1 <= p <= inf`.
    Lp {
        p: f64,
    },
    /// Euclidean / Hermitian norm.
    Hilbert,
    /// Subspace of a polyhedral space.
    Subspace(Arc<SubspaceNorm>),
    /// Dual of a [`NormOracle::Subspace`]: functionals on the subspace normed
    /// by their minimal extension.
    SubspaceDual(Arc<SubspaceNorm>),
    /// `inf`- or `1`-sum of two spaces.
    Sum {
        mode: SumMode,
        parts: Arc<(Space, Space)>,
    },
    Custom(CustomNorm),
}

impl NormOracle {
    pub fn family(&self) -> OracleFamily {
        match self {
            NormOracle::Lp { p } => OracleFamily::Lp(*p),
            NormOracle::Hilbert => OracleFamily::Hilbert,
            NormOracle::Subspace(_) | NormOracle::SubspaceDual(_) => OracleFamily::SubspaceOfPolytope,
            NormOracle::Sum { mode, .. } => OracleFamily::Sum(*mode),
            NormOracle::Custom(_) => OracleFamily::Custom,
        }
    }

    pub fn norm(&self, x: &DVector<C64>) -> f64 {
        match self {
            NormOracle::Lp { p } => lp_norm(x, *p),
            NormOracle::Hilbert => x.norm(),
            NormOracle::Subspace(s) => s.norm(real_parts(x).as_slice()),
            NormOracle::SubspaceDual(s) => s.min_extension_norm(real_parts(x).as_slice()).unwrap_or(f64::NAN),
            NormOracle::Sum { mode, parts } => {
                let (a, b) = split(x, parts.0.dim());
                let (na, nb) = (parts.0.norm(&a), parts.1.norm(&b));
                match mode {
                    SumMode::Inf => na.max(nb),
                    SumMode::One => na + nb,
                }
            }
            NormOracle::Custom(c) => (c.norm)(x),
        }
    }

    /// Norm-one functional `f` with `f(x) = ||x||`; `x` must be nonzero.
    pub fn support(&self, x: &DVector<C64>) -> Result<DVector<C64>> {
        Ok(match self {
            NormOracle::Lp { p } => lp_support(x, *p),
            NormOracle::Hilbert => {
                let n = x.norm();
                x.map(|z| z.conj() / n)
            }
            NormOracle::Subspace(s) => complexify(&s.support(real_parts(x).as_slice())),
            NormOracle::SubspaceDual(s) => {
                let (_, c) = s.max_pairing(real_parts(x).as_slice())?;
                complexify(&c)
            }
            NormOracle::Sum { mode, parts } => {
                let (a, b) = split(x, parts.0.dim());
                let (sa, sb) = (&parts.0, &parts.1);
                let (na, nb) = (sa.norm(&a), sb.norm(&b));
                let (fa, fb) = match mode {
                    SumMode::Inf if na >= nb => (sa.support_functional(&a)?, DVector::zeros(sb.dim())),
                    SumMode::Inf => (DVector::zeros(sa.dim()), sb.support_functional(&b)?),
                    SumMode::One => {
                        let fa = if na > 0.0 {
                            sa.support_functional(&a)?
                        } else {
                            any_unit_functional(sa)?
                        };
                        let fb = if nb > 0.0 {
                            sb.support_functional(&b)?
                        } else {
                            any_unit_functional(sb)?
                        };
                        (fa, fb)
                    }
                };
                DVector::from_iterator(x.len(), fa.iter().chain(fb.iter()).copied())
            }
            NormOracle::Custom(c) => (c.support)(x),
        })
    }
}

fn any_unit_functional(space: &Space) -> Result<DVector<C64>> {
    let mut e = DVector::zeros(space.dim());
    e[0] = C64::new(1.0, 0.0);
    space.support_functional(&e)
}

pub(crate) fn lp_norm(x: &DVector<C64>, p: f64) -> f64 {
    if p.is_infinite() {
        x.iter().map(|z| z.norm()).fold(0.0, f64::max)
    } else if p == 1.0 {
        x.iter().map(|z| z.norm()).sum()
    } else if p == 2.0 {
        x.norm()
    } else {
        // scale first to avoid overflow for large p
        let m = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if m == 0.0 {
            return 0.0;
        }
        m * x.iter().map(|z| (z.norm() / m).powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

fn lp_support(x: &DVector<C64>, p: f64) -> DVector<C64> {
    let n = lp_norm(x, p);
    if p.is_infinite() {
        let (i, _) = x
            .iter()
            .enumerate()
            .fold((0, -1.0), |b, (i, z)| if z.norm() > b.1 { (i, z.norm()) } else { b });
        let mut f = DVector::zeros(x.len());
        f[i] = x[i].conj() / x[i].norm();
        return f;
    }
    x.map(|z| {
        let a = z.norm();
        if a == 0.0 {
            C64::new(0.0, 0.0)
        } else {
            z.conj() / a * (a / n).powf(p - 1.0)
        }
    })
}

pub(crate) fn dual_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

pub(crate) fn real_parts(x: &DVector<C64>) -> DVector<f64> {
    x.map(|z| z.re)
}

pub(crate) fn complexify(x: &DVector<f64>) -> DVector<C64> {
    x.map(|r| C64::new(r, 0.0))
}

fn split(x: &DVector<C64>, at: usize) -> (DVector<C64>, DVector<C64>) {
    (x.rows(0, at).into_owned(), x.rows(at, x.len() - at).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(xs: &[f64]) -> DVector<C64> {
        DVector::from_iterator(xs.len(), xs.iter().map(|&r| C64::new(r, 0.0)))
    }

    #[test]
    fn lp_norms_and_supports() {
        let x = c(&[3.0, -4.0]);
        assert!((lp_norm(&x, 2.0) - 5.0).abs() < 1e-12);
        assert!((lp_norm(&x, 1.0) - 7.0).abs() < 1e-12);
        assert!((lp_norm(&x, f64::INFINITY) - 4.0).abs() < 1e-12);
        for p in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            let f = lp_support(&x, p);
            let pairing: C64 = f.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
            assert!((pairing.re - lp_norm(&x, p)).abs() < 1e-12, "p = {p}");
            assert!(pairing.im.abs() < 1e-12);
            assert!((lp_norm(&f, dual_exponent(p)) - 1.0).abs() < 1e-12, "p = {p}");
        }
    }

    #[test]
    fn complex_lp_support() {
        let x = DVector::from_vec(vec![C64::new(1.0, 2.0), C64::new(-0.5, 0.25)]);
        let f = lp_support(&x, 3.0);
        let pairing: C64 = f.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
        assert!((pairing - C64::new(lp_norm(&x, 3.0), 0.0)).norm() < 1e-12);
        assert!((lp_norm(&f, 1.5) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn subspace_extension_matches_section_support() {
        // plane a + b + c = 0 inside l_inf^3
        let facets: Vec<DVector<f64>> = (0..3)
            .flat_map(|i| {
                let mut e = DVector::zeros(3);
                e[i] = 1.0;
                [e.clone(), -e]
            })
            .collect();
        let basis = DMatrix::from_column_slice(3, 2, &[-1., 1., 0., -1., 0., 1.]);
        let s = SubspaceNorm::new(facets, basis).unwrap();
        for g in [[1.0, 0.0], [0.3, -0.7], [2.0, 1.0]] {
            let ext = s.min_extension_norm(&g).unwrap();
            let (sup, _) = s.max_pairing(&g).unwrap();
            assert!((ext - sup).abs() < 1e-9, "{ext} vs {sup}");
        }
        assert_eq!(s.min_extension_norm(&[0.0, 0.0]).unwrap(), 0.0);
    }
}
