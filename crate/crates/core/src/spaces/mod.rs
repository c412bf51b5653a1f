//! Finite-dimensional normed spaces: norm representations, duality and
//! extreme dual pairs.
//!
//! Functionals act on vectors through the bilinear pairing
//! `f(x) = sum_i f_i x_i` (no conjugation), so the dual of a space is again
//! described in the same coordinates and adjoints are plain transposes.

pub mod enumerate;
mod json;
mod oracle;
mod polytope;
mod validate;

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

pub use json::SpaceJson;
pub(crate) use oracle::{complexify, dual_exponent, real_parts};
pub use oracle::{CustomNorm, NormOracle, OracleFamily, SubspaceNorm, SumMode};
pub(crate) use polytope::signed_basis;
pub use polytope::Polytope;
pub(crate) use validate::random_vector;
pub use validate::{validate_space, ValidationReport, Violation};

use crate::error::{Error, Result};
use crate::{C64, TAU_PAIR};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

#[derive(Clone, Debug)]
pub enum Representation {
    Polytope(Arc<Polytope>),
    Oracle(NormOracle),
}

/// A finite-dimensional real or complex normed space.
#[derive(Clone, Debug)]
pub struct Space {
    field: Field,
    dim: usize,
    rep: Representation,
    expr: String,
    /// Columns span the space inside the ambient coordinates it was cut from.
    embedding: Option<Arc<DMatrix<f64>>>,
}

impl Space {
    pub fn from_polytope(p: Polytope, expr: impl Into<String>) -> Self {
        Self {
            field: Field::Real,
            dim: p.dim(),
            rep: Representation::Polytope(Arc::new(p)),
            expr: expr.into(),
            embedding: None,
        }
    }

    pub fn from_oracle(field: Field, dim: usize, oracle: NormOracle, expr: impl Into<String>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Semantic("dimension must be at least 1".into()));
        }
        match &oracle {
            NormOracle::Subspace(s) | NormOracle::SubspaceDual(s) => {
                if field == Field::Complex {
                    return Err(Error::unsupported("subspaces of polytopes are real"));
                }
                Error::check_dim(dim, s.dim())?;
            }
            NormOracle::Sum { parts, .. } => {
                Error::check_dim(dim, parts.0.dim() + parts.1.dim())?;
                if parts.0.field() != field || parts.1.field() != field {
                    return Err(Error::Semantic("sum of spaces over different fields".into()));
                }
            }
            NormOracle::Lp { p } if !(*p >= 1.0) => {
                return Err(Error::Semantic(format!("l_p needs p >= 1, got {p}")));
            }
            _ => {}
        }
        Ok(Self {
            field,
            dim,
            rep: Representation::Oracle(oracle),
            expr: expr.into(),
            embedding: None,
        })
    }

    pub fn with_embedding(mut self, basis: DMatrix<f64>) -> Result<Self> {
        Error::check_dim(self.dim, basis.ncols())?;
        self.embedding = Some(Arc::new(basis));
        Ok(self)
    }

    pub fn with_expr(mut self, expr: impl Into<String>) -> Self {
        self.expr = expr.into();
        self
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn expr(&self) -> &str {
        &self.expr
    }

    pub fn embedding(&self) -> Option<&DMatrix<f64>> {
        self.embedding.as_deref()
    }

    pub fn polytope(&self) -> Option<&Polytope> {
        match &self.rep {
            Representation::Polytope(p) => Some(p),
            Representation::Oracle(_) => None,
        }
    }

    pub fn oracle(&self) -> Option<&NormOracle> {
        match &self.rep {
            Representation::Oracle(o) => Some(o),
            Representation::Polytope(_) => None,
        }
    }

    pub fn is_hilbert(&self) -> bool {
        matches!(self.oracle(), Some(NormOracle::Hilbert))
    }

    /// Norm of `x`; the length is not checked (see [`norm_eval`]).
    pub fn norm(&self, x: &DVector<C64>) -> f64 {
        match &self.rep {
            Representation::Polytope(p) => p.norm(real_parts(x).as_slice()),
            Representation::Oracle(o) => o.norm(x),
        }
    }

    pub fn norm_real(&self, x: &[f64]) -> f64 {
        match &self.rep {
            Representation::Polytope(p) => p.norm(x),
            Representation::Oracle(NormOracle::Subspace(s)) => s.norm(x),
            Representation::Oracle(o) => o.norm(&complexify(&DVector::from_column_slice(x))),
        }
    }

    /// Norm-one functional `f` with `f(x) = ||x||`.
    pub fn support_functional(&self, x: &DVector<C64>) -> Result<DVector<C64>> {
        Error::check_dim(self.dim, x.len())?;
        if x.iter().all(|z| z.norm() == 0.0) {
            return Err(Error::input("support functional of the zero vector"));
        }
        match &self.rep {
            Representation::Polytope(p) => {
                let j = p.supporting_facet(real_parts(x).as_slice());
                Ok(complexify(&p.facets()[j]))
            }
            Representation::Oracle(o) => o.support(x),
        }
    }

    /// Norm of a functional on this space.
    pub fn dual_norm(&self, f: &DVector<C64>) -> Result<f64> {
        Error::check_dim(self.dim, f.len())?;
        Ok(match &self.rep {
            Representation::Polytope(p) => p.dual_norm(real_parts(f).as_slice()),
            Representation::Oracle(o) => match o {
                NormOracle::Lp { p } => oracle::lp_norm(f, dual_exponent(*p)),
                NormOracle::Hilbert => f.norm(),
                NormOracle::Subspace(s) => s.min_extension_norm(real_parts(f).as_slice())?,
                NormOracle::SubspaceDual(s) => s.norm(real_parts(f).as_slice()),
                _ => self.dual()?.norm(f),
            },
        })
    }

    /// The dual space `X*` in the same coordinates.
    pub fn dual(&self) -> Result<Space> {
        dual_space(self)
    }

    /// Coordinates of an ambient vector lying in the embedded subspace.
    pub fn coords_from_ambient(&self, ambient: &[f64]) -> Result<DVector<f64>> {
        let b = self
            .embedding()
            .ok_or_else(|| Error::unsupported("space has no ambient embedding"))?;
        Error::check_dim(b.nrows(), ambient.len())?;
        let y = DVector::from_column_slice(ambient);
        let c = b
            .clone()
            .svd(true, true)
            .solve(&y, 1e-12)
            .map_err(|e| Error::Internal(e.to_string()))?;
        if (b * &c - &y).amax() > 1e-9 {
            return Err(Error::input("vector does not lie in the subspace"));
        }
        Ok(c)
    }
}

/// Checked norm evaluation.
pub fn norm_eval(space: &Space, x: &[C64]) -> Result<f64> {
    Error::check_dim(space.dim(), x.len())?;
    if space.field() == Field::Real && x.iter().any(|z| z.im != 0.0) {
        return Err(Error::input("complex vector in a real space"));
    }
    Ok(space.norm(&DVector::from_column_slice(x)))
}

/// Dual space: polar polytope, conjugate exponent, or the matching oracle.
pub fn dual_space(space: &Space) -> Result<Space> {
    let expr = format!("dual({})", space.expr());
    match space.rep() {
        Representation::Polytope(p) => Ok(Space::from_polytope(p.polar(), expr)),
        Representation::Oracle(o) => {
            let dual = match o {
                NormOracle::Lp { p } => NormOracle::Lp { p: dual_exponent(*p) },
                NormOracle::Hilbert => NormOracle::Hilbert,
                NormOracle::Subspace(s) => NormOracle::SubspaceDual(s.clone()),
                NormOracle::SubspaceDual(s) => NormOracle::Subspace(s.clone()),
                NormOracle::Sum { mode, parts } => NormOracle::Sum {
                    mode: mode.dual(),
                    parts: Arc::new((parts.0.dual()?, parts.1.dual()?)),
                },
                NormOracle::Custom(c) => {
                    let d = c
                        .dual
                        .as_ref()
                        .ok_or_else(|| Error::unsupported(format!("custom norm '{}' has no dual", c.name)))?;
                    NormOracle::Custom(CustomNorm {
                        dual: Some(Arc::new(c.clone())),
                        ..(**d).clone()
                    })
                }
            };
            Space::from_oracle(space.field(), space.dim(), dual, expr)
        }
    }
}

/// Smallest norm of an extension of the subspace functional `g` to the
/// polyhedral `ambient` space (Hahn-Banach norm), by linear programming.
pub fn restricted_dual_norm(ambient: &Space, basis: &[DVector<f64>], g: &[f64]) -> Result<f64> {
    let p = ambient
        .polytope()
        .ok_or_else(|| Error::unsupported("restricted dual norm needs a polytope ambient"))?;
    Error::check_dim(basis.len(), g.len())?;
    for b in basis {
        Error::check_dim(p.dim(), b.len())?;
    }
    let b = DMatrix::from_columns(basis);
    SubspaceNorm::new(p.facets().to_vec(), b)?.min_extension_norm(g)
}

/// A unit vector and a unit functional with pairing (close to) one.
#[derive(Clone, Debug, PartialEq)]
pub struct DualPair {
    pub x: DVector<C64>,
    pub f: DVector<C64>,
    /// `|f(x) - 1|`
    pub defect: f64,
}

impl DualPair {
    pub fn new(x: DVector<C64>, f: DVector<C64>) -> Self {
        let defect = (pairing(&f, &x) - C64::new(1.0, 0.0)).norm();
        Self { x, f, defect }
    }

    pub fn from_real(x: &DVector<f64>, f: &DVector<f64>) -> Self {
        Self::new(complexify(x), complexify(f))
    }

    /// `f(T x)`.
    pub fn evaluate(&self, t: &DMatrix<C64>) -> C64 {
        pairing(&self.f, &(t * &self.x))
    }

    /// Whether `||x|| = 1`, `||f|| = 1` and the defect is within `TAU_PAIR`.
    pub fn is_valid(&self, space: &Space) -> Result<bool> {
        let nx = space.norm(&self.x);
        let nf = space.dual_norm(&self.f)?;
        Ok((nx - 1.0).abs() <= TAU_PAIR && (nf - 1.0).abs() <= TAU_PAIR && self.defect <= TAU_PAIR)
    }
}

pub fn pairing(f: &DVector<C64>, x: &DVector<C64>) -> C64 {
    f.iter().zip(x.iter()).map(|(a, b)| a * b).sum()
}

/// Every incident (vertex, facet) pair of a polyhedral space.
pub fn extreme_dual_pairs(space: &Space) -> Result<Vec<DualPair>> {
    let p = space
        .polytope()
        .ok_or_else(|| Error::unsupported("extreme dual pairs need an exact polytope; sample pairs instead"))?;
    Ok(p.incident_pairs()
        .into_iter()
        .map(|(i, j)| DualPair::from_real(&p.vertices()[i], &p.facets()[j]))
        .collect())
}
