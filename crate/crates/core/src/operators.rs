//! Linear operators on a [`Space`]: norms, adjoints and seeded generators.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::seed;
use crate::spaces::{complexify, dual_space, Field, NormOracle, Representation, Space, SubspaceNorm};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMethod {
    /// Maximum of `||T v||` over the vertices of a polytope ball.
    ExactVertices,
    /// Largest singular value.
    Spectral,
    /// One linear program per facet of the ambient polytope.
    FacetLp,
    /// Multistart ascent for the lower bound, a coarse relaxation above.
    Ascent,
}

/// Operator norm with a two-sided enclosure `lower <= ||T|| <= upper`.
#[derive(Clone, Debug)]
pub struct NormEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub lower: f64,
    pub upper: f64,
    /// Unit vector with `||T x|| = lower`.
    pub argmax: DVector<C64>,
    pub method: NormMethod,
}

impl NormEstimate {
    fn exact(value: f64, argmax: DVector<C64>, method: NormMethod) -> Self {
        Self {
            value,
            error_bound: 0.0,
            lower: value,
            upper: value,
            argmax,
            method,
        }
    }
}

/// A square matrix acting on a space. Immutable; the norm is computed once.
#[derive(Clone, Debug)]
pub struct Operator {
    matrix: DMatrix<C64>,
    space: Space,
    norm: OnceLock<NormEstimate>,
}

impl Operator {
    pub fn new(space: Space, matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::input(format!(
                "operator matrix is {}x{}, not square",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Error::check_dim(space.dim(), matrix.nrows())?;
        if space.field() == Field::Real && matrix.iter().any(|z| z.im != 0.0) {
            return Err(Error::input("complex entries for an operator on a real space"));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::input("non-finite operator entry"));
        }
        Ok(Self {
            matrix,
            space,
            norm: OnceLock::new(),
        })
    }

    pub fn from_real(space: Space, matrix: &DMatrix<f64>) -> Result<Self> {
        Self::new(space, matrix.map(|x| C64::new(x, 0.0)))
    }

    pub fn identity(space: Space) -> Self {
        let n = space.dim();
        Self::new(space, DMatrix::identity(n, n)).expect("identity fits its space")
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Real parts of the entries; exact on real spaces.
    pub fn real_matrix(&self) -> DMatrix<f64> {
        self.matrix.map(|z| z.re)
    }

    pub fn apply(&self, x: &DVector<C64>) -> DVector<C64> {
        &self.matrix * x
    }

    pub fn norm(&self) -> &NormEstimate {
        self.norm.get_or_init(|| norm_of_matrix(&self.space, &self.matrix))
    }

    pub fn scaled(&self, c: C64) -> Result<Self> {
        Self::new(self.space.clone(), self.matrix.map(|z| z * c))
    }

    /// `Id + c T`.
    pub fn identity_plus(&self, c: C64) -> Self {
        let mut m = self.matrix.map(|z| z * c);
        for i in 0..m.nrows() {
            m[(i, i)] += C64::new(1.0, 0.0);
        }
        Self::new(self.space.clone(), m).expect("same shape and field")
    }
}

pub fn op_norm(t: &Operator) -> NormEstimate {
    t.norm().clone()
}

/// Norm of `matrix` on `space` without an [`Operator`] wrapper.
pub fn norm_of_matrix(space: &Space, matrix: &DMatrix<C64>) -> NormEstimate {
    match space.rep() {
        Representation::Polytope(p) => {
            let m = matrix.map(|z| z.re);
            let (best, value) = p
                .vertices()
                .iter()
                .enumerate()
                .map(|(i, v)| (i, p.norm((&m * v).as_slice())))
                .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
            NormEstimate::exact(value, complexify(&p.vertices()[best]), NormMethod::ExactVertices)
        }
        Representation::Oracle(NormOracle::Hilbert) => {
            let svd = matrix.clone().svd(false, true);
            let (k, s) = svd.singular_values.argmax();
            let v_t = svd.v_t.expect("requested");
            let x = v_t.row(k).transpose().map(|z| z.conj());
            NormEstimate::exact(s, x, NormMethod::Spectral)
        }
        Representation::Oracle(NormOracle::Subspace(s)) => {
            let (value, x, _) = subspace_norm(s, &matrix.map(|z| z.re));
            NormEstimate::exact(value, complexify(&x), NormMethod::FacetLp)
        }
        Representation::Oracle(NormOracle::SubspaceDual(s)) => {
            // ||T|| = ||T^t|| on the predual, attained at the maximising facet.
            let (value, _, r) = subspace_norm(s, &matrix.map(|z| z.re).transpose());
            let rn = s.min_extension_norm(r.as_slice()).unwrap_or(1.0);
            NormEstimate::exact(value, complexify(&(r / rn)), NormMethod::FacetLp)
        }
        Representation::Oracle(_) => ascent_norm(space, matrix),
    }
}

/// `||T||` on a subspace of a polytope space is the largest dual norm of
/// `T^t r` over the restricted facets `r`, one extension LP each. Returns
/// the value, a maximising unit vector and the maximising facet.
fn subspace_norm(s: &SubspaceNorm, m: &DMatrix<f64>) -> (f64, DVector<f64>, DVector<f64>) {
    let mut best = (f64::NEG_INFINITY, DVector::zeros(s.dim()), DVector::zeros(s.dim()));
    for r in s.restricted_facets() {
        let g = m.tr_mul(r);
        if let Ok((v, x)) = s.max_pairing(g.as_slice()) {
            if v > best.0 {
                best = (v, x, r.clone());
            }
        }
    }
    best.0 = best.0.max(0.0);
    best
}

const ASCENT_STARTS: usize = 64;
const ASCENT_ITERS: usize = 200;

fn ascent_norm(space: &Space, matrix: &DMatrix<C64>) -> NormEstimate {
    let dual = dual_space(space).ok();
    let base = seed::derive(0, "op-norm-ascent");
    let runs: Vec<(f64, DVector<C64>)> = (0..ASCENT_STARTS)
        .into_par_iter()
        .map(|s| ascend(space, dual.as_ref(), matrix, seed::derive_index(base, s as u64)))
        .collect();
    let (lower, argmax) = runs
        .into_iter()
        .fold((f64::NEG_INFINITY, DVector::zeros(space.dim())), |acc, r| {
            if r.0 > acc.0 {
                r
            } else {
                acc
            }
        });
    let upper = norm_upper_bound(space, dual.as_ref(), matrix).max(lower);
    let (value, error_bound) = if upper.is_finite() {
        (0.5 * (lower + upper), 0.5 * (upper - lower))
    } else {
        (lower, f64::INFINITY)
    };
    NormEstimate {
        value,
        error_bound,
        lower,
        upper,
        argmax,
        method: NormMethod::Ascent,
    }
}

fn random_unit(space: &Space, rng: &mut impl Rng) -> DVector<C64> {
    loop {
        let x = DVector::from_fn(space.dim(), |_, _| match space.field() {
            Field::Real => C64::new(rng.random_range(-1.0..1.0), 0.0),
            Field::Complex => C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
        });
        let n = space.norm(&x);
        if n > 1e-12 {
            return x / C64::new(n, 0.0);
        }
    }
}

/// Alternates power steps through the dual with random perturbations.
fn ascend(space: &Space, dual: Option<&Space>, m: &DMatrix<C64>, seed: u64) -> (f64, DVector<C64>) {
    let mut rng = seed::rng(seed);
    let mut x = random_unit(space, &mut rng);
    let mut val = space.norm(&(m * &x));
    let mut sigma = 0.5;
    let mut power = dual.is_some();
    for _ in 0..ASCENT_ITERS {
        if power {
            let step = dual.and_then(|d| {
                let y = m * &x;
                if space.norm(&y) == 0.0 {
                    return None;
                }
                let g = space.support_functional(&y).ok()?;
                let h = m.transpose() * g;
                if d.norm(&h) == 0.0 {
                    return None;
                }
                let x2 = d.support_functional(&h).ok()?;
                let n2 = space.norm(&x2);
                (n2 > 0.0).then(|| x2 / C64::new(n2, 0.0))
            });
            match step {
                Some(x2) => {
                    let v2 = space.norm(&(m * &x2));
                    if v2 > val + 1e-15 * val.max(1.0) {
                        x = x2;
                        val = v2;
                        continue;
                    }
                    power = false;
                }
                None => power = false,
            }
        }
        let d = random_unit(space, &mut rng);
        let cand = &x + d * C64::new(sigma, 0.0);
        let n = space.norm(&cand);
        if n < 1e-12 {
            continue;
        }
        let cand = cand / C64::new(n, 0.0);
        let v = space.norm(&(m * &cand));
        if v > val {
            x = cand;
            val = v;
            sigma = (sigma * 1.5).min(1.0);
            power = dual.is_some();
        } else {
            sigma = (sigma * 0.5).max(1e-9);
        }
    }
    (val, x)
}

/// `sum_j ||e_j^*||_* ||T e_j||`, and Riesz-Thorin for `l_p`.
fn norm_upper_bound(space: &Space, dual: Option<&Space>, m: &DMatrix<C64>) -> f64 {
    let n = space.dim();
    let mut bound = f64::INFINITY;
    if let Some(d) = dual {
        let mut total = 0.0;
        for j in 0..n {
            let mut e = DVector::zeros(n);
            e[j] = C64::new(1.0, 0.0);
            total += d.norm(&e) * space.norm(&m.column(j).into_owned());
        }
        bound = bound.min(total);
    }
    if let Some(NormOracle::Lp { p }) = space.oracle() {
        let col = (0..n)
            .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max);
        let row = (0..n)
            .map(|i| m.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max);
        let rt = if p.is_infinite() {
            row
        } else {
            col.powf(1.0 / p) * row.powf(1.0 - 1.0 / p)
        };
        bound = bound.min(rt);
    }
    bound
}

/// `T*` on the dual space: the transpose, since functionals act bilinearly.
pub fn adjoint(t: &Operator) -> Result<Operator> {
    let dual = dual_space(t.space())?;
    Operator::new(dual, t.matrix().transpose())
}

/// Entries uniform in `[-scale, scale]`; real and imaginary parts are drawn
/// independently on complex spaces.
pub fn random_operator(space: &Space, seed: u64, scale: f64) -> Result<Operator> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::input(format!("operator scale must be positive, got {scale}")));
    }
    let mut rng = seed::rng(seed);
    let n = space.dim();
    let complex = space.field() == Field::Complex;
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let re: f64 = rng.random_range(-1.0..=1.0);
            let im: f64 = if complex { rng.random_range(-1.0..=1.0) } else { 0.0 };
            m[(i, j)] = C64::new(re * scale, im * scale);
        }
    }
    Operator::new(space.clone(), m)
}
