use nalgebra::DVector;

use super::enumerate::{close, dedup_vectors, enumerate_vertices, rank};
use crate::error::{Error, Result};
use crate::TAU_GEOM;

/// Unit ball of a real polyhedral norm, stored in double description.
///
/// `facets` are the functionals `f` whose hyperplanes `{f = 1}` carry the
/// facets of the ball; they are exactly the vertices of the polar body.
/// `incidence[i]` lists the facets containing vertex `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<DVector<f64>>,
    facets: Vec<DVector<f64>>,
    incidence: Vec<Vec<usize>>,
}

/// Largest cube/cross-polytope materialised explicitly.
pub const MAX_EXPLICIT_DIM: usize = 16;

impl Polytope {
    /// Assembles a polytope from both descriptions and computes the incidence
    /// table. No geometric validation is done here; see
    /// [`crate::spaces::validate_space`].
    pub fn from_parts(vertices: Vec<DVector<f64>>, facets: Vec<DVector<f64>>) -> Result<Self> {
        let dim = vertices
            .first()
            .map(|v| v.len())
            .ok_or_else(|| Error::input("polytope without vertices"))?;
        if dim == 0 {
            return Err(Error::input("zero-dimensional polytope"));
        }
        if facets.is_empty() {
            return Err(Error::input("polytope without facets"));
        }
        for x in vertices.iter().chain(facets.iter()) {
            Error::check_dim(dim, x.len())?;
        }
        let incidence = vertices
            .iter()
            .map(|v| {
                facets
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| (f.dot(v) - 1.0).abs() <= TAU_GEOM)
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        Ok(Self {
            dim,
            vertices,
            facets,
            incidence,
        })
    }

    /// The ball `{x : a . x <= 1}` for the symmetric closure of `halfspaces`.
    pub fn from_halfspaces(dim: usize, halfspaces: &[DVector<f64>], budget: u64) -> Result<Self> {
        let mut hs: Vec<DVector<f64>> = Vec::with_capacity(2 * halfspaces.len());
        for a in halfspaces {
            hs.push(a.clone());
            hs.push(-a);
        }
        let hs = dedup_vectors(&hs);
        let vertices = symmetrize(enumerate_vertices(dim, &hs, budget)?);
        let facets: Vec<DVector<f64>> = hs
            .into_iter()
            .filter(|a| {
                let on: Vec<DVector<f64>> = vertices
                    .iter()
                    .filter(|v| (a.dot(v) - 1.0).abs() <= TAU_GEOM)
                    .cloned()
                    .collect();
                rank(&on, dim) == dim
            })
            .collect();
        Self::from_parts(vertices, facets)
    }

    /// The absolutely convex hull of `points`.
    pub fn from_vertices(dim: usize, points: &[DVector<f64>], budget: u64) -> Result<Self> {
        Ok(Self::from_halfspaces(dim, points, budget)?.polar())
    }

    /// Unit ball of `l_inf^n`.
    pub fn cube(n: usize) -> Result<Self> {
        check_explicit(n)?;
        let vertices = (0..1usize << n)
            .map(|mask| DVector::from_fn(n, |i, _| if mask >> i & 1 == 0 { 1.0 } else { -1.0 }))
            .collect();
        Self::from_parts(vertices, signed_basis(n))
    }

    /// Unit ball of `l_1^n`.
    pub fn cross(n: usize) -> Result<Self> {
        Ok(Self::cube(n)?.polar())
    }

    /// Polar body: vertices and facets swap roles.
    pub fn polar(&self) -> Self {
        let mut incidence = vec![Vec::new(); self.facets.len()];
        for (i, fs) in self.incidence.iter().enumerate() {
            for &j in fs {
                incidence[j].push(i);
            }
        }
        Self {
            dim: self.dim,
            vertices: self.facets.clone(),
            facets: self.vertices.clone(),
            incidence,
        }
    }

    /// Ball of the `inf`-sum: all vertex pairs, facets of either factor.
    pub fn sum_inf(a: &Self, b: &Self) -> Result<Self> {
        let (da, db) = (a.dim, b.dim);
        let vertices = a
            .vertices
            .iter()
            .flat_map(|va| b.vertices.iter().map(move |vb| concat(va, vb)))
            .collect();
        let facets = a
            .facets
            .iter()
            .map(|fa| concat(fa, &DVector::zeros(db)))
            .chain(b.facets.iter().map(|fb| concat(&DVector::zeros(da), fb)))
            .collect();
        Self::from_parts(vertices, facets)
    }

    /// Ball of the `1`-sum, the polar of the `inf`-sum of the polars.
    pub fn sum_one(a: &Self, b: &Self) -> Result<Self> {
        Ok(Self::sum_inf(&a.polar(), &b.polar())?.polar())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[DVector<f64>] {
        &self.facets
    }

    pub fn incidence(&self) -> &[Vec<usize>] {
        &self.incidence
    }

    /// Gauge of the ball: `max_f f . x`.
    pub fn norm(&self, x: &[f64]) -> f64 {
        self.facets.iter().map(|f| dot(f.as_slice(), x)).fold(0.0, f64::max)
    }

    /// Norm of a functional: `max_v |f . v|`.
    pub fn dual_norm(&self, f: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| dot(v.as_slice(), f).abs())
            .fold(0.0, f64::max)
    }

    /// Index of a facet functional attaining the norm of `x`.
    pub fn supporting_facet(&self, x: &[f64]) -> usize {
        let mut best = (0, f64::NEG_INFINITY);
        for (j, f) in self.facets.iter().enumerate() {
            let val = dot(f.as_slice(), x);
            if val > best.1 {
                best = (j, val);
            }
        }
        best.0
    }

    /// All incident (vertex, facet) index pairs.
    pub fn incident_pairs(&self) -> Vec<(usize, usize)> {
        self.incidence
            .iter()
            .enumerate()
            .flat_map(|(i, fs)| fs.iter().map(move |&j| (i, j)))
            .collect()
    }

    /// Incident pairs with one representative of each `(x, f) ~ (-x, -f)`
    /// class; `f(Tx)` is the same on both members.
    pub fn incident_pairs_mod_sign(&self) -> Vec<(usize, usize)> {
        let neg_vertex: Vec<Option<usize>> = self
            .vertices
            .iter()
            .map(|v| {
                let nv = -v;
                self.vertices.iter().position(|w| close(w, &nv))
            })
            .collect();
        let neg_facet: Vec<Option<usize>> = self
            .facets
            .iter()
            .map(|f| {
                let nf = -f;
                self.facets.iter().position(|g| close(g, &nf))
            })
            .collect();
        self.incident_pairs()
            .into_iter()
            .filter(|&(i, j)| match (neg_vertex[i], neg_facet[j]) {
                (Some(ni), Some(nj)) => (i, j) <= (ni, nj),
                _ => true,
            })
            .collect()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn concat(a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
    DVector::from_iterator(a.len() + b.len(), a.iter().chain(b.iter()).copied())
}

pub(crate) fn signed_basis(n: usize) -> Vec<DVector<f64>> {
    (0..n)
        .flat_map(|i| {
            let mut e = DVector::zeros(n);
            e[i] = 1.0;
            [e.clone(), -e]
        })
        .collect()
}

fn check_explicit(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Semantic("dimension must be at least 1".into()));
    }
    if n > MAX_EXPLICIT_DIM {
        return Err(Error::unsupported(format!(
            "explicit cube of dimension {n} exceeds {MAX_EXPLICIT_DIM}"
        )));
    }
    Ok(())
}

/// Replaces each `-v` partner by the exact negation of `v` so the vertex set
/// is symmetric bit for bit.
pub(crate) fn symmetrize(points: Vec<DVector<f64>>) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(points.len());
    for p in points {
        let np = -&p;
        if out.iter().any(|q| close(q, &p) || close(q, &np)) {
            continue;
        }
        out.push(p);
        out.push(np);
    }
    out
}
