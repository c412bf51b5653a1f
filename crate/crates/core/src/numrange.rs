//! Numerical range and numerical radius engines.
//!
//! Four independent methods: exact enumeration of extreme dual pairs on
//! polytopes, Hermitian-part eigenvalues on Hilbert spaces, the limit
//! formula `v(T) = max_w lim_{a->0} (||Id + a w T|| - 1) / a`, and sampling of
//! dual pairs (a lower bound).

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{norm_of_matrix, NormEstimate, NormMethod, Operator};
use crate::seed;
use crate::spaces::{pairing, random_vector, DualPair, Field, Polytope};
use crate::{C64, TAU_PAIR};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusMethod {
    ExactEnumeration,
    HilbertEigen,
    LimitFormula,
    Sampling,
}

/// How `error_bound` encloses the true radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `|v(T) - value| <= error_bound`.
    TwoSided,
    /// `v(T) >= value`; the gap above is unknown.
    Lower,
}

#[derive(Clone, Debug)]
pub struct RadiusCertificate {
    pub value: f64,
    pub witness: DualPair,
    pub method: RadiusMethod,
    pub error_bound: f64,
    pub bound_kind: BoundKind,
}

impl RadiusCertificate {
    /// `|f(T x)|` of the witness pair.
    pub fn witness_value(&self, t: &Operator) -> f64 {
        self.witness.evaluate(t.matrix()).norm()
    }
}

/// Step sizes for the limit formula and the size of the complex `w` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaSchedule {
    alphas: Vec<f64>,
    omega_grid: usize,
    stop_tol: f64,
}

impl Default for AlphaSchedule {
    fn default() -> Self {
        Self {
            alphas: (1..=24).map(|k| 0.5f64.powi(k)).collect(),
            omega_grid: 720,
            stop_tol: 1e-10,
        }
    }
}

impl AlphaSchedule {
    pub fn new(alphas: Vec<f64>, omega_grid: usize, stop_tol: f64) -> Result<Self> {
        if alphas.is_empty() || alphas.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
            return Err(Error::input("step sizes must be positive and finite"));
        }
        if alphas.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::input("step sizes must be strictly decreasing"));
        }
        if omega_grid < 4 {
            return Err(Error::input("complex grid needs at least 4 points"));
        }
        Ok(Self {
            alphas,
            omega_grid,
            stop_tol,
        })
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn omega_grid(&self) -> usize {
        self.omega_grid
    }
}

/// Largest `|f(T v)|` over incident (vertex, facet) pairs; returns the value
/// and the maximising pair.
pub(crate) fn polytope_radius(p: &Polytope, m: &DMatrix<f64>) -> (f64, usize, usize) {
    let mut best = (f64::NEG_INFINITY, 0, 0);
    for (i, v) in p.vertices().iter().enumerate() {
        let tv = m * v;
        for &j in &p.incidence()[i] {
            let val = p.facets()[j].dot(&tv).abs();
            if val > best.0 {
                best = (val, i, j);
            }
        }
    }
    best
}

pub fn radius_exact_polytope(t: &Operator) -> Result<RadiusCertificate> {
    let p = t
        .space()
        .polytope()
        .ok_or_else(|| Error::unsupported("exact enumeration needs a real polytope space"))?;
    let (value, i, j) = polytope_radius(p, &t.real_matrix());
    Ok(RadiusCertificate {
        value,
        witness: DualPair::from_real(&p.vertices()[i], &p.facets()[j]),
        method: RadiusMethod::ExactEnumeration,
        error_bound: 0.0,
        bound_kind: BoundKind::TwoSided,
    })
}

/// Largest eigenvalue of a Hermitian matrix with a unit eigenvector.
fn hermitian_top(h: &DMatrix<C64>) -> (f64, DVector<C64>) {
    let eig = SymmetricEigen::new(h.clone());
    let (k, &lam) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, &f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    (lam, eig.eigenvectors.column(k).into_owned())
}

/// Largest eigenvalue of the Hermitian part of `e^{i theta} m`.
pub(crate) fn hermitian_part_max(m: &DMatrix<C64>, theta: f64) -> f64 {
    let w = C64::from_polar(1.0, theta);
    if m.nrows() == 2 {
        let a = (w * m[(0, 0)]).re;
        let d = (w * m[(1, 1)]).re;
        let b = 0.5 * (w * m[(0, 1)] + (w * m[(1, 0)]).conj());
        let h = 0.5 * (a - d);
        return 0.5 * (a + d) + (h * h + b.norm_sqr()).sqrt();
    }
    let wm = m * w;
    let h = (&wm + wm.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    eig.eigenvalues.max()
}

/// Maximises a `2 pi`-periodic function: grid search, then golden-section
/// refinement around the best few local maxima of the grid.
pub(crate) fn maximize_on_circle(f: impl Fn(f64) -> f64, grid: usize) -> (f64, f64) {
    let h = 2.0 * PI / grid as f64;
    let vals: Vec<f64> = (0..grid).map(|k| f(k as f64 * h)).collect();
    let mut peaks: Vec<usize> = (0..grid)
        .filter(|&k| vals[k] >= vals[(k + grid - 1) % grid] && vals[k] >= vals[(k + 1) % grid])
        .collect();
    peaks.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));
    peaks.truncate(4);
    let mut best = (vals[peaks[0]], peaks[0] as f64 * h);
    for &k in &peaks {
        let (t, v) = golden_max(&f, k as f64 * h - h, k as f64 * h + h);
        if v > best.0 {
            best = (v, t);
        }
    }
    (best.1, best.0)
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..60 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

pub fn radius_hilbert(t: &Operator) -> Result<RadiusCertificate> {
    radius_hilbert_with_grid(t, AlphaSchedule::default().omega_grid)
}

pub fn radius_hilbert_with_grid(t: &Operator, grid: usize) -> Result<RadiusCertificate> {
    if !t.space().is_hilbert() {
        return Err(Error::unsupported("eigenvalue engine needs a Hilbert space"));
    }
    let m = t.matrix();
    match t.space().field() {
        Field::Real => {
            let r = t.real_matrix();
            let s = (&r + r.transpose()) * 0.5;
            let eig = SymmetricEigen::new(s);
            let (k, lam) = eig.eigenvalues.iter().enumerate().fold((0, 0.0f64), |acc, (i, &l)| {
                if l.abs() > acc.1.abs() || i == 0 {
                    (i, l)
                } else {
                    acc
                }
            });
            let x = eig.eigenvectors.column(k).into_owned();
            Ok(RadiusCertificate {
                value: lam.abs(),
                witness: DualPair::from_real(&x, &x),
                method: RadiusMethod::HilbertEigen,
                error_bound: 0.0,
                bound_kind: BoundKind::TwoSided,
            })
        }
        Field::Complex => {
            let (theta, _) = maximize_on_circle(|th| hermitian_part_max(m, th), grid);
            let wm = m * C64::from_polar(1.0, theta);
            let (lam, x) = hermitian_top(&((&wm + wm.adjoint()) * C64::new(0.5, 0.0)));
            let f = x.map(|z| z.conj());
            let norm = t.norm();
            Ok(RadiusCertificate {
                value: lam.max(0.0),
                witness: DualPair::new(x, f),
                method: RadiusMethod::HilbertEigen,
                error_bound: PI / grid as f64 * norm.upper,
                bound_kind: BoundKind::TwoSided,
            })
        }
    }
}

/// Relative floating-point accuracy assumed for a norm evaluation.
fn norm_noise(est: &NormEstimate) -> f64 {
    let rel = match est.method {
        NormMethod::FacetLp => 1e-9,
        _ => 8.0 * f64::EPSILON,
    };
    est.error_bound + rel * est.value.max(1.0)
}

/// `(||Id + alpha w T|| - 1) / alpha` with its rounding error.
pub fn phi(t: &Operator, omega: C64, alpha: f64) -> (f64, f64) {
    let (v, noise, _) = phi_full(t, omega, alpha);
    (v, noise)
}

fn phi_full(t: &Operator, omega: C64, alpha: f64) -> (f64, f64, DVector<C64>) {
    let m = t.identity_plus(omega * alpha);
    let est = norm_of_matrix(t.space(), m.matrix());
    ((est.value - 1.0) / alpha, norm_noise(&est) / alpha, est.argmax)
}

pub fn radius_limit_formula(t: &Operator, schedule: &AlphaSchedule) -> Result<RadiusCertificate> {
    let complex = t.space().field() == Field::Complex;
    let mut prev: Option<f64> = None;
    let mut last = None;
    for &alpha in &schedule.alphas {
        let (omega, value, noise, x) = if complex {
            let (theta, _) = maximize_on_circle(|th| phi(t, C64::from_polar(1.0, th), alpha).0, schedule.omega_grid);
            let omega = C64::from_polar(1.0, theta);
            let (v, n, x) = phi_full(t, omega, alpha);
            (omega, v, n, x)
        } else {
            let one = C64::new(1.0, 0.0);
            let (vp, np, xp) = phi_full(t, one, alpha);
            let (vm, nm, xm) = phi_full(t, -one, alpha);
            if vp >= vm {
                (one, vp, np, xp)
            } else {
                (-one, vm, nm, xm)
            }
        };
        let tail = prev.map_or(f64::INFINITY, |p: f64| (p - value).abs());
        last = Some((alpha, omega, value, noise, tail, x));
        if tail < schedule.stop_tol || noise > tail {
            break;
        }
        prev = Some(value);
    }
    let (alpha, omega, value, noise, tail, x) = last.expect("schedule is nonempty");
    let grid_err = if complex {
        PI / schedule.omega_grid as f64 * t.norm().upper
    } else {
        0.0
    };
    let tail = if tail.is_finite() { tail } else { value.abs() };
    Ok(RadiusCertificate {
        value: value.max(0.0),
        witness: limit_witness(t, &x, omega, alpha),
        method: RadiusMethod::LimitFormula,
        error_bound: tail + noise + grid_err,
        bound_kind: BoundKind::TwoSided,
    })
}

/// Dual pair at the norm-attaining vector of `Id + alpha w T`.
fn limit_witness(t: &Operator, x: &DVector<C64>, omega: C64, alpha: f64) -> DualPair {
    let space = t.space();
    let nx = space.norm(x);
    let x = if nx > 0.0 { x / C64::new(nx, 0.0) } else { x.clone() };
    let image = &x + t.apply(&x) * (omega * alpha);
    let plain = space.support_functional(&x).ok().map(|f| DualPair::new(x.clone(), f));
    let tilted = space
        .support_functional(&image)
        .ok()
        .map(|f| DualPair::new(x.clone(), f));
    match (plain, tilted) {
        (_, Some(p)) if p.defect <= TAU_PAIR => p,
        (Some(p), _) => p,
        (None, Some(p)) => p,
        (None, None) => DualPair::new(x.clone(), DVector::zeros(x.len())),
    }
}

/// `max |f(T x)|` over seeded random unit `x` and their supporting `f`.
pub fn radius_lower_sampling(t: &Operator, samples: usize, seed: u64) -> Result<RadiusCertificate> {
    let space = t.space();
    let mut rng = seed::rng(seed);
    let mut best: Option<(f64, DualPair)> = None;
    for _ in 0..samples.max(1) {
        let x = random_vector(space, &mut rng);
        let n = space.norm(&x);
        if n < 1e-12 {
            continue;
        }
        let x = x / C64::new(n, 0.0);
        let f = space.support_functional(&x)?;
        let pair = DualPair::new(x, f);
        let v = pair.evaluate(t.matrix()).norm();
        if best.as_ref().is_none_or(|b| v > b.0) {
            best = Some((v, pair));
        }
    }
    let (value, witness) = best.ok_or_else(|| Error::Internal("no usable samples".into()))?;
    Ok(RadiusCertificate {
        value,
        witness,
        method: RadiusMethod::Sampling,
        error_bound: 0.0,
        bound_kind: BoundKind::Lower,
    })
}

/// Exact enumeration on polytopes, eigenvalues on Hilbert spaces, otherwise
/// the limit formula checked against sampling.
pub fn radius_auto(t: &Operator) -> Result<RadiusCertificate> {
    if t.space().polytope().is_some() {
        return radius_exact_polytope(t);
    }
    if t.space().is_hilbert() {
        return radius_hilbert(t);
    }
    let upper = radius_limit_formula(t, &AlphaSchedule::default())?;
    let lower = radius_lower_sampling(t, 256, seed::derive(0, "radius-auto"))?;
    if lower.value > upper.value + upper.error_bound + 1e-9 {
        return Err(Error::Internal(format!(
            "sampled radius {} exceeds limit-formula bound {} + {}",
            lower.value, upper.value, upper.error_bound
        )));
    }
    Ok(upper)
}

/// Points `f(T x)` of the numerical range: every extreme dual pair on a
/// polytope, `resolution` seeded samples otherwise.
pub fn numerical_range_points(t: &Operator, resolution: usize) -> Result<Vec<C64>> {
    if let Some(p) = t.space().polytope() {
        let m = t.real_matrix();
        return Ok(p
            .incident_pairs()
            .into_iter()
            .map(|(i, j)| C64::new(p.facets()[j].dot(&(&m * &p.vertices()[i])), 0.0))
            .collect());
    }
    let space = t.space();
    let mut rng = seed::rng(seed::derive(0, "range-points"));
    let mut out = Vec::with_capacity(resolution);
    while out.len() < resolution {
        let x = random_vector(space, &mut rng);
        let n = space.norm(&x);
        if n < 1e-12 {
            continue;
        }
        let x = x / C64::new(n, 0.0);
        let f = space.support_functional(&x)?;
        out.push(pairing(&f, &t.apply(&x)));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct EqualityReport {
    pub radius: f64,
    pub norm: f64,
    /// `max_w ||Id + w T||`.
    pub max_identity_plus: f64,
    /// Whether `v(T) = ||T||`.
    pub radius_equals_norm: bool,
    /// Whether `max_w ||Id + w T|| = 1 + ||T||`.
    pub identity_plus_equals: bool,
    pub tolerance: f64,
}

impl EqualityReport {
    pub fn consistent(&self) -> bool {
        self.radius_equals_norm == self.identity_plus_equals
    }
}

pub fn check_radius_norm_equality(t: &Operator) -> Result<EqualityReport> {
    let radius = radius_auto(t)?;
    let norm = t.norm().clone();
    let eval = |w: C64| {
        let est = norm_of_matrix(t.space(), t.identity_plus(w).matrix());
        (est.value, norm_noise(&est))
    };
    let (max_identity_plus, noise) = match t.space().field() {
        Field::Real => {
            let (a, b) = (eval(C64::new(1.0, 0.0)), eval(C64::new(-1.0, 0.0)));
            if a.0 >= b.0 {
                a
            } else {
                b
            }
        }
        Field::Complex => {
            let (theta, _) = maximize_on_circle(|th| eval(C64::from_polar(1.0, th)).0, 720);
            eval(C64::from_polar(1.0, theta))
        }
    };
    let scale = 1.0 + norm.value;
    let tolerance = 1e-9 * scale + norm_noise(&norm) + noise + radius.error_bound;
    Ok(EqualityReport {
        radius: radius.value,
        norm: norm.value,
        max_identity_plus,
        radius_equals_norm: (norm.value - radius.value).abs() <= tolerance,
        identity_plus_equals: (scale - max_identity_plus).abs() <= tolerance,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_space, parse_space_expr};
    use crate::operators::{adjoint, random_operator};
    use crate::spaces::Space;

    fn space(s: &str) -> Space {
        build_space(&parse_space_expr(s).unwrap()).unwrap()
    }

    fn op(s: &str, rows: &[f64]) -> Operator {
        let sp = space(s);
        let n = sp.dim();
        Operator::from_real(sp, &DMatrix::from_row_slice(n, n, rows)).unwrap()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// `max |f(T v)|` over every vertex and every facet through it, written
    /// without the incidence table.
    fn brute_radius(t: &Operator) -> f64 {
        let p = t.space().polytope().unwrap();
        let m = t.real_matrix();
        let mut best: f64 = 0.0;
        for v in p.vertices() {
            for f in p.facets() {
                if (f.dot(v) - 1.0).abs() < 1e-9 {
                    best = best.max(f.dot(&(&m * v)).abs());
                }
            }
        }
        best
    }

    #[test]
    fn identity_on_polytopes() {
        for s in ["linf(3)", "l1(3)", "hexquot", "polygon(5)"] {
            let cert = radius_exact_polytope(&Operator::identity(space(s))).unwrap();
            assert_eq!(cert.value, 1.0);
            assert_eq!(cert.error_bound, 0.0);
        }
    }

    #[test]
    fn swap_and_nilpotent_on_the_square() {
        let swap = op("linf(2)", &[0.0, 1.0, 1.0, 0.0]);
        let cert = radius_exact_polytope(&swap).unwrap();
        assert!((cert.value - 1.0).abs() < 1e-15);
        assert!((cert.witness_value(&swap) - 1.0).abs() < 1e-15);
        let nil = op("linf(2)", &[0.0, 1.0, 0.0, 0.0]);
        let exact = radius_exact_polytope(&nil).unwrap();
        assert!((exact.value - brute_radius(&nil)).abs() < 1e-15);
        let lim = radius_limit_formula(&nil, &AlphaSchedule::default()).unwrap();
        assert!((lim.value - exact.value).abs() <= lim.error_bound + 1e-9);
    }

    #[test]
    fn exact_radius_matches_brute_force() {
        for s in ["linf(3)", "l1(3)", "hexquot", "polygon(4)", "xtrunc(1)"] {
            let sp = space(s);
            for seed in 0..20 {
                let t = random_operator(&sp, seed, 1.0).unwrap();
                assert!((radius_exact_polytope(&t).unwrap().value - brute_radius(&t)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hilbert_examples() {
        let j = op("hilbert(2, real)", &[0.0, -1.0, 1.0, 0.0]);
        assert!(radius_hilbert(&j).unwrap().value < 1e-15);
        let sp = space("hilbert(2, complex)");
        let nil = Operator::new(
            sp.clone(),
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]),
        )
        .unwrap();
        let cert = radius_hilbert(&nil).unwrap();
        assert!((cert.value - 0.5).abs() < 1e-12, "{}", cert.value);
        assert!((cert.witness_value(&nil) - 0.5).abs() < 1e-9);
        assert!(cert.witness.defect < 1e-12);
        let herm = Operator::new(
            sp,
            DMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(1.0, 1.0), c(1.0, -1.0), c(-3.0, 0.0)]),
        )
        .unwrap();
        // Eigenvalues of a Hermitian matrix: (-1 +- sqrt(25 + 8)) / 2.
        let rho = (1.0 + 33f64.sqrt()) / 2.0;
        assert!((radius_hilbert(&herm).unwrap().value - rho).abs() < 1e-12);
    }

    #[test]
    fn limit_formula_on_rotation_matches_closed_form() {
        let j = op("hilbert(2, real)", &[0.0, -1.0, 1.0, 0.0]);
        for k in 1..10 {
            let a = 0.5f64.powi(k);
            let (v, _) = phi(&j, C64::new(1.0, 0.0), a);
            assert!((v - ((1.0 + a * a).sqrt() - 1.0) / a).abs() < 1e-12);
        }
        let cert = radius_limit_formula(&j, &AlphaSchedule::default()).unwrap();
        assert!(cert.value <= cert.error_bound + 1e-9, "{cert:?}");
        assert!(cert.value < 1e-6);
    }

    #[test]
    fn identity_limit_formula() {
        for s in ["linf(2)", "hilbert(2, complex)", "hexquot"] {
            let id = Operator::identity(space(s));
            for k in 1..6 {
                assert!((phi(&id, C64::new(1.0, 0.0), 0.5f64.powi(k)).0 - 1.0).abs() < 1e-12);
            }
            let cert = radius_limit_formula(&id, &AlphaSchedule::default()).unwrap();
            assert!((cert.value - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn sandwich_and_monotonicity() {
        for s in ["linf(2)", "l1(2)", "hexquot", "hilbert(2, real)", "hilbert(2, complex)"] {
            let sp = space(s);
            for seed in 0..10 {
                let t = random_operator(&sp, seed, 1.0).unwrap();
                let best = radius_auto(&t).unwrap();
                let lim = radius_limit_formula(&t, &AlphaSchedule::default()).unwrap();
                let low = radius_lower_sampling(&t, 200, seed).unwrap();
                assert!(low.value <= best.value + best.error_bound + 1e-12, "{s}");
                assert!(best.value <= lim.value + lim.error_bound + 1e-9, "{s}");
                assert!(
                    (best.value - lim.value).abs() <= lim.error_bound + best.error_bound + 1e-6,
                    "{s}"
                );
                let omega = if sp.field() == Field::Real {
                    C64::new(-1.0, 0.0)
                } else {
                    C64::from_polar(1.0, 0.7)
                };
                let alphas = AlphaSchedule::default();
                let vals: Vec<(f64, f64)> = alphas.alphas().iter().map(|&a| phi(&t, omega, a)).collect();
                for w in vals.windows(2) {
                    assert!(w[0].0 >= w[1].0 - 1e-12 - w[0].1 - w[1].1, "{s}: {vals:?}");
                }
            }
        }
    }

    #[test]
    fn adjoint_radius_on_polytopes() {
        for s in ["linf(3)", "l1(3)", "hexquot"] {
            let sp = space(s);
            for seed in 0..50 {
                let t = random_operator(&sp, seed, 1.0).unwrap();
                let a = adjoint(&t).unwrap();
                let (rt, ra) = (radius_exact_polytope(&t).unwrap(), radius_exact_polytope(&a).unwrap());
                assert!((rt.value - ra.value).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sampling_on_rotation_is_zero() {
        let j = op("hilbert(2, real)", &[0.0, -1.0, 1.0, 0.0]);
        assert!(radius_lower_sampling(&j, 500, 1).unwrap().value < 1e-12);
        let id = Operator::identity(space("lp(3, 3)"));
        assert!((radius_lower_sampling(&id, 1, 1).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equality_criterion_examples() {
        let id = Operator::identity(space("hexquot"));
        let r = check_radius_norm_equality(&id).unwrap();
        assert!(r.radius_equals_norm && r.identity_plus_equals);
        let swap = op("linf(2)", &[0.0, 1.0, 1.0, 0.0]);
        let r = check_radius_norm_equality(&swap).unwrap();
        assert!(r.radius_equals_norm && r.identity_plus_equals);
        assert!((r.max_identity_plus - 2.0).abs() < 1e-15);
        let j = op("hilbert(2, real)", &[0.0, -1.0, 1.0, 0.0]);
        let r = check_radius_norm_equality(&j).unwrap();
        assert!(!r.radius_equals_norm && !r.identity_plus_equals);
        assert!((r.max_identity_plus - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn range_points() {
        let id = Operator::identity(space("linf(2)"));
        assert!(numerical_range_points(&id, 0)
            .unwrap()
            .iter()
            .all(|z| (z - C64::new(1.0, 0.0)).norm() < 1e-15));
        let swap = op("linf(2)", &[0.0, 1.0, 1.0, 0.0]);
        let pts = numerical_range_points(&swap, 0).unwrap();
        assert_eq!(pts.len(), 8);
        assert!((pts.iter().map(|z| z.norm()).fold(0.0, f64::max) - 1.0).abs() < 1e-15);
        let sym = op("hilbert(2, real)", &[2.0, 1.0, 1.0, -1.0]);
        let eig = SymmetricEigen::new(sym.real_matrix()).eigenvalues;
        for z in numerical_range_points(&sym, 300).unwrap() {
            assert!(z.re >= eig.min() - 1e-12 && z.re <= eig.max() + 1e-12 && z.im == 0.0);
        }
    }

    #[test]
    fn schedule_validation() {
        assert!(AlphaSchedule::new(vec![0.5, 0.5], 720, 1e-10).is_err());
        assert!(AlphaSchedule::new(vec![0.5, -0.1], 720, 1e-10).is_err());
        assert!(AlphaSchedule::new(vec![], 720, 1e-10).is_err());
        assert!(AlphaSchedule::new(vec![0.5, 0.25], 720, 1e-10).is_ok());
    }
}
