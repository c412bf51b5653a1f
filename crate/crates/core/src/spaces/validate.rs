use nalgebra::DVector;
use rand::Rng;

use super::enumerate::{close, enumerate_vertices, enumeration_cost, DEFAULT_ENUMERATION_BUDGET};
use super::{pairing, Field, Polytope, Space};
use crate::lp::{LinearProgram, Sense};
use crate::seed;
use crate::{C64, TAU_GEOM};

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Violation {
    pub check: String,
    pub magnitude: f64,
    pub detail: String,
}

#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct ValidationReport {
    pub checks_run: usize,
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, check: &str) -> bool {
        self.violations.iter().any(|v| v.check == check)
    }

    fn check(&mut self, name: &str, magnitude: f64, tol: f64, detail: impl FnOnce() -> String) {
        self.checks_run += 1;
        if !(magnitude <= tol) {
            self.violations.push(Violation {
                check: name.to_string(),
                magnitude,
                detail: detail(),
            });
        }
    }
}

/// Checks the representation invariants of `space` and the norm axioms on
/// `samples` seeded random vectors. Violations are reported, never raised.
pub fn validate_space(space: &Space, samples: usize, seed: u64) -> ValidationReport {
    let mut report = ValidationReport::default();
    if let Some(p) = space.polytope() {
        validate_polytope(p, &mut report);
    }
    let mut rng = seed::rng(seed);
    let mut draw = || random_vector(space, &mut rng);
    for k in 0..samples {
        let x = draw();
        let y = draw();
        let nx = space.norm(&x);
        let ny = space.norm(&y);
        let scale = 1.0 + nx + ny;

        let c = C64::new(-1.7, if space.field() == Field::Complex { 0.6 } else { 0.0 });
        let ncx = space.norm(&x.map(|z| z * c));
        report.check("homogeneity", (ncx - c.norm() * nx).abs(), TAU_GEOM * scale, || {
            format!("sample {k}: ||cx|| = {ncx}, |c| ||x|| = {}", c.norm() * nx)
        });

        let nxy = space.norm(&(&x + &y));
        report.check("triangle", nxy - nx - ny, TAU_GEOM * scale, || {
            format!("sample {k}: ||x+y|| = {nxy} > {}", nx + ny)
        });

        if nx > 0.0 {
            match space.support_functional(&x) {
                Ok(f) => {
                    let val = pairing(&f, &x);
                    report.check(
                        "support-pairing",
                        (val - C64::new(nx, 0.0)).norm(),
                        TAU_GEOM * scale,
                        || format!("sample {k}: f(x) = {val}, ||x|| = {nx}"),
                    );
                    match space.dual_norm(&f) {
                        Ok(nf) => report.check("support-dual-norm", (nf - 1.0).abs(), TAU_GEOM, || {
                            format!("sample {k}: ||f|| = {nf}")
                        }),
                        Err(e) if k == 0 => report.notes.push(format!("dual norm unavailable: {e}")),
                        Err(_) => {}
                    }
                }
                Err(e) => report.check("support-available", f64::INFINITY, 0.0, || e.to_string()),
            }
        }

        if let (Some(p), true) = (space.polytope(), k < 16) {
            let xr = super::real_parts(&x);
            if let Some(g) = lp_gauge(p, xr.as_slice()) {
                report.check("gauge-lp", (g - nx).abs(), 1e-7 * scale, || {
                    format!("sample {k}: facet max {nx} vs LP gauge {g}")
                });
            }
        }
    }
    report
}

fn validate_polytope(p: &Polytope, report: &mut ValidationReport) {
    let dim = p.dim();
    for (i, v) in p.vertices().iter().enumerate() {
        let nv = -v;
        let gap = p
            .vertices()
            .iter()
            .map(|w| (w - &nv).amax())
            .fold(f64::INFINITY, f64::min);
        report.check("vertex-symmetry", gap, TAU_GEOM, || {
            format!("vertex {i} has no antipode")
        });
        let top = p.facets().iter().map(|f| f.dot(v)).fold(f64::NEG_INFINITY, f64::max);
        report.check("vertex-support", (top - 1.0).abs(), TAU_GEOM, || {
            format!("vertex {i}: max_f f(v) = {top}")
        });
    }
    for (j, f) in p.facets().iter().enumerate() {
        let nf = -f;
        let gap = p
            .facets()
            .iter()
            .map(|g| (g - &nf).amax())
            .fold(f64::INFINITY, f64::min);
        report.check("facet-symmetry", gap, TAU_GEOM, || format!("facet {j} has no antipode"));
        let top = p.vertices().iter().map(|v| f.dot(v)).fold(f64::NEG_INFINITY, f64::max);
        report.check("facet-support", (top - 1.0).abs(), TAU_GEOM, || {
            format!("facet {j}: max_v f(v) = {top}")
        });
        let on: Vec<DVector<f64>> = p
            .vertices()
            .iter()
            .filter(|v| (f.dot(v) - 1.0).abs() <= TAU_GEOM)
            .cloned()
            .collect();
        let rank = super::enumerate::rank(&on, dim);
        report.check("facet-degree", (dim - rank.min(dim)) as f64, 0.0, || {
            format!("facet {j} spans only {rank} of {dim} directions")
        });
    }

    // Polar consistency: recompute the polar's vertices from the vertex set.
    let cost = enumeration_cost(dim, p.vertices().len());
    if cost <= DEFAULT_ENUMERATION_BUDGET {
        match enumerate_vertices(dim, p.vertices(), DEFAULT_ENUMERATION_BUDGET) {
            Ok(polar_vertices) => {
                let missing = polar_vertices
                    .iter()
                    .filter(|u| !p.facets().iter().any(|f| close(f, u)))
                    .count();
                let extra = p
                    .facets()
                    .iter()
                    .filter(|f| !polar_vertices.iter().any(|u| close(f, u)))
                    .count();
                report.check("polar-roundtrip", (missing + extra) as f64, 0.0, || {
                    format!("{missing} polar vertices missing from facets, {extra} facets not polar vertices")
                });
            }
            Err(e) => report.check("polar-roundtrip", f64::INFINITY, 0.0, || e.to_string()),
        }
    } else {
        report.notes.push(format!("polar round-trip skipped ({cost} subsets)"));
    }
}

/// Gauge of `conv(vertices)` at `x`: `min sum(l) s.t. sum l_i v_i = x, l >= 0`.
fn lp_gauge(p: &Polytope, x: &[f64]) -> Option<f64> {
    let mut lp = LinearProgram::new(Sense::Minimize);
    let lam: Vec<usize> = p.vertices().iter().map(|_| lp.var(1.0, 0.0, f64::INFINITY)).collect();
    for (k, xk) in x.iter().enumerate() {
        let row: Vec<(usize, f64)> = lam.iter().zip(p.vertices()).map(|(&l, v)| (l, v[k])).collect();
        lp.eq(&row, *xk);
    }
    lp.solve().ok().map(|s| s.objective)
}

pub(crate) fn random_vector<R: Rng>(space: &Space, rng: &mut R) -> DVector<C64> {
    let complex = space.field() == Field::Complex;
    DVector::from_fn(space.dim(), |_, _| {
        let re = rng.random_range(-1.0..1.0);
        let im = if complex { rng.random_range(-1.0..1.0) } else { 0.0 };
        C64::new(re, im)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::NormOracle;

    #[test]
    fn cube_is_clean() {
        let s = Space::from_polytope(Polytope::cube(3).unwrap(), "linf(3)");
        let r = validate_space(&s, 50, 1);
        assert!(r.is_clean(), "{:?}", r.violations);
        assert!(r.checks_run > 100);
    }

    #[test]
    fn scaled_vertex_is_reported() {
        let c = Polytope::cube(2).unwrap();
        let mut vs = c.vertices().to_vec();
        vs[0] *= 1.01;
        let bad = Polytope::from_parts(vs, c.facets().to_vec()).unwrap();
        let r = validate_space(&Space::from_polytope(bad, "bad"), 10, 1);
        assert!(r.has("facet-support"));
        assert!(r.has("vertex-support"));
        for v in r.violations.iter().filter(|v| v.check.ends_with("-support")) {
            assert!((v.magnitude - 0.01).abs() < 1e-12, "{v:?}");
        }
    }

    #[test]
    fn complex_hilbert_is_clean() {
        let s = Space::from_oracle(Field::Complex, 2, NormOracle::Hilbert, "hilbert(2, complex)").unwrap();
        let r = validate_space(&s, 1000, 3);
        assert!(r.is_clean(), "{:?}", r.violations);
    }
}
