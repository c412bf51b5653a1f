use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::expr::SpaceExpr;
use crate::error::{Error, Result};
use crate::seed;
use crate::spaces::enumerate::{dedup_vectors, DEFAULT_ENUMERATION_BUDGET};
use crate::spaces::{
    dual_space, signed_basis, Field, NormOracle, Polytope, Representation, Space, SubspaceNorm, SumMode,
};

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    /// Vertex-enumeration budget for exact sections; larger sections stay oracles.
    pub section_budget: u64,
    /// Largest total dimension for which a sum of polytopes is materialised.
    pub product_dim_limit: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            section_budget: DEFAULT_ENUMERATION_BUDGET,
            product_dim_limit: 6,
        }
    }
}

pub fn build_space(expr: &SpaceExpr) -> Result<Space> {
    build_space_with(expr, &BuildOptions::default())
}

pub fn build_space_with(expr: &SpaceExpr, opts: &BuildOptions) -> Result<Space> {
    let name = expr.to_string();
    match expr {
        SpaceExpr::Linf(n) => Ok(Space::from_polytope(Polytope::cube(*n)?, name)),
        SpaceExpr::L1(n) => Ok(Space::from_polytope(Polytope::cross(*n)?, name)),
        SpaceExpr::Lp(n, p) if *p == 1.0 => Ok(Space::from_polytope(Polytope::cross(*n)?, name)),
        SpaceExpr::Lp(n, p) if *p == 2.0 => Space::from_oracle(Field::Real, *n, NormOracle::Hilbert, name),
        SpaceExpr::Lp(n, p) => Space::from_oracle(Field::Real, *n, NormOracle::Lp { p: *p }, name),
        SpaceExpr::Hilbert(n, field) => Space::from_oracle(*field, *n, NormOracle::Hilbert, name),
        SpaceExpr::Polygon(n) => Ok(Space::from_polytope(polygon(*n)?, name)),
        SpaceExpr::HexQuot => {
            let cube = signed_basis(3);
            section_space(&cube, None, None, &[vec![1.0, 1.0, 1.0]], name, opts)
        }
        SpaceExpr::SumInf(a, b) | SpaceExpr::Sum1(a, b) => {
            let mode = if matches!(expr, SpaceExpr::SumInf(..)) {
                SumMode::Inf
            } else {
                SumMode::One
            };
            let (a, b) = (build_space_with(a, opts)?, build_space_with(b, opts)?);
            Ok(sum_spaces(&a, &b, mode, opts)?.with_expr(name))
        }
        SpaceExpr::Dual(e) => Ok(dual_space(&build_space_with(e, opts)?)?.with_expr(name)),
        SpaceExpr::Ker(e, fs) => {
            let inner = build_space_with(e, opts)?;
            for f in fs {
                Error::check_dim(inner.dim(), f.len())?;
            }
            kernel(&inner, fs, name, opts)
        }
        SpaceExpr::XTrunc(n) | SpaceExpr::X2Trunc(n) => {
            let fs = vec![truncation_functional(*n, matches!(expr, SpaceExpr::XTrunc(_)))];
            section_space(&signed_basis(3 * (n + 1)), None, None, &fs, name, opts)
        }
    }
}

/// `a (+)_inf b` or `a (+)_1 b`: an explicit polytope when both parts are
/// polytopes of small total dimension, a sum oracle otherwise.
pub fn sum_spaces(a: &Space, b: &Space, mode: SumMode, opts: &BuildOptions) -> Result<Space> {
    if a.field() != b.field() {
        return Err(Error::Semantic("sum of spaces over different fields".into()));
    }
    let name = match mode {
        SumMode::Inf => format!("sum_inf({}, {})", a.expr(), b.expr()),
        SumMode::One => format!("sum_1({}, {})", a.expr(), b.expr()),
    };
    if let (Some(pa), Some(pb)) = (a.polytope(), b.polytope()) {
        if pa.dim() + pb.dim() <= opts.product_dim_limit {
            let p = match mode {
                SumMode::Inf => Polytope::sum_inf(pa, pb)?,
                SumMode::One => Polytope::sum_one(pa, pb)?,
            };
            return Ok(Space::from_polytope(p, name));
        }
    }
    let (field, dim) = (a.field(), a.dim() + b.dim());
    let parts = std::sync::Arc::new((a.clone(), b.clone()));
    Space::from_oracle(field, dim, NormOracle::Sum { mode, parts }, name)
}

/// Ball spanned by the `2n`-th roots of unity; one vertex sits at `(1, 0)`.
fn polygon(n: usize) -> Result<Polytope> {
    let snap = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    let point = |t: f64| DVector::from_vec(vec![snap(t.cos()), snap(t.sin())]);
    let half: Vec<DVector<f64>> = (0..n).map(|k| point(k as f64 * PI / n as f64)).collect();
    let inradius = (PI / (2 * n) as f64).cos();
    let normals: Vec<DVector<f64>> = (0..n)
        .map(|k| point((2 * k + 1) as f64 * PI / (2 * n) as f64) / inradius)
        .collect();
    let with_negatives = |v: Vec<DVector<f64>>| -> Vec<DVector<f64>> {
        let neg: Vec<DVector<f64>> = v.iter().map(|x| -x).collect();
        v.into_iter().chain(neg).collect()
    };
    Polytope::from_parts(with_negatives(half), with_negatives(normals))
}

/// Coordinates `b * (n + 1) + j` of block `b`; `j = n` is the limit.
fn truncation_functional(n: usize, limits: bool) -> Vec<f64> {
    let mut f = vec![0.0; 3 * (n + 1)];
    let j = if limits { n } else { 0 };
    for b in 0..3 {
        f[b * (n + 1) + j] = 1.0;
    }
    f
}

/// Kernel of `functionals` inside `inner`.
fn kernel(inner: &Space, functionals: &[Vec<f64>], name: String, opts: &BuildOptions) -> Result<Space> {
    match inner.rep() {
        Representation::Polytope(p) => section_space(p.facets(), None, inner.embedding(), functionals, name, opts),
        Representation::Oracle(NormOracle::Subspace(s)) => section_space(
            s.ambient_facets(),
            Some(s.basis()),
            inner.embedding(),
            functionals,
            name,
            opts,
        ),
        Representation::Oracle(NormOracle::Hilbert) => {
            let n = null_space(inner.dim(), functionals)?;
            let q = n.clone().qr().q();
            let embedding = match inner.embedding() {
                Some(e) => e * &q,
                None => q,
            };
            Space::from_oracle(inner.field(), embedding.ncols(), NormOracle::Hilbert, name)?.with_embedding(embedding)
        }
        _ => Err(Error::unsupported(format!(
            "kernel of a space without polyhedral or Hilbert structure ({})",
            inner.expr()
        ))),
    }
}

/// Section of the polyhedral ball `{x : a . x <= 1}` by the kernel of
/// `functionals`, where `x = base * y` and the functionals act on `y`.
fn section_space(
    ambient_facets: &[DVector<f64>],
    base: Option<&DMatrix<f64>>,
    embedding: Option<&DMatrix<f64>>,
    functionals: &[Vec<f64>],
    name: String,
    opts: &BuildOptions,
) -> Result<Space> {
    let inner_dim = base.map_or_else(|| ambient_facets[0].len(), |b| b.ncols());
    let kernel = null_space(inner_dim, functionals)?;
    let basis = match base {
        Some(b) => b * &kernel,
        None => kernel.clone(),
    };
    let embedding = match embedding {
        Some(e) => e * &kernel,
        None => basis.clone(),
    };
    match section_polytope(ambient_facets, &basis, opts.section_budget) {
        Ok(p) => Space::from_polytope(p, name).with_embedding(embedding),
        Err(Error::Unsupported(_)) => {
            let s = SubspaceNorm::new(ambient_facets.to_vec(), basis)?;
            let dim = s.dim();
            Space::from_oracle(Field::Real, dim, NormOracle::Subspace(Arc::new(s)), name)?.with_embedding(embedding)
        }
        Err(e) => Err(e),
    }
}

/// Basis of the common kernel of `functionals` on `R^dim`, one column per
/// free variable of the reduced row echelon form. Integer input with unit
/// pivots gives an integer basis.
pub fn null_space(dim: usize, functionals: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    const PIVOT_TOL: f64 = 1e-12;
    for f in functionals {
        Error::check_dim(dim, f.len())?;
    }
    let mut a = DMatrix::from_fn(functionals.len(), dim, |i, j| functionals[i][j]);
    let scale = a.amax().max(1.0);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..dim {
        if row == a.nrows() {
            break;
        }
        let (best, val) = (row..a.nrows())
            .map(|r| (r, a[(r, col)].abs()))
            .fold((row, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= PIVOT_TOL * scale {
            continue;
        }
        a.swap_rows(row, best);
        let p = a[(row, col)];
        for j in 0..dim {
            a[(row, j)] /= p;
        }
        for r in 0..a.nrows() {
            if r != row && a[(r, col)] != 0.0 {
                let m = a[(r, col)];
                for j in 0..dim {
                    a[(r, j)] -= m * a[(row, j)];
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    if free.is_empty() {
        return Err(Error::Semantic("kernel is trivial".into()));
    }
    let mut n = DMatrix::zeros(dim, free.len());
    for (k, &fc) in free.iter().enumerate() {
        n[(fc, k)] = 1.0;
        for (r, &pc) in pivots.iter().enumerate() {
            n[(pc, k)] = -a[(r, fc)];
        }
    }
    Ok(n)
}

/// Exact section `{y : a . (basis * y) <= 1}` of a polyhedral ball.
pub fn section_polytope(ambient_facets: &[DVector<f64>], basis: &DMatrix<f64>, budget: u64) -> Result<Polytope> {
    let restricted: Vec<DVector<f64>> = ambient_facets
        .iter()
        .map(|a| basis.tr_mul(a))
        .filter(|r| r.amax() > 1e-12)
        .collect();
    Polytope::from_halfspaces(basis.ncols(), &dedup_vectors(&restricted), budget)
}

/// Vertices of `ambient ∩ span(basis)` in the coordinates of `basis`.
pub fn section_vertices(ambient: &Polytope, basis: &[DVector<f64>]) -> Result<Vec<DVector<f64>>> {
    if basis.is_empty() {
        return Err(Error::input("empty subspace basis"));
    }
    for b in basis {
        Error::check_dim(ambient.dim(), b.len())?;
    }
    let m = DMatrix::from_columns(basis);
    Ok(section_polytope(ambient.facets(), &m, DEFAULT_ENUMERATION_BUDGET)?
        .vertices()
        .to_vec())
}

/// Absolutely convex hull of `k` seeded points with angles in `[0, pi)` and
/// radii in `[1/2, 1]`.
pub fn random_polygon_space(seed: u64, k: usize) -> Result<Space> {
    if k < 2 {
        return Err(Error::Semantic("random polygon needs at least 2 points".into()));
    }
    let mut rng = seed::rng(seed);
    let points: Vec<DVector<f64>> = (0..k)
        .map(|_| {
            let t: f64 = rng.random_range(0.0..PI);
            let r: f64 = rng.random_range(0.5..=1.0);
            DVector::from_vec(vec![r * t.cos(), r * t.sin()])
        })
        .collect();
    let p = Polytope::from_vertices(2, &points, DEFAULT_ENUMERATION_BUDGET)?;
    Ok(Space::from_polytope(p, format!("random_polygon(seed={seed}, k={k})")))
}

/// A truncation space together with `linf(3N) (+)_inf hexquot` and the
/// linear map between their coordinates that is claimed to be an isometry.
#[derive(Clone, Debug)]
pub struct TruncationSplit {
    pub space: Space,
    pub split: Space,
    pub map: DMatrix<f64>,
}

/// The coordinate split of `xtrunc(N)` or `x2trunc(N)`: unconstrained
/// coordinates go to `linf(3N)` in order, the constrained triple to `hexquot`.
pub fn truncation_split(expr: &SpaceExpr) -> Result<TruncationSplit> {
    let (n, limits) = match expr {
        SpaceExpr::XTrunc(n) => (*n, true),
        SpaceExpr::X2Trunc(n) => (*n, false),
        _ => return Err(Error::input("truncation_split needs xtrunc or x2trunc")),
    };
    let space = build_space(expr)?;
    let split = build_space(&SpaceExpr::SumInf(
        Box::new(SpaceExpr::Linf(3 * n)),
        Box::new(SpaceExpr::HexQuot),
    ))?;
    let hex = build_space(&SpaceExpr::HexQuot)?;
    let e = space
        .embedding()
        .ok_or_else(|| Error::Internal("truncation without embedding".into()))?;
    let h = hex
        .embedding()
        .ok_or_else(|| Error::Internal("hexquot without embedding".into()))?;
    let h_pinv = h.clone().pseudo_inverse(1e-12).map_err(|m| Error::Internal(m.into()))?;
    let j = if limits { n } else { 0 };
    let constrained: Vec<usize> = (0..3).map(|b| b * (n + 1) + j).collect();
    let free: Vec<usize> = (0..3 * (n + 1)).filter(|i| !constrained.contains(i)).collect();
    let mut map = DMatrix::zeros(space.dim(), space.dim());
    for (r, &i) in free.iter().enumerate() {
        map.set_row(r, &e.row(i));
    }
    let triple = DMatrix::from_rows(&constrained.iter().map(|&i| e.row(i).into_owned()).collect::<Vec<_>>());
    let hex_coords = h_pinv * triple;
    for r in 0..hex_coords.nrows() {
        map.set_row(free.len() + r, &hex_coords.row(r));
    }
    Ok(TruncationSplit { space, split, map })
}

/// Largest `| ||x|| - ||M x|| |` over seeded random points, where `M` is the
/// split map of [`truncation_split`].
pub fn verify_truncation_split(expr: &SpaceExpr, samples: usize, seed: u64) -> Result<f64> {
    let ts = truncation_split(expr)?;
    let mut rng = seed::rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let x = DVector::from_fn(ts.space.dim(), |_, _| rng.random_range(-1.0..1.0));
        let y = &ts.map * &x;
        worst = worst.max((ts.space.norm_real(x.as_slice()) - ts.split.norm_real(y.as_slice())).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::parse_space_expr;
    use crate::spaces::{validate_space, OracleFamily};

    fn build(s: &str) -> Space {
        build_space(&parse_space_expr(s).unwrap()).unwrap()
    }

    fn contains(set: &[DVector<f64>], v: &[f64]) -> bool {
        set.iter().any(|w| w.iter().zip(v).all(|(a, b)| (a - b).abs() < 1e-12))
    }

    #[test]
    fn polygon_two_is_rotated_square() {
        let s = build("polygon(2)");
        let p = s.polytope().unwrap();
        assert_eq!(p.vertices().len(), 4);
        for v in [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]] {
            assert!(contains(p.vertices(), &v));
        }
        // (x, y) -> (x + y, x - y) / 1 sends the l1 ball onto the l_inf ball.
        let linf = build("linf(2)");
        for v in p.vertices() {
            let w = [v[0] + v[1], v[0] - v[1]];
            assert!((linf.norm_real(&w) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn polygons_validate() {
        for n in 2..=8 {
            let s = build(&format!("polygon({n})"));
            let p = s.polytope().unwrap();
            assert_eq!(p.vertices().len(), 2 * n);
            assert_eq!(p.facets().len(), 2 * n);
            assert!(p.incidence().iter().all(|f| f.len() == 2));
            assert!(validate_space(&s, 200, n as u64).is_clean(), "polygon({n})");
        }
    }

    #[test]
    fn hexquot_is_the_cube_section() {
        let s = build("hexquot");
        let p = s.polytope().unwrap();
        assert_eq!(p.vertices().len(), 6);
        assert_eq!(p.facets().len(), 6);
        let e = s.embedding().unwrap();
        let ambient: Vec<DVector<f64>> = p.vertices().iter().map(|v| e * v).collect();
        let expected = [
            [1.0, 0.0, -1.0],
            [1.0, -1.0, 0.0],
            [0.0, 1.0, -1.0],
            [-1.0, 1.0, 0.0],
            [-1.0, 0.0, 1.0],
            [0.0, -1.0, 1.0],
        ];
        for v in expected {
            assert!(contains(&ambient, &v), "{v:?}");
            assert!(contains(&ambient, &[v[1], v[2], v[0]]));
        }
        assert!(validate_space(&s, 200, 3).is_clean());
    }

    #[test]
    fn section_vertex_examples() {
        let cube2 = Polytope::cube(2).unwrap();
        let vs = section_vertices(&cube2, &[DVector::from_vec(vec![1.0, 1.0])]).unwrap();
        assert_eq!(vs.len(), 2);
        assert!(contains(&vs, &[1.0]) && contains(&vs, &[-1.0]));
        let cross2 = Polytope::cross(2).unwrap();
        let vs = section_vertices(&cross2, &[DVector::from_vec(vec![1.0, 0.0])]).unwrap();
        assert_eq!(vs.len(), 2);
        let cube3 = Polytope::cube(3).unwrap();
        let basis = [
            DVector::from_vec(vec![1.0, -1.0, 0.0]),
            DVector::from_vec(vec![0.0, 1.0, -1.0]),
        ];
        let vs = section_vertices(&cube3, &basis).unwrap();
        assert_eq!(vs.len(), 6);
        for v in &vs {
            let x = DVector::from_vec(vec![v[0], v[1] - v[0], -v[1]]);
            assert!((cube3.norm(x.as_slice()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn null_space_is_integral_for_unit_pivots() {
        let n = null_space(3, &[vec![1.0, 1.0, 1.0]]).unwrap();
        assert_eq!(n.ncols(), 2);
        assert_eq!(n.column(0).as_slice(), &[-1.0, 1.0, 0.0]);
        assert_eq!(n.column(1).as_slice(), &[-1.0, 0.0, 1.0]);
        let n = null_space(4, &[vec![1.0, 2.0, 0.0, 1.0], vec![2.0, 4.0, 1.0, 0.0]]).unwrap();
        let a = DMatrix::from_row_slice(2, 4, &[1.0, 2.0, 0.0, 1.0, 2.0, 4.0, 1.0, 0.0]);
        assert!((a * &n).amax() < 1e-12);
        assert_eq!(n.ncols(), 2);
        assert!(null_space(1, &[vec![1.0]]).is_err());
    }

    #[test]
    fn xtrunc_one_is_exact_and_splits() {
        let s = build("xtrunc(1)");
        assert_eq!(s.dim(), 5);
        let p = s.polytope().expect("exact section");
        assert_eq!(p.vertices().len(), 48);
        assert_eq!(p.facets().len(), 6 + 6);
        let worst = verify_truncation_split(&SpaceExpr::XTrunc(1), 2000, 7).unwrap();
        assert!(worst < 1e-9, "{worst}");
        let worst = verify_truncation_split(&SpaceExpr::X2Trunc(1), 2000, 7).unwrap();
        assert!(worst < 1e-9, "{worst}");
    }

    #[test]
    fn larger_truncations_split() {
        for n in 2..=3 {
            for e in [SpaceExpr::XTrunc(n), SpaceExpr::X2Trunc(n)] {
                let worst = verify_truncation_split(&e, 500, n as u64).unwrap();
                assert!(worst < 1e-9, "{e}: {worst}");
            }
        }
        let s = build("xtrunc(3)");
        assert_eq!(s.dim(), 11);
        assert_eq!(s.oracle().map(|o| o.family()), Some(OracleFamily::SubspaceOfPolytope));
    }

    #[test]
    fn sums_switch_to_oracles_above_the_limit() {
        let small = build("sum_inf(linf(2), polygon(3))");
        assert!(small.polytope().is_some());
        assert_eq!(small.dim(), 4);
        assert!(build("sum_inf(linf(4), polygon(3))").polytope().is_some());
        let big = build("sum_inf(linf(5), polygon(3))");
        assert_eq!(big.oracle().map(|o| o.family()), Some(OracleFamily::Sum(SumMode::Inf)));
        let x = [0.3, -0.9, 0.1, 0.0, 0.2, 0.5, 0.5];
        assert!((big.norm_real(&x) - 0.9f64.max(build("polygon(3)").norm_real(&[0.5, 0.5]))).abs() < 1e-12);
        let one = build("sum_1(hilbert(2, real), l1(1))");
        assert!((one.norm_real(&[3.0, 4.0, -2.0]) - 7.0).abs() < 1e-12);
        assert!(build_space(&parse_space_expr("sum_inf(hilbert(1, complex), linf(1))").unwrap()).is_err());
    }

    #[test]
    fn lp_special_cases() {
        assert!(build("lp(3, 1)").polytope().is_some());
        assert!(build("lp(3, 2)").is_hilbert());
        assert_eq!(
            build("lp(3, 3)").oracle().map(|o| o.family()),
            Some(OracleFamily::Lp(3.0))
        );
    }

    #[test]
    fn kernels_of_oracles() {
        let s = build("ker(hilbert(3, real); [1, 1, 1])");
        assert!(s.is_hilbert());
        assert_eq!(s.dim(), 2);
        let e = s.embedding().unwrap();
        assert!((e.tr_mul(e) - DMatrix::identity(2, 2)).amax() < 1e-12);
        let k = build("ker(xtrunc(3); [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0])");
        assert_eq!(k.dim(), 10);
        assert!(build_space(&parse_space_expr("ker(lp(3, 3); [1, 1, 1])").unwrap()).is_err());
        assert!(matches!(
            build_space(&parse_space_expr("ker(linf(3); [1, 1])").unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn random_polygon_is_seeded() {
        let a = random_polygon_space(5, 6).unwrap();
        let b = random_polygon_space(5, 6).unwrap();
        assert_eq!(a.polytope(), b.polytope());
        assert!(a.polytope().unwrap().vertices().len() >= 4);
        assert!(validate_space(&a, 200, 1).is_clean());
    }
}
