//! Property tests for operator norms and the numerical-radius engines.

use nalgebra::DMatrix;
use numlab::constructions::{build_space_with, BuildOptions};
use numlab::numrange::{
    phi, radius_exact_polytope, radius_hilbert, radius_limit_formula, radius_lower_sampling, AlphaSchedule,
};
use numlab::operators::{adjoint, norm_of_matrix, random_operator, NormMethod};
use numlab::{build_space, parse_space_expr, Operator, Space, C64};
use proptest::prelude::*;

fn space(s: &str) -> Space {
    build_space(&parse_space_expr(s).unwrap()).unwrap()
}

fn polytopes() -> Vec<Space> {
    ["linf(2)", "l1(2)", "hexquot", "linf(3)", "l1(3)", "polygon(5)"]
        .iter()
        .map(|s| space(s))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn norm_is_homogeneous(seed in any::<u64>(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        for e in ["hexquot", "hilbert(3, complex)", "lp(2, 3)", "xtrunc(2)"] {
            let s = space(e);
            let t = random_operator(&s, seed, 1.0).unwrap();
            let c = if s.field() == numlab::Field::Real { C64::new(re, 0.0) } else { C64::new(re, im) };
            let a = t.norm();
            let b = t.scaled(c).unwrap();
            let b = b.norm();
            let tol = b.error_bound + c.norm() * a.error_bound + 1e-9 * (1.0 + b.value);
            prop_assert!((b.value - c.norm() * a.value).abs() <= tol, "{e}: {} vs {}", b.value, c.norm() * a.value);
        }
    }

    #[test]
    fn adjoint_keeps_the_norm(seed in any::<u64>()) {
        for s in polytopes() {
            let t = random_operator(&s, seed, 1.0).unwrap();
            let ta = adjoint(&t).unwrap();
            prop_assert!((t.norm().value - ta.norm().value).abs() <= 1e-9 * t.norm().value.max(1.0));
        }
        for e in ["lp(2, 3)", "hilbert(2, complex)"] {
            let t = random_operator(&space(e), seed, 1.0).unwrap();
            let ta = adjoint(&t).unwrap();
            let tol = t.norm().error_bound + ta.norm().error_bound + 1e-9;
            prop_assert!((t.norm().value - ta.norm().value).abs() <= tol, "{e}");
        }
    }

    #[test]
    fn exact_norm_lies_in_the_oracle_enclosure(seed in any::<u64>()) {
        let e = parse_space_expr("sum_inf(linf(2), hexquot)").unwrap();
        let exact = build_space(&e).unwrap();
        let oracle = build_space_with(&e, &BuildOptions { product_dim_limit: 1, ..Default::default() }).unwrap();
        prop_assert!(exact.polytope().is_some() && oracle.oracle().is_some());
        let t = random_operator(&exact, seed, 1.0).unwrap();
        let a = t.norm();
        let b = norm_of_matrix(&oracle, t.matrix());
        prop_assert_eq!(a.method, NormMethod::ExactVertices);
        prop_assert!(b.lower <= a.value + 1e-9 && a.value <= b.upper + 1e-9,
            "{} not in [{}, {}]", a.value, b.lower, b.upper);
        prop_assert!((a.value - b.value).abs() <= b.error_bound + 1e-9);
    }

    #[test]
    fn sandwich(seed in any::<u64>()) {
        let schedule = AlphaSchedule::default();
        for e in ["linf(2)", "l1(2)", "hexquot"] {
            let t = random_operator(&space(e), seed, 1.0).unwrap();
            let exact = radius_exact_polytope(&t).unwrap().value;
            let lower = radius_lower_sampling(&t, 200, seed).unwrap().value;
            let limit = radius_limit_formula(&t, &schedule).unwrap();
            prop_assert!(lower <= exact + 1e-12, "{e}: lower {lower} > {exact}");
            prop_assert!(exact <= limit.value + limit.error_bound, "{e}: {exact} > {} + {}", limit.value, limit.error_bound);
            prop_assert!((limit.value - exact).abs() <= 1e-6, "{e}: limit {} exact {exact}", limit.value);
        }
    }

    #[test]
    fn adjoint_has_the_same_radius(seed in any::<u64>()) {
        for s in polytopes() {
            let t = random_operator(&s, seed, 1.0).unwrap();
            let a = radius_exact_polytope(&t).unwrap().value;
            let b = radius_exact_polytope(&adjoint(&t).unwrap()).unwrap().value;
            prop_assert!((a - b).abs() <= 1e-9, "{}: {a} vs {b}", s.expr());
        }
    }

    #[test]
    fn radius_is_homogeneous_and_below_the_norm(seed in any::<u64>(), c in -4.0f64..4.0, th in 0.0f64..6.3) {
        for s in polytopes() {
            let t = random_operator(&s, seed, 1.0).unwrap();
            let v = radius_exact_polytope(&t).unwrap().value;
            let vc = radius_exact_polytope(&t.scaled(C64::new(c, 0.0)).unwrap()).unwrap().value;
            prop_assert!((vc - c.abs() * v).abs() <= 1e-9 * (1.0 + vc));
            prop_assert!(v <= t.norm().value + 1e-12);
        }
        let h = space("hilbert(2, complex)");
        let t = random_operator(&h, seed, 1.0).unwrap();
        let w = C64::from_polar(c, th);
        let v = radius_hilbert(&t).unwrap();
        let vw = radius_hilbert(&t.scaled(w).unwrap()).unwrap();
        prop_assert!((vw.value - w.norm() * v.value).abs() <= vw.error_bound + w.norm() * v.error_bound + 1e-9);
        prop_assert!(v.value <= t.norm().value + v.error_bound + 1e-9);
    }

    #[test]
    fn limit_formula_decreases_along_the_schedule(seed in any::<u64>()) {
        let schedule = AlphaSchedule::default();
        for e in ["linf(2)", "hexquot", "hilbert(2, real)", "hilbert(2, complex)"] {
            let t = random_operator(&space(e), seed, 1.0).unwrap();
            prop_assert!(phi_decreases(&t, schedule.alphas()));
        }
    }

    #[test]
    fn hilbert_engines_agree(seed in any::<u64>()) {
        let t = random_operator(&space("hilbert(3, real)"), seed, 1.0).unwrap();
        let a = radius_hilbert(&t).unwrap();
        let b = radius_limit_formula(&t, &AlphaSchedule::default()).unwrap();
        prop_assert!((a.value - b.value).abs() <= a.error_bound + b.error_bound + 1e-9,
            "{} vs {} (+- {})", a.value, b.value, b.error_bound);
    }
}

fn phi_decreases(t: &Operator, alphas: &[f64]) -> bool {
    let mut omegas = vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)];
    if t.space().field() == numlab::Field::Complex {
        omegas.push(C64::new(0.0, 1.0));
    }
    omegas.iter().all(|&w| {
        alphas.windows(2).all(|pair| {
            let (a, na) = phi(t, w, pair[0]);
            let (b, nb) = phi(t, w, pair[1]);
            a >= b - 1e-12 - na - nb
        })
    })
}

#[test]
fn limit_formula_decreases_on_ascent_norms() {
    // every norm evaluation is a multistart ascent here, so one seed only
    let t = random_operator(&space("lp(2, 3)"), 5, 1.0).unwrap();
    assert!(phi_decreases(&t, &AlphaSchedule::default().alphas()[..8]));
}

#[test]
fn identity_has_radius_one_on_polytopes() {
    for s in polytopes() {
        let id = Operator::identity(s.clone());
        assert_eq!(radius_exact_polytope(&id).unwrap().value, 1.0, "{}", s.expr());
    }
}

#[test]
fn zero_operator() {
    let s = space("hexquot");
    let z = Operator::from_real(s, &DMatrix::zeros(2, 2)).unwrap();
    assert_eq!(radius_exact_polytope(&z).unwrap().value, 0.0);
    assert_eq!(z.norm().value, 0.0);
}
