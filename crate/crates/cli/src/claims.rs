//! The reproduction suite: one claim per acceptance criterion.

use std::time::Instant;

use numlab::numindex::{check_duality_equality_findim, check_sum_formula, estimate_index, INDEX_TOL};
use numlab::numrange::{
    check_radius_norm_equality, radius_exact_polytope, radius_hilbert, radius_limit_formula, radius_lower_sampling,
    AlphaSchedule,
};
use numlab::operators::{adjoint, random_operator};
use numlab::spaces::SumMode;
use numlab::verifiers::{
    almost_cl_test, c_rich_criterion, c_rich_witness_search, extreme_pair_report, lushness_test, KModel, LushConfig,
    MeasureModel, OpenSet, Point, Tail, WitnessConfig,
};
use numlab::{
    build_space, index_oracle_2d, index_search_upper, parse_space_expr, seed, Error, Field, IndexEstimate, Result,
    SearchConfig, Space,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Number(f64),
    Bool(bool),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `|computed - expected| <= tolerance`.
    Within,
    /// `computed <= expected + tolerance`.
    AtMost,
    /// `computed >= expected - tolerance`.
    AtLeast,
    /// `computed == expected` for predicates.
    Holds,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub relation: Relation,
    pub expected: Value,
    pub computed: Value,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn numeric(name: impl Into<String>, relation: Relation, computed: f64, expected: f64, tolerance: f64) -> Self {
        let pass = match relation {
            Relation::Within => (computed - expected).abs() <= tolerance,
            Relation::AtMost => computed <= expected + tolerance,
            Relation::AtLeast => computed >= expected - tolerance,
            Relation::Holds => computed == expected,
        };
        Self {
            name: name.into(),
            relation,
            expected: Value::Number(expected),
            computed: Value::Number(computed),
            tolerance,
            pass,
        }
    }

    pub fn within(name: impl Into<String>, computed: f64, expected: f64, tolerance: f64) -> Self {
        Self::numeric(name, Relation::Within, computed, expected, tolerance)
    }

    pub fn at_most(name: impl Into<String>, computed: f64, bound: f64) -> Self {
        Self::numeric(name, Relation::AtMost, computed, bound, 0.0)
    }

    pub fn at_least(name: impl Into<String>, computed: f64, bound: f64) -> Self {
        Self::numeric(name, Relation::AtLeast, computed, bound, 0.0)
    }

    pub fn holds(name: impl Into<String>, computed: bool, expected: bool) -> Self {
        Self {
            name: name.into(),
            relation: Relation::Holds,
            expected: Value::Bool(expected),
            computed: Value::Bool(computed),
            tolerance: 0.0,
            pass: computed == expected,
        }
    }
}

/// An index value produced while running a claim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexRecord {
    pub space: String,
    pub field: Field,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub id: String,
    pub criterion: usize,
    pub description: String,
    /// The statement the expected value rests on.
    pub basis: String,
    pub expected: Value,
    pub computed: Value,
    pub tolerance: f64,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub indices: Vec<IndexRecord>,
    pub runtime_limit_s: f64,
    /// Absent when timing is off.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_s: Option<f64>,
}

impl ClaimResult {
    pub fn within_budget(&self) -> bool {
        self.runtime_s.is_none_or(|t| t <= self.runtime_limit_s)
    }
}

/// Everything a claim needs: the configuration and its own seed.
pub struct ClaimContext<'a> {
    pub config: &'a RunConfig,
    pub seed: u64,
    /// Indices reported by the other claims (used by `range-bounds`).
    pub prior_indices: Vec<IndexRecord>,
}

impl ClaimContext<'_> {
    fn search(&self, space: &Space) -> SearchConfig {
        let mut cfg = SearchConfig::for_space(space, self.seed);
        if let Some(s) = self.config.starts {
            cfg.starts = s;
        }
        if let Some(e) = self.config.evals {
            cfg.budget = e;
        }
        cfg
    }

    fn op_seed(&self, label: &str, i: usize) -> u64 {
        seed::derive_index(seed::derive(self.seed, label), i as u64)
    }
}

#[derive(Default)]
struct Outcome {
    checks: Vec<Check>,
    indices: Vec<IndexRecord>,
}

impl Outcome {
    fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    fn index(&mut self, space: &Space, value: f64) {
        self.indices.push(IndexRecord {
            space: space.expr().to_string(),
            field: space.field(),
            value,
        });
    }

    fn estimate(&mut self, space: &Space, est: &IndexEstimate) {
        self.index(space, est.upper);
        if let Some(o) = &est.oracle {
            self.index(space, o.value);
        }
    }
}

type ClaimFn = fn(&ClaimContext) -> Result<Outcome>;

pub struct Claim {
    pub id: &'static str,
    pub criterion: usize,
    pub description: &'static str,
    pub basis: &'static str,
    pub runtime_limit_s: f64,
    /// Contributes index values to `range-bounds`.
    pub produces_indices: bool,
    run: ClaimFn,
}

pub const RANGE_BOUNDS: &str = "range-bounds";

pub fn registry() -> Vec<Claim> {
    vec![
        Claim {
            id: "hilbert-real-zero",
            criterion: 1,
            description: "search upper bound for hilbert(2, real) is at most 1e-6 and its witness has radius at most 1e-9",
            basis: "real Hilbert spaces of dimension at least 2 have index 0",
            runtime_limit_s: 10.0,
            produces_indices: true,
            run: hilbert_real_zero,
        },
        Claim {
            id: "hilbert-complex-half",
            criterion: 2,
            description: "search upper bound for hilbert(2, complex) is 0.5 +- 5e-3",
            basis: "complex Hilbert spaces of dimension at least 2 have index 1/2",
            runtime_limit_s: 60.0,
            produces_indices: true,
            run: hilbert_complex_half,
        },
        Claim {
            id: "m-space-one",
            criterion: 3,
            description: "linf(2), linf(3) are almost-CL and 1000 random operators each have v(T) = ||T||",
            basis: "L- and M-spaces have numerical index 1",
            runtime_limit_s: 30.0,
            produces_indices: false,
            run: m_space_one,
        },
        Claim {
            id: "hexagon-below-one",
            criterion: 4,
            description: "planar oracle for hexquot is at most 0.8 and the search agrees within 2e-2",
            basis: "the hexagonal section {x1 + x2 + x3 = 0} of linf(3) does not have index 1",
            runtime_limit_s: 120.0,
            produces_indices: true,
            run: hexagon_below_one,
        },
        Claim {
            id: "polygon-trend",
            criterion: 5,
            description: "planar oracle on polygon(2..6) strictly decreases, polygon(2) = 1 +- 1e-3",
            basis: "indices of regular 2n-gon spaces tend to 0",
            runtime_limit_s: 600.0,
            produces_indices: true,
            run: polygon_trend,
        },
        Claim {
            id: "adjoint-radius",
            criterion: 6,
            description: "v(T) = v(T*) within 1e-9 for 200 random operators on linf(3) and l1(3)",
            basis: "v(T) = v(T*) on every finite-dimensional space",
            runtime_limit_s: 30.0,
            produces_indices: false,
            run: adjoint_radius,
        },
        Claim {
            id: "limit-formula-sandwich",
            criterion: 7,
            description: "sampling <= exact <= limit formula + bound, |limit - exact| <= 1e-6, 100 operators on linf(2), l1(2), hexquot",
            basis: "v(T) = max_w lim (||Id + a w T|| - 1) / a as a -> 0+",
            runtime_limit_s: 60.0,
            produces_indices: false,
            run: limit_formula_sandwich,
        },
        Claim {
            id: "equality-criterion",
            criterion: 8,
            description: "v(T) = ||T|| iff max_w ||Id + w T|| = 1 + ||T||, 200 operators on linf(2), hexquot, hilbert(2, real)",
            basis: "v(T) = ||T|| iff max_w ||Id + w T|| = 1 + ||T||",
            runtime_limit_s: 60.0,
            produces_indices: false,
            run: equality_criterion,
        },
        Claim {
            id: "findim-duality",
            criterion: 9,
            description: "|n(X) - n(X*)| <= 2e-2 for linf(2), hexquot, polygon(4) and a random polygon",
            basis: "n(X*) <= n(X), with equality for reflexive X",
            runtime_limit_s: 600.0,
            produces_indices: true,
            run: findim_duality,
        },
        Claim {
            id: "sum-formula",
            criterion: 10,
            description: "|n(A (+)inf B) - min(n(A), n(B))| <= 2e-2 for (linf(2), hexquot) and (hexquot, hexquot)",
            basis: "the index of an inf-sum is the minimum of the summand indices",
            runtime_limit_s: 600.0,
            produces_indices: true,
            run: sum_formula,
        },
        Claim {
            id: "truncation-mechanism",
            criterion: 11,
            description: "xtrunc(1) has the hexagon index within 2e-2 and is not almost-CL; linf(3) is almost-CL",
            basis: "truncations split as an inf-sum with the hexagon; they are not almost-CL",
            runtime_limit_s: 600.0,
            produces_indices: true,
            run: truncation_mechanism,
        },
        Claim {
            id: "extreme-pairs",
            criterion: 12,
            description: "extreme pairs of linf(3), l1(3) pair to 1 (+-1e-9); hexquot has one below 0.9",
            basis: "|x*(x)| = 1 for extreme x, x* of cubes and cross-polytopes; some pair of the hexagon is below 1",
            runtime_limit_s: 10.0,
            produces_indices: false,
            run: extreme_pairs,
        },
        Claim {
            id: "crich-criterion",
            criterion: 13,
            description: "C-richness criterion on delta_inf, delta_1, {3, inf}; witness search agrees",
            basis: "a kernel is C-rich iff its supports avoid isolated points; dist(h, ker f) >= |mu({t0})|",
            runtime_limit_s: 30.0,
            produces_indices: false,
            run: crich_criterion,
        },
        Claim {
            id: RANGE_BOUNDS,
            criterion: 14,
            description: "every index computed lies in [-1e-6, 1 + 1e-6]; complex ones are at least 1/e - 2e-2",
            basis: "indices lie in [0, 1] for real spaces and in [1/e, 1] for complex ones",
            runtime_limit_s: f64::INFINITY,
            produces_indices: false,
            run: range_bounds,
        },
        Claim {
            id: "lushness-falsifier",
            criterion: 15,
            description: "no lushness failure on linf(2), at least one on hexquot (grid 64, eps 0.5, 0.25, 0.1)",
            basis: "lush spaces have index 1; the hexagon is not lush",
            runtime_limit_s: 120.0,
            produces_indices: false,
            run: lushness_falsifier,
        },
    ]
}

fn space(expr: &str) -> Result<Space> {
    build_space(&parse_space_expr(expr)?)
}

fn hilbert_real_zero(ctx: &ClaimContext) -> Result<Outcome> {
    let mut out = Outcome::default();
    let s = space("hilbert(2, real)")?;
    let est = index_search_upper(&s, &ctx.search(&s))?;
    out.estimate(&s, &est);
    out.check(Check::at_most("search upper bound", est.upper, 1e-6));
    let v = radius_hilbert(&est.witness)?;
    out.check(Check::at_most("witness radius", v.value, 1e-9));
    Ok(out)
}

fn hilbert_complex_half(ctx: &ClaimContext) -> Result<Outcome> {
    let mut out = Outcome::default();
    let s = space("hilbert(2, complex)")?;
    let est = index_search_upper(&s, &ctx.search(&s))?;
    out.estimate(&s, &est);
    out.check(Check::within("search upper bound", est.upper, 0.5, 5e-3));
    Ok(out)
}

fn m_space_one(ctx: &ClaimContext) -> Result<Outcome> {
    let mut out = Outcome::default();
    let tol = ctx.config.tau_geom;
    for e in ["linf(2)", "linf(3)"] {
        let s = space(e)?;
        out.check(Check::holds(format!("{e} almost-CL"), almost_cl_test(&s)?.holds, true));
        let worst = (0..1000)
            .into_par_iter()
            .map(|i| {
                let t = random_operator(&s, ctx.op_seed(e, i), 1.0)?;
                Ok((radius_exact_polytope(&t)?.value - t.norm().value).abs())
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        out.check(Check::within(format!("{e} max |v(T) - ||T|||"), worst, 0.0, tol));
    }
    Ok(out)
}

fn hexagon_below_one(ctx: &ClaimContext) -> Result<Outcome> {
    let mut out = Outcome::default();
    let s = space("hexquot")?;
    let oracle = index_oracle_2d(&s, ctx.config.grid_density)?;
    let est = index_search_upper(&s, &ctx.search(&s))?;
    out.index(&s, oracle.value);
    out.index(&s, est.upper);
    out.check(Check::at_most("oracle value", oracle.value, 0.8));
    out.check(Check::within(
        "search minus oracle",
        est.upper,
        oracle.value,
        ctx.config.search_tol,
    ));
    Ok(out)
}

fn polygon_trend(ctx: &ClaimContext) -> Result<Outcome> {
    let mut out = Outcome::default();
    let values = (2..=6)
        .map(|n| {
            let s = space(&format!("polygon({n})"))?;
            let v = index_oracle_2d(&s, ctx.config.grid_density)?.value;
            out.index(&s, v);
            Ok(v)
        })
        .collect::<Result<Vec<f64>>>()?;
    out.check(Check::within("polygon(2)", values[0], 1.0, 1e-3));
    for (k, w) in values.windows(2).enumerate() {
        let n = k + 2;
        out.check(Check::holds(
            format!("polygon({}) < polygon({n}): {:.6} < {:.6}", n + 1, w[1], w[0]),
            w[1] < w[0],
            true,
        ));
    }
    Ok(out)
}

fn adjoint_radius(ctx: &ClaimContext) -> Result<Outcome> {
    let mut out = Outcome::default();
    for e in ["linf(3)", "l1(3)"] {
        let s = space(e)?;
        let worst = (0..200)
            .into_par_iter()
            .map(|i| {
                let t = random_operator(&s, ctx.op_seed(e, i), 1.0)?;
                let a = radius_exact_polytope(&t)?.value;
                let b = radius_exact_polytope(&adjoint(&t)?)?.value;
                Ok((a - b).abs())
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        out.check(Check::within(format!("{e} max |v(T) - v(T*)|"), worst, 0.0, 1e-9));
    }
    Ok(out)
}

fn limit_formula_sandwich(ctx: &ClaimContext) -> Result<Outcome> {
    let mut out = Outcome::default();
    let schedule = AlphaSchedule::default();
    for e in ["linf(2)", "l1(2)", "hexquot"] {
        let s = space(e)?;
        let rows = (0..100)
            .into_par_iter()
            .map(|i| {
                let seed = ctx.op_seed(e, i);
                let t = random_operator(&s, seed, 1.0)?;
                let exact = radius_exact_polytope(&t)?.value;
                let lower = radius_lower_sampling(&t, 256, seed)?.value;
                let limit = radius_limit_formula(&t, &schedule)?;
                // (lower - exact, exact - (limit + bound), |limit - exact|)
                Ok((
                    lower - exact,
                    exact - (limit.value + limit.error_bound),
                    (limit.value - exact).abs(),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let fold = |f: fn(&(f64, f64, f64)) -> f64| rows.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        out.check(Check::at_most(
            format!("{e} max (sampling - exact)"),
            fold(|r| r.0),
            0.0,
        ));
        out.check(Check::at_most(
            format!("{e} max (exact - limit - bound)"),
            fold(|r| r.1),
            0.0,
        ));
        out.check(Check::within(
            format!("{e} max |limit - exact|"),
            fold(|r| r.2),
            0.0,
            1e-6,
        ));
    }
    Ok(out)
}

fn equality_criterion(ctx: &ClaimContext) -> Result<Outcome> {
    let mut out = Outcome::default();
    for e in ["linf(2)", "hexquot", "hilbert(2, real)"] {
        let s = space(e)?;
        let reports = (0..200)
            .into_par_iter()
            .map(|i| check_radius_norm_equality(&random_operator(&s, ctx.op_seed(e, i), 1.0)?))
            .collect::<Result<Vec<_>>>()?;
        let inconsistent = reports.iter().filter(|r| !r.consistent()).count();
        let equal = reports.iter().filter(|r| r.radius_equals_norm).count();
        out.check(Check::within(
            format!("{e} inconsistent operators ({equal} with v = ||T||)"),
            inconsistent as f64,
            0.0,
            0.0,
        ));
    }
    Ok(out)
}

fn findim_duality(ctx: &ClaimContext) -> Result<Outcome> {
    let mut out = Outcome::default();
    let mut spaces: Vec<Space> = ["linf(2)", "hexquot", "polygon(4)"]
        .iter()
        .map(|e| space(e))
        .collect::<Result<_>>()?;
    spaces.push(numlab::constructions::random_polygon_space(
        seed::derive(ctx.seed, "polygon"),
        5,
    )?);
    for s in &spaces {
        let r = check_duality_equality_findim(s, &ctx.search(s))?;
        out.estimate(s, &r.primal);
        let dual = numlab::spaces::dual_space(s)?;
        out.estimate(&dual, &r.dual);
        out.check(Check::within(
            format!("{} |n(X) - n(X*)|", s.expr()),
            r.difference,
            0.0,
            ctx.config.search_tol,
        ));
    }
    Ok(out)
}

fn sum_formula(ctx: &ClaimContext) -> Result<Outcome> {
    let mut out = Outcome::default();
    for (a, b) in [("linf(2)", "hexquot"), ("hexquot", "hexquot")] {
        let (sa, sb) = (space(a)?, space(b)?);
        let sum = space(&format!("sum_inf({a}, {b})"))?;
        let r = check_sum_formula(&sa, &sb, SumMode::Inf, &ctx.search(&sum))?;
        out.estimate(&sa, &r.left);
        out.estimate(&sb, &r.right);
        out.estimate(&sum, &r.sum);
        out.check(Check::within(
            format!("sum_inf({a}, {b}) |n(sum) - min|"),
            r.discrepancy,
            0.0,
            ctx.config.search_tol,
        ));
    }
    Ok(out)
}

fn truncation_mechanism(ctx: &ClaimContext) -> Result<Outcome> {
    let mut out = Outcome::default();
    let hex = space("hexquot")?;
    let hex_value = index_oracle_2d(&hex, ctx.config.grid_density)?.value;
    out.index(&hex, hex_value);
    let xt = space("xtrunc(1)")?;
    let est = estimate_index(&xt, &ctx.search(&xt))?;
    out.estimate(&xt, &est);
    out.check(Check::within(
        "xtrunc(1) index vs hexquot oracle",
        est.best(),
        hex_value,
        ctx.config.search_tol,
    ));
    let split = numlab::constructions::verify_truncation_split(&parse_space_expr("xtrunc(1)")?, 500, ctx.seed)?;
    out.check(Check::within(
        "xtrunc(1) split norm discrepancy",
        split,
        0.0,
        ctx.config.tau_geom,
    ));
    out.check(Check::holds("xtrunc(1) exact section", xt.polytope().is_some(), true));
    out.check(Check::holds("xtrunc(1) almost-CL", almost_cl_test(&xt)?.holds, false));
    out.check(Check::holds(
        "linf(3) almost-CL",
        almost_cl_test(&space("linf(3)")?)?.holds,
        true,
    ));
    Ok(out)
}

fn extreme_pairs(ctx: &ClaimContext) -> Result<Outcome> {
    let mut out = Outcome::default();
    for e in ["linf(3)", "l1(3)"] {
        let r = extreme_pair_report(&space(e)?)?;
        out.check(Check::within(
            format!("{e} min |x*(x)|"),
            r.min,
            1.0,
            ctx.config.tau_pair,
        ));
    }
    let r = extreme_pair_report(&space("hexquot")?)?;
    out.check(Check::at_most("hexquot min |x*(x)|", r.min, 1.0 - 0.1));
    Ok(out)
}

fn crich_criterion(_ctx: &ClaimContext) -> Result<Outcome> {
    let mut out = Outcome::default();
    let k = KModel::one_point_compactification();
    let inf = Point::Limit(0);
    let nat = |n: u64| Point::Term { seq: 0, n };
    let mixed = MeasureModel {
        atoms: vec![(nat(3), 0.5), (inf, 0.5)],
        geometric: vec![],
    };
    let cases = [
        ("delta_inf", MeasureModel::dirac(inf), true),
        ("delta_1", MeasureModel::dirac(nat(1)), false),
        ("atoms at {3, inf}", mixed.clone(), false),
    ];
    for (name, f, expected) in &cases {
        out.check(Check::holds(
            format!("criterion {name}"),
            c_rich_criterion(&k, std::slice::from_ref(f))?,
            *expected,
        ));
    }

    let tail = OpenSet {
        points: vec![],
        tails: vec![Tail { seq: 0, start: 5 }],
    };
    let rep = c_rich_witness_search(&k, &[MeasureModel::dirac(inf)], &tail, &WitnessConfig::default())?;
    out.check(Check::holds(
        "delta_inf on {n >= 5}: witness found",
        rep.witness.is_some(),
        true,
    ));
    out.check(Check::within("delta_inf on {n >= 5}: distance", rep.distance, 0.0, 0.0));

    let cfg = WitnessConfig {
        epsilon: 0.5,
        ..Default::default()
    };
    for (name, f, t0) in [
        ("delta_1", MeasureModel::dirac(nat(1)), nat(1)),
        ("atoms at {3, inf}", mixed, nat(3)),
    ] {
        let u = OpenSet {
            points: vec![t0],
            tails: vec![],
        };
        let rep = c_rich_witness_search(&k, std::slice::from_ref(&f), &u, &cfg)?;
        let mass = rep
            .atom_bound
            .ok_or_else(|| Error::Internal("single isolated point without bound".into()))?;
        out.check(Check::holds(
            format!("{name} on {{t0}}: no witness"),
            rep.witness.is_none(),
            true,
        ));
        out.check(Check::at_least(
            format!("{name} on {{t0}}: distance vs atom mass {mass}"),
            rep.distance,
            mass,
        ));
    }
    Ok(out)
}

fn range_bounds(ctx: &ClaimContext) -> Result<Outcome> {
    let mut out = Outcome::default();
    let tau = 1e-6;
    let lo = ctx.prior_indices.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
    let hi = ctx
        .prior_indices
        .iter()
        .map(|r| r.value)
        .fold(f64::NEG_INFINITY, f64::max);
    let complex_lo = ctx
        .prior_indices
        .iter()
        .filter(|r| r.field == Field::Complex)
        .map(|r| r.value)
        .fold(f64::INFINITY, f64::min);
    out.check(Check::at_least(
        format!("smallest of {} indices", ctx.prior_indices.len()),
        lo,
        -tau,
    ));
    out.check(Check::at_most("largest index", hi, 1.0 + tau));
    out.check(Check::at_least(
        "smallest complex index",
        complex_lo,
        (-1.0f64).exp() - INDEX_TOL,
    ));
    out.check(Check::holds(
        "indices were collected",
        !ctx.prior_indices.is_empty() && complex_lo.is_finite(),
        true,
    ));
    Ok(out)
}

fn lushness_falsifier(ctx: &ClaimContext) -> Result<Outcome> {
    let mut out = Outcome::default();
    let cfg = LushConfig {
        seed: ctx.seed,
        ..Default::default()
    };
    let sq = lushness_test(&space("linf(2)")?, &cfg)?;
    out.check(Check::within(
        format!("linf(2) failures of {} triples", sq.triples),
        sq.failures.len() as f64,
        0.0,
        0.0,
    ));
    let hex = lushness_test(&space("hexquot")?, &cfg)?;
    out.check(Check::at_least(
        format!("hexquot failures of {} triples", hex.triples),
        hex.failures.len() as f64,
        1.0,
    ));
    Ok(out)
}

/// Claims to execute for a filter: the filtered ones plus, when
/// `range-bounds` is requested, every claim that produces indices.
pub fn select(filter: Option<&[String]>) -> Result<(Vec<Claim>, Vec<&'static str>)> {
    let all = registry();
    let wanted: Vec<&'static str> = match filter {
        None => all.iter().map(|c| c.id).collect(),
        Some(ids) => ids
            .iter()
            .map(|id| {
                all.iter()
                    .find(|c| c.id == id.as_str())
                    .map(|c| c.id)
                    .ok_or_else(|| Error::Input(format!("unknown claim id '{id}'")))
            })
            .collect::<Result<_>>()?,
    };
    let need_indices = wanted.contains(&RANGE_BOUNDS);
    let run = all
        .into_iter()
        .filter(|c| wanted.contains(&c.id) || (need_indices && c.produces_indices))
        .collect();
    Ok((run, wanted))
}

fn execute(claim: &Claim, config: &RunConfig, prior: Vec<IndexRecord>) -> Result<ClaimResult> {
    let ctx = ClaimContext {
        config,
        seed: seed::derive(config.seed, claim.id),
        prior_indices: prior,
    };
    let start = Instant::now();
    let outcome = (claim.run)(&ctx)?;
    let elapsed = start.elapsed().as_secs_f64();
    let first = outcome
        .checks
        .first()
        .cloned()
        .ok_or_else(|| Error::Internal(format!("claim {} made no checks", claim.id)))?;
    Ok(ClaimResult {
        id: claim.id.to_string(),
        criterion: claim.criterion,
        description: claim.description.to_string(),
        basis: claim.basis.to_string(),
        expected: first.expected,
        computed: first.computed,
        tolerance: first.tolerance,
        pass: outcome.checks.iter().all(|c| c.pass),
        checks: outcome.checks,
        indices: outcome.indices,
        runtime_limit_s: claim.runtime_limit_s,
        runtime_s: config.timing.then_some(elapsed),
    })
}

/// Runs the selected claims on a pool of `config.threads` threads and
/// returns the requested results sorted by id.
pub fn run_reproduce(config: &RunConfig, filter: Option<&[String]>) -> Result<Vec<ClaimResult>> {
    config.validate()?;
    let (claims, wanted) = select(filter)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let (last, first): (Vec<&Claim>, Vec<&Claim>) = claims.iter().partition(|c| c.id == RANGE_BOUNDS);
    let mut results = pool.install(|| {
        first
            .par_iter()
            .map(|c| execute(c, config, Vec::new()))
            .collect::<Result<Vec<_>>>()
    })?;
    if let Some(rb) = last.first() {
        let mut prior: Vec<IndexRecord> = results.iter().flat_map(|r| r.indices.clone()).collect();
        prior.sort_by(|a, b| a.space.cmp(&b.space).then(a.value.total_cmp(&b.value)));
        let r = pool.install(|| execute(rb, config, prior))?;
        results.push(r);
    }
    results.retain(|r| wanted.contains(&r.id.as_str()));
    results.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_complete() {
        let r = registry();
        assert_eq!(r.len(), 15);
        let mut crit: Vec<usize> = r.iter().map(|c| c.criterion).collect();
        crit.sort_unstable();
        assert_eq!(crit, (1..=15).collect::<Vec<_>>());
        let mut ids: Vec<&str> = r.iter().map(|c| c.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), 15);
    }

    #[test]
    fn unknown_claim_is_an_input_error() {
        let err = run_reproduce(&RunConfig::default(), Some(&["nonexistent".to_string()])).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn range_bounds_pulls_in_index_claims() {
        let (run, wanted) = select(Some(&[RANGE_BOUNDS.to_string()])).unwrap();
        assert_eq!(wanted, vec![RANGE_BOUNDS]);
        assert!(run.iter().any(|c| c.id == "hilbert-complex-half"));
        assert!(run.iter().all(|c| c.produces_indices || c.id == RANGE_BOUNDS));
    }

    #[test]
    fn check_relations() {
        assert!(Check::within("a", 1.0, 1.0 + 1e-10, 1e-9).pass);
        assert!(!Check::within("a", 1.0, 1.1, 1e-9).pass);
        assert!(Check::at_most("b", 0.5, 0.8).pass);
        assert!(!Check::at_least("c", 0.5, 0.8).pass);
        assert!(!Check::holds("d", true, false).pass);
    }

    #[test]
    fn fast_claims_pass() {
        let cfg = RunConfig {
            timing: false,
            ..Default::default()
        };
        let ids: Vec<String> = ["extreme-pairs", "crich-criterion"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let results = run_reproduce(&cfg, Some(&ids)).unwrap();
        assert_eq!(results.len(), 2);
        assert_eq!(results[0].id, "crich-criterion");
        for r in &results {
            assert!(r.pass, "{r:?}");
            assert!(r.runtime_s.is_none());
        }
    }
}
