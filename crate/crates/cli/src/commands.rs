//! JSON documents printed by the `space`, `radius`, `index` and `verify`
//! subcommands.

use std::path::Path;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use numlab::io::{load_crich_problem, load_operator};
use numlab::numindex::{known_index, DEFAULT_GRID_DENSITY};
use numlab::numrange::{
    radius_auto, radius_exact_polytope, radius_hilbert, radius_limit_formula, radius_lower_sampling, AlphaSchedule,
    RadiusCertificate,
};
use numlab::spaces::validate_space;
use numlab::verifiers::{
    almost_cl_test, c_rich_criterion, c_rich_witness_search, extreme_pair_report, lushness_test, LushConfig,
    WitnessConfig,
};
use numlab::{
    build_space, index_oracle_2d, index_search_upper, parse_space_expr, Error, Field, Result, SearchConfig, Space, C64,
};
use serde_json::{json, Value as Json};

/// Samples used by `--method sample`.
pub const RADIUS_SAMPLES: usize = 4096;

fn space(expr: &str) -> Result<Space> {
    build_space(&parse_space_expr(expr)?)
}

fn scalar(field: Field, z: C64) -> Json {
    match field {
        Field::Real => json!(z.re),
        Field::Complex => json!([z.re, z.im]),
    }
}

fn vector(field: Field, v: &DVector<C64>) -> Json {
    Json::Array(v.iter().map(|&z| scalar(field, z)).collect())
}

fn matrix(field: Field, m: &DMatrix<C64>) -> Json {
    Json::Array(
        (0..m.nrows())
            .map(|i| Json::Array((0..m.ncols()).map(|j| scalar(field, m[(i, j)])).collect()))
            .collect(),
    )
}

/// The serialized space, with the sampled validation report on request.
pub fn space_doc(expr: &str, validate: bool, seed: u64) -> Result<Json> {
    let s = space(expr)?;
    let mut doc = serde_json::to_value(s.to_json()?)?;
    if validate {
        doc["validation"] = serde_json::to_value(validate_space(&s, 256, seed))?;
    }
    Ok(doc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadiusChoice {
    Exact,
    Hilbert,
    Limit,
    Sample,
    Auto,
}

impl FromStr for RadiusChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "exact" => RadiusChoice::Exact,
            "hilbert" => RadiusChoice::Hilbert,
            "limit" => RadiusChoice::Limit,
            "sample" => RadiusChoice::Sample,
            "auto" => RadiusChoice::Auto,
            other => return Err(Error::Input(format!("unknown radius method '{other}'"))),
        })
    }
}

/// `tol` is the stopping tolerance of the limit formula; every method
/// reports whether its error bound meets it.
pub fn radius_doc(space_expr: &str, op: &Path, method: RadiusChoice, tol: f64, seed: u64) -> Result<Json> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Input(format!("tolerance must be positive, got {tol}")));
    }
    let t = load_operator(op)?;
    let requested = space(space_expr)?;
    if requested.expr() != t.space().expr() {
        return Err(Error::Input(format!(
            "operator file is on {} but --space is {}",
            t.space().expr(),
            requested.expr()
        )));
    }
    let cert: RadiusCertificate = match method {
        RadiusChoice::Exact => radius_exact_polytope(&t)?,
        RadiusChoice::Hilbert => radius_hilbert(&t)?,
        RadiusChoice::Limit => {
            let d = AlphaSchedule::default();
            radius_limit_formula(&t, &AlphaSchedule::new(d.alphas().to_vec(), d.omega_grid(), tol)?)?
        }
        RadiusChoice::Sample => radius_lower_sampling(&t, RADIUS_SAMPLES, seed)?,
        RadiusChoice::Auto => radius_auto(&t)?,
    };
    let field = t.space().field();
    Ok(json!({
        "value": cert.value,
        "error_bound": cert.error_bound,
        "bound_kind": cert.bound_kind,
        "meets_tol": cert.error_bound <= tol,
        "method": cert.method,
        "witness": {
            "x": vector(field, &cert.witness.x),
            "f": vector(field, &cert.witness.f),
            "value": scalar(field, cert.witness.evaluate(t.matrix())),
        },
        "norm": t.norm().value,
    }))
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndexArgs {
    pub space: String,
    pub starts: Option<usize>,
    pub budget: Option<usize>,
    pub seed: u64,
    pub oracle: bool,
    pub grid_density: usize,
}

impl IndexArgs {
    pub fn new(space: impl Into<String>) -> Self {
        Self {
            space: space.into(),
            starts: None,
            budget: None,
            seed: 0,
            oracle: false,
            grid_density: DEFAULT_GRID_DENSITY,
        }
    }
}

pub fn index_doc(args: &IndexArgs) -> Result<Json> {
    let expr = parse_space_expr(&args.space)?;
    let s = build_space(&expr)?;
    let mut cfg = SearchConfig::for_space(&s, args.seed);
    cfg.starts = args.starts.unwrap_or(cfg.starts);
    cfg.budget = args.budget.unwrap_or(cfg.budget);
    if cfg.starts == 0 || cfg.budget == 0 {
        return Err(Error::Input("starts and budget must be positive".into()));
    }
    let est = index_search_upper(&s, &cfg)?;
    let oracle = if args.oracle {
        Some(index_oracle_2d(&s, args.grid_density)?)
    } else {
        None
    };
    Ok(json!({
        "upper": est.upper,
        "witness_matrix": matrix(s.field(), est.witness.matrix()),
        "oracle_value": oracle.as_ref().map(|o| o.value),
        "known_value": known_index(&expr),
        "metadata": {
            "space": s.expr(),
            "field": s.field(),
            "dim": s.dim(),
            "starts": cfg.starts,
            "budget": cfg.budget,
            "seed": cfg.seed,
            "evaluations": est.evaluations,
            "witness_radius": est.witness_radius.value,
            "witness_radius_method": est.witness_radius.method,
            "oracle_grid_bound": oracle.as_ref().map(|o| o.grid_bound),
            "oracle_grid_points": oracle.as_ref().map(|o| o.grid_points),
        },
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Predicate {
    Lush,
    AlmostCl,
    Pairs,
    Crich,
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lush" => Predicate::Lush,
            "almostcl" => Predicate::AlmostCl,
            "pairs" => Predicate::Pairs,
            "crich" => Predicate::Crich,
            other => return Err(Error::Input(format!("unknown predicate '{other}'"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyArgs {
    pub predicate: Predicate,
    pub space: Option<String>,
    pub kmodel: Option<std::path::PathBuf>,
    /// Side of the `x` and `y` grids for lushness.
    pub grid: Option<usize>,
    pub eps: Option<Vec<f64>>,
    pub seed: u64,
}

impl VerifyArgs {
    pub fn new(predicate: Predicate) -> Self {
        Self {
            predicate,
            space: None,
            kmodel: None,
            grid: None,
            eps: None,
            seed: 0,
        }
    }

    fn space(&self) -> Result<Space> {
        let e = self
            .space
            .as_deref()
            .ok_or_else(|| Error::Input("--space is required for this predicate".into()))?;
        space(e)
    }
}

pub fn verify_doc(args: &VerifyArgs) -> Result<Json> {
    match args.predicate {
        Predicate::Lush => {
            let mut cfg = LushConfig {
                seed: args.seed,
                ..Default::default()
            };
            if let Some(g) = args.grid {
                cfg.x_grid = g;
                cfg.y_grid = g;
            }
            if let Some(e) = &args.eps {
                cfg.epsilons = e.clone();
            }
            let rep = lushness_test(&args.space()?, &cfg)?;
            Ok(json!({
                "predicate": "lush",
                "pass": rep.failures.is_empty(),
                "witnesses": rep.failures,
                "stats": {
                    "triples": rep.triples,
                    "pass_rate": rep.pass_rate,
                    "candidates": rep.candidates,
                    "x_grid": cfg.x_grid,
                    "y_grid": cfg.y_grid,
                    "epsilons": cfg.epsilons,
                    "note": rep.note,
                },
            }))
        }
        Predicate::AlmostCl => {
            let rep = almost_cl_test(&args.space()?)?;
            Ok(json!({
                "predicate": "almostcl",
                "pass": rep.holds,
                "witnesses": rep.failures,
                "stats": { "facets_checked": rep.facets_checked },
            }))
        }
        Predicate::Pairs => {
            let rep = extreme_pair_report(&args.space()?)?;
            Ok(json!({
                "predicate": "pairs",
                "pass": rep.all_one,
                "witnesses": [],
                "stats": {
                    "pairs": rep.pairs,
                    "min": rep.min,
                    "max": rep.max,
                    "histogram": rep.histogram,
                },
            }))
        }
        Predicate::Crich => {
            let path = args
                .kmodel
                .as_deref()
                .ok_or_else(|| Error::Input("--kmodel is required for crich".into()))?;
            let p = load_crich_problem(path)?;
            let rich = c_rich_criterion(&p.k, &p.functionals)?;
            let isolated: Vec<_> = p.functionals.iter().map(|f| f.isolated_support(&p.k)).collect();
            let mut doc = json!({
                "predicate": "crich",
                "pass": rich,
                "witnesses": [],
                "stats": { "isolated_support": isolated },
            });
            if let Some(open) = &p.open_set {
                let epsilon = args
                    .eps
                    .as_ref()
                    .and_then(|e| e.first().copied())
                    .or(p.epsilon)
                    .unwrap_or(WitnessConfig::default().epsilon);
                let cfg = WitnessConfig {
                    epsilon,
                    ..Default::default()
                };
                let rep = c_rich_witness_search(&p.k, &p.functionals, open, &cfg)?;
                if let Some(w) = &rep.witness {
                    doc["witnesses"] = json!([w]);
                }
                doc["stats"]["epsilon"] = json!(epsilon);
                doc["stats"]["distance"] = json!(rep.distance);
                doc["stats"]["history"] = json!(rep.history);
                doc["stats"]["atom_bound"] = json!(rep.atom_bound);
            }
            Ok(doc)
        }
    }
}
