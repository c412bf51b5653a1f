//! Numerical ranges, numerical radii and numerical indices of
//! finite-dimensional real and complex normed spaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`spaces`] holds norm representations (exact symmetric polytopes and
//!   norm oracles), duality and extreme dual pairs.
//! * [`constructions`] parses space expressions such as
//!   `sum_inf(linf(2), hexquot)` and builds the corresponding [`Space`].
//! * [`operators`] wraps matrices acting on a space and computes their norms.
//! * [`numrange`] provides independent numerical-radius engines.
//! * [`numindex`] estimates numerical indices and runs the duality and
//!   direct-sum checks.
//! * [`verifiers`] implements the structural predicates (lushness, almost-CL,
//!   extreme-pair rigidity, C-richness of kernels in `C(K)`).

// `!(x > 0.0)` rejects NaN along with the nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constructions;
pub mod error;
pub mod io;
pub mod lp;
pub mod numindex;
pub mod numrange;
pub mod operators;
pub mod seed;
pub mod spaces;
pub mod verifiers;

pub use constructions::{build_space, parse_space_expr, SpaceExpr};
pub use error::{Error, Result};
pub use numindex::{index_oracle_2d, index_search_upper, IndexEstimate, SearchConfig};
pub use numrange::{RadiusCertificate, RadiusMethod};
pub use operators::{NormEstimate, Operator};
pub use spaces::{DualPair, Field, NormOracle, OracleFamily, Polytope, Representation, Space};

/// Complex scalar used for every field-generic vector and matrix.
pub type C64 = num_complex::Complex64;

/// Tolerance separating genuine polytope structure from rounding.
pub const TAU_GEOM: f64 = 1e-9;

/// Maximal pairing defect `|f(x) - 1|` accepted for a dual pair.
pub const TAU_PAIR: f64 = 1e-9;
