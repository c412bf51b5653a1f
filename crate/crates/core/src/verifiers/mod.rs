//! Falsifiers for structural properties of polyhedral spaces (lushness,
//! almost-CL, extreme-pair rigidity) and the C-richness criterion for
//! kernels in `C(K)` with `K` a finite union of convergent sequences.

mod almost_cl;
pub mod crich;
mod lush;
mod pairs;

pub use almost_cl::{almost_cl_test, AlmostClFailure, AlmostClReport};
pub use crich::{
    c_rich_criterion, c_rich_witness_search, Geometric, KModel, MeasureModel, OpenSet, Point, Tail, Witness,
    WitnessConfig, WitnessReport,
};
pub use lush::{lushness_test, LushConfig, LushFailure, LushReport};
pub use pairs::{extreme_pair_report, PairReport};

use crate::error::{Error, Result};
use crate::spaces::{Polytope, Space};

fn require_polytope(space: &Space) -> Result<&Polytope> {
    space
        .polytope()
        .ok_or_else(|| Error::unsupported(format!("{} is not an explicit polytope space", space.expr())))
}
