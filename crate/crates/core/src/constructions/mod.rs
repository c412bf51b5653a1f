//! Space expressions and the builders that turn them into [`Space`]s.

mod build;
mod expr;

pub use build::{
    build_space, build_space_with, null_space, random_polygon_space, section_polytope, section_vertices, sum_spaces,
    truncation_split, verify_truncation_split, BuildOptions, TruncationSplit,
};
pub use expr::{parse_space_expr, SpaceExpr};
