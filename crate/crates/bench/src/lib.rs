//! Fixtures shared by the benchmarks.

use numlab::operators::random_operator;
use numlab::{build_space, parse_space_expr, Operator, Space};

pub fn space(expr: &str) -> Space {
    build_space(&parse_space_expr(expr).expect("valid expression")).expect("buildable space")
}

/// `count` seeded operators on `expr`.
pub fn operators(expr: &str, count: usize, seed: u64) -> Vec<Operator> {
    let s = space(expr);
    (0..count as u64)
        .map(|i| random_operator(&s, seed + i, 1.0).expect("random operator"))
        .collect()
}
