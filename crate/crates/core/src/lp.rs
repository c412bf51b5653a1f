//! Thin wrapper around the `minilp` simplex solver.
//!
//! Every linear program in the crate goes through [`LinearProgram`], so the
//! backend can be swapped without touching the geometry code.

use minilp::{ComparisonOp, OptimizationDirection, Problem, Variable};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpFailure {
    Infeasible,
    Unbounded,
    /// The solver hit a singular basis.
    Numerical,
}

pub struct LinearProgram {
    problem: Problem,
    vars: Vec<Variable>,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub objective: f64,
    pub values: Vec<f64>,
}

impl LinearProgram {
    pub fn new(sense: Sense) -> Self {
        let dir = match sense {
            Sense::Minimize => OptimizationDirection::Minimize,
            Sense::Maximize => OptimizationDirection::Maximize,
        };
        Self {
            problem: Problem::new(dir),
            vars: Vec::new(),
        }
    }

    /// Adds a variable with objective coefficient `obj` and bounds
    /// `[lo, hi]` (infinite bounds allowed) and returns its index.
    pub fn var(&mut self, obj: f64, lo: f64, hi: f64) -> usize {
        self.vars.push(self.problem.add_var(obj, (lo, hi)));
        self.vars.len() - 1
    }

    pub fn free_var(&mut self, obj: f64) -> usize {
        self.var(obj, f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    fn add(&mut self, terms: &[(usize, f64)], op: ComparisonOp, rhs: f64) {
        let expr: Vec<(Variable, f64)> = terms
            .iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|&(i, c)| (self.vars[i], c))
            .collect();
        self.problem.add_constraint(expr.as_slice(), op, rhs);
    }

    pub fn le(&mut self, terms: &[(usize, f64)], rhs: f64) {
        self.add(terms, ComparisonOp::Le, rhs);
    }

    pub fn ge(&mut self, terms: &[(usize, f64)], rhs: f64) {
        self.add(terms, ComparisonOp::Ge, rhs);
    }

    pub fn eq(&mut self, terms: &[(usize, f64)], rhs: f64) {
        self.add(terms, ComparisonOp::Eq, rhs);
    }

    pub fn solve(&self) -> std::result::Result<LpSolution, LpFailure> {
        // minilp unwraps the LU factorisation of the basis and panics when
        // it is singular.
        let solved = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| self.problem.solve()));
        match solved {
            Ok(Ok(sol)) => Ok(LpSolution {
                objective: sol.objective(),
                values: self.vars.iter().map(|&v| *sol.var_value(v)).collect(),
            }),
            Ok(Err(minilp::Error::Infeasible)) => Err(LpFailure::Infeasible),
            Ok(Err(minilp::Error::Unbounded)) => Err(LpFailure::Unbounded),
            Err(_) => Err(LpFailure::Numerical),
        }
    }

    /// Solves a program that is feasible and bounded by construction.
    pub fn solve_expected(&self, what: &str) -> Result<LpSolution> {
        self.solve()
            .map_err(|f| Error::Internal(format!("{what}: linear program {f:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_program() {
        // max x + y  s.t.  x + 2y <= 4, 3x + y <= 6, x, y >= 0  -> (1.6, 1.2)
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.var(1.0, 0.0, f64::INFINITY);
        let y = lp.var(1.0, 0.0, f64::INFINITY);
        lp.le(&[(x, 1.0), (y, 2.0)], 4.0);
        lp.le(&[(x, 3.0), (y, 1.0)], 6.0);
        let sol = lp.solve().unwrap();
        assert!((sol.objective - 2.8).abs() < 1e-12);
        assert!((sol.values[x] - 1.6).abs() < 1e-12);
    }

    #[test]
    fn infeasible_is_reported() {
        let mut lp = LinearProgram::new(Sense::Minimize);
        let x = lp.var(1.0, 0.0, 1.0);
        lp.ge(&[(x, 1.0)], 2.0);
        assert_eq!(lp.solve().unwrap_err(), LpFailure::Infeasible);
    }
}
