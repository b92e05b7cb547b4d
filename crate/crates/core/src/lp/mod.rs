//! Dense linear-programming kernel.
//!
//! Every optimization in the crate (Arens-Eells norms, Pietsch measures,
//! weak-proximity brackets) is phrased as a [`LinearProgram`] in
//! maximization form and handed to [`solve_lp`].

mod dump;
mod simplex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use simplex::solve_lp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

/// `maximize objective·x` subject to `rows[i]·x (relation) rhs[i]` and
/// `bounds[j].0 <= x[j] <= bounds[j].1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub relations: Vec<Relation>,
    pub rhs: Vec<f64>,
    pub bounds: Vec<(f64, f64)>,
}

impl LinearProgram {
    /// A program with no constraints and every variable in `[0, +inf)`.
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            rows: Vec::new(),
            relations: Vec::new(),
            rhs: Vec::new(),
            bounds: vec![(0.0, f64::INFINITY); n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.rows.len()
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) -> &mut Self {
        self.bounds[var] = (lower, upper);
        self
    }

    pub fn free(&mut self, var: usize) -> &mut Self {
        self.set_bounds(var, f64::NEG_INFINITY, f64::INFINITY)
    }

    /// Appends a constraint and returns its row index.
    pub fn add_constraint(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> usize {
        self.rows.push(coeffs);
        self.relations.push(relation);
        self.rhs.push(rhs);
        self.rows.len() - 1
    }

    pub fn check_dimensions(&self) -> Result<()> {
        let n = self.objective.len();
        if self.relations.len() != self.rows.len() || self.rhs.len() != self.rows.len() {
            return Err(Error::input(format!(
                "LP has {} rows, {} relations and {} right-hand sides",
                self.rows.len(),
                self.relations.len(),
                self.rhs.len()
            )));
        }
        if self.bounds.len() != n {
            return Err(Error::input(format!(
                "LP has {} objective coefficients but {} bounds",
                n,
                self.bounds.len()
            )));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(format!(
                    "LP row {} has {} columns, expected {}",
                    i,
                    row.len(),
                    n
                )));
            }
            if row.iter().any(|v| !v.is_finite()) || !self.rhs[i].is_finite() {
                return Err(Error::input(format!("LP row {} has a non-finite entry", i)));
            }
        }
        if self.objective.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("LP objective has a non-finite entry"));
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            if lo.is_nan() || hi.is_nan() || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
                return Err(Error::input(format!("variable {} has invalid bounds", j)));
            }
        }
        Ok(())
    }

    /// Largest violation of any row or bound by `x`.
    pub fn primal_residual(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, row) in self.rows.iter().enumerate() {
            let lhs: f64 = row.iter().zip(x).map(|(a, v)| a * v).sum();
            let viol = match self.relations[i] {
                Relation::Le => lhs - self.rhs[i],
                Relation::Ge => self.rhs[i] - lhs,
                Relation::Eq => (lhs - self.rhs[i]).abs(),
            };
            worst = worst.max(viol);
        }
        for (&(lo, hi), &v) in self.bounds.iter().zip(x) {
            worst = worst.max(lo - v).max(v - hi);
        }
        worst
    }

    /// `max_i |y_i * (rhs_i - row_i·x)|`.
    pub fn complementary_slackness_residual(&self, x: &[f64], y: &[f64]) -> f64 {
        self.rows
            .iter()
            .zip(&self.rhs)
            .zip(y)
            .map(|((row, b), yi)| {
                let lhs: f64 = row.iter().zip(x).map(|(a, v)| a * v).sum();
                (yi * (b - lhs)).abs()
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Values of the original variables; empty unless optimal.
    pub primal: Vec<f64>,
    /// One multiplier per constraint row (nonnegative on `<=` rows,
    /// nonpositive on `>=` rows); empty unless optimal.
    pub dual: Vec<f64>,
    pub objective: f64,
    /// Objective of the dual program evaluated at `dual` and the implied
    /// bound multipliers.
    pub dual_objective: f64,
    pub iterations: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    pub(crate) fn without_values(status: LpStatus, iterations: usize) -> Self {
        let objective = match status {
            LpStatus::Unbounded => f64::INFINITY,
            _ => f64::NEG_INFINITY,
        };
        LpSolution {
            status,
            primal: Vec::new(),
            dual: Vec::new(),
            objective,
            dual_objective: objective,
            iterations,
        }
    }
}
