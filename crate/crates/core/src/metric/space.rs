use std::collections::HashSet;

use serde::Serialize;

use super::SquareMatrix;
use crate::error::{Error, Result};

/// A finite (pseudo)metric space with a distinguished base point.
///
/// Construction only checks shape and finiteness; the metric axioms are
/// reported by [`validate_metric`] so that broken inputs can be diagnosed
/// instead of rejected outright.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    ids: Vec<String>,
    d: SquareMatrix,
    base: usize,
    pseudometric: bool,
}

impl FiniteMetricSpace {
    pub fn new(ids: Vec<String>, d: SquareMatrix, base: usize, pseudometric: bool) -> Result<Self> {
        if ids.is_empty() {
            return Err(Error::input("metric space needs at least one point"));
        }
        if ids.len() != d.n() {
            return Err(Error::input(format!(
                "{} point ids but a {}x{} distance matrix",
                ids.len(),
                d.n(),
                d.n()
            )));
        }
        let mut seen = HashSet::new();
        for id in &ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::input(format!("duplicate point id {:?}", id)));
            }
        }
        if base >= ids.len() {
            return Err(Error::input(format!("base point index {} out of range", base)));
        }
        for i in 0..d.n() {
            for j in 0..d.n() {
                if !d.get(i, j).is_finite() {
                    return Err(Error::input(format!(
                        "distance between {} and {} is not finite",
                        ids[i], ids[j]
                    )));
                }
            }
        }
        Ok(FiniteMetricSpace { ids, d, base, pseudometric })
    }

    /// Points named `x0, x1, ...`, base point `x0`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = SquareMatrix::from_rows(rows)?;
        let ids = (0..d.n()).map(|i| format!("x{}", i)).collect();
        Self::new(ids, d, 0, false)
    }

    /// Every pair of distinct points at distance one.
    pub fn discrete(ids: Vec<String>) -> Result<Self> {
        let n = ids.len();
        Self::new(ids, SquareMatrix::from_fn(n, |i, j| if i == j { 0.0 } else { 1.0 }), 0, false)
    }

    /// Points of the real line with the absolute-value distance.
    pub fn real_line(ids: Vec<String>, coords: &[f64], base: usize) -> Result<Self> {
        let n = coords.len();
        Self::new(ids, SquareMatrix::from_fn(n, |i, j| (coords[i] - coords[j]).abs()), base, false)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.d.get(i, j)
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.d
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn is_pseudometric(&self) -> bool {
        self.pseudometric
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn indices_of<S: AsRef<str>>(&self, ids: &[S]) -> Result<Vec<usize>> {
        ids.iter()
            .map(|id| {
                self.index_of(id.as_ref())
                    .ok_or_else(|| Error::input(format!("unknown point id {:?}", id.as_ref())))
            })
            .collect()
    }

    pub fn all_points(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::input(format!(
                "point index {} out of range for a space of {} points",
                i,
                self.len()
            )));
        }
        Ok(())
    }

    /// Validates a point subset: nonempty, indices in range.
    pub(crate) fn check_subset(&self, s: &[usize]) -> Result<()> {
        if s.is_empty() {
            return Err(Error::input("point subset must be nonempty"));
        }
        s.iter().try_for_each(|&i| self.check_index(i))
    }
}

/// One failed metric axiom, with a witnessing pair or triple of indices.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    Negative { i: usize, j: usize, value: f64 },
    NonzeroDiagonal { i: usize, value: f64 },
    Asymmetric { i: usize, j: usize, forward: f64, backward: f64 },
    /// Distinct points at distance zero in a space declared to be a metric.
    ZeroDistance { i: usize, j: usize },
    /// `d(i,k) > d(i,j) + d(j,k)` by `excess`.
    Triangle { i: usize, j: usize, k: usize, excess: f64 },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the (pseudo)metric axioms on raw rows; fails only on a shape error.
pub fn validate_matrix(rows: &[Vec<f64>], pseudometric: bool, tol: f64) -> Result<ValidationReport> {
    if rows.is_empty() {
        return Err(Error::input("distance matrix must have at least one row"));
    }
    let d = SquareMatrix::from_rows(rows)?;
    Ok(check_axioms(&d, pseudometric, tol))
}

/// Lists every violated axiom of `space` at slack `tol`.
pub fn validate_metric(space: &FiniteMetricSpace, tol: f64) -> ValidationReport {
    check_axioms(space.matrix(), space.is_pseudometric(), tol)
}

pub(crate) fn check_axioms(d: &SquareMatrix, pseudometric: bool, tol: f64) -> ValidationReport {
    let n = d.n();
    let mut violations = Vec::new();
    for i in 0..n {
        let dii = d.get(i, i);
        if dii.abs() > tol {
            violations.push(Violation::NonzeroDiagonal { i, value: dii });
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let dij = d.get(i, j);
            if dij < -tol {
                violations.push(Violation::Negative { i, j, value: dij });
            }
            if i < j {
                let dji = d.get(j, i);
                if (dij - dji).abs() > tol {
                    violations.push(Violation::Asymmetric { i, j, forward: dij, backward: dji });
                }
                if !pseudometric && dij.abs() <= tol && dji.abs() <= tol {
                    violations.push(Violation::ZeroDistance { i, j });
                }
            }
        }
    }
    for i in 0..n {
        for k in 0..n {
            if i == k {
                continue;
            }
            let dik = d.get(i, k);
            for j in 0..n {
                if j == i || j == k {
                    continue;
                }
                let excess = dik - d.get(i, j) - d.get(j, k);
                if excess > tol {
                    violations.push(Violation::Triangle { i, j, k, excess });
                }
            }
        }
    }
    ValidationReport { violations }
}

/// True when `d` is a pseudometric at slack `tol`.
pub fn is_pseudometric_matrix(d: &SquareMatrix, tol: f64) -> bool {
    check_axioms(d, true, tol).is_valid()
}
