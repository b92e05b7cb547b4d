use std::collections::BTreeMap;

use super::FiniteMetricSpace;
use crate::error::{Error, Result};

/// Tolerance on the coefficient sum of a molecule.
pub const MOLECULE_SUM_TOL: f64 = 1e-12;

/// A finite weighted list of point pairs `(x_i, y_i)` with weights `a_i >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSequence {
    pairs: Vec<(usize, usize)>,
    weights: Vec<f64>,
}

impl PairSequence {
    /// `weights` defaults to all ones.
    pub fn new(pairs: Vec<(usize, usize)>, weights: Option<Vec<f64>>) -> Result<Self> {
        let weights = match weights {
            Some(w) => {
                if w.len() != pairs.len() {
                    return Err(Error::input(format!(
                        "{} pairs but {} weights",
                        pairs.len(),
                        w.len()
                    )));
                }
                if let Some(bad) = w.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
                    return Err(Error::input(format!("pair weight {} is not a nonnegative real", bad)));
                }
                w
            }
            None => vec![1.0; pairs.len()],
        };
        Ok(PairSequence { pairs, weights })
    }

    pub fn unit(pairs: Vec<(usize, usize)>) -> Self {
        let weights = vec![1.0; pairs.len()];
        PairSequence { pairs, weights }
    }

    pub fn empty() -> Self {
        PairSequence { pairs: Vec::new(), weights: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(x, y, weight)` triples.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.pairs.iter().zip(&self.weights).map(|(&(x, y), &a)| (x, y, a))
    }

    pub(crate) fn check_against(&self, space: &FiniteMetricSpace) -> Result<()> {
        for &(x, y) in &self.pairs {
            space.check_index(x)?;
            space.check_index(y)?;
        }
        Ok(())
    }
}

/// A finitely supported real function on the points whose values sum to
/// zero: a finite combination of `chi_x - chi_z`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Molecule {
    coefficients: BTreeMap<usize, f64>,
}

impl Molecule {
    /// Fails when the coefficients do not sum to zero within
    /// [`MOLECULE_SUM_TOL`] (scaled by the total mass when it exceeds one).
    pub fn new(coefficients: BTreeMap<usize, f64>) -> Result<Self> {
        let sum: f64 = coefficients.values().sum();
        let mass: f64 = coefficients.values().map(|c| c.abs()).sum();
        if coefficients.values().any(|c| !c.is_finite()) {
            return Err(Error::input("molecule coefficient is not finite"));
        }
        if sum.abs() > MOLECULE_SUM_TOL * mass.max(1.0) {
            return Err(Error::input(format!("molecule coefficients sum to {:e}, not 0", sum)));
        }
        Ok(Molecule { coefficients })
    }

    pub fn zero() -> Self {
        Molecule::default()
    }

    /// `chi_x - chi_y`.
    pub fn dipole(x: usize, y: usize) -> Self {
        let mut m = Molecule::zero();
        m.add_dipole(x, y, 1.0);
        m
    }

    /// `sum_i lambda_i (chi_{x_i} - chi_{y_i})`.
    pub fn from_pairs(pairs: &[(usize, usize)], lambda: &[f64]) -> Self {
        let mut m = Molecule::zero();
        for (&(x, y), &l) in pairs.iter().zip(lambda) {
            m.add_dipole(x, y, l);
        }
        m
    }

    fn add_dipole(&mut self, x: usize, y: usize, scale: f64) {
        if x == y || scale == 0.0 {
            return;
        }
        *self.coefficients.entry(x).or_insert(0.0) += scale;
        *self.coefficients.entry(y).or_insert(0.0) -= scale;
    }

    pub fn coefficients(&self) -> &BTreeMap<usize, f64> {
        &self.coefficients
    }

    /// Points carrying a nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.coefficients.iter().filter(|(_, c)| **c != 0.0).map(|(i, _)| *i).collect()
    }

    /// `<m, f> = sum_x m(x) f(x)`.
    pub fn pairing(&self, f: &LipschitzFunctional) -> f64 {
        self.coefficients.iter().map(|(&i, &c)| c * f.values[i]).sum()
    }

    pub(crate) fn check_against(&self, space: &FiniteMetricSpace) -> Result<()> {
        self.coefficients.keys().try_for_each(|&i| space.check_index(i))
    }
}

/// A real function on every point of a space.
#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzFunctional {
    pub values: Vec<f64>,
}

impl LipschitzFunctional {
    pub fn new(values: Vec<f64>) -> Self {
        LipschitzFunctional { values }
    }

    pub fn zero(n: usize) -> Self {
        LipschitzFunctional { values: vec![0.0; n] }
    }

    /// `f_y(x) = d(x, y) - d(y, base)`, a 1-Lipschitz function vanishing at
    /// the base point.
    pub fn distance_to(space: &FiniteMetricSpace, y: usize) -> Self {
        let shift = space.distance(y, space.base());
        LipschitzFunctional { values: (0..space.len()).map(|x| space.distance(x, y) - shift).collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled(&self, s: f64) -> Self {
        LipschitzFunctional { values: self.values.iter().map(|v| v * s).collect() }
    }

    pub(crate) fn check_against(&self, n: usize) -> Result<()> {
        if self.values.len() != n {
            return Err(Error::input(format!(
                "functional has {} values but the space has {} points",
                self.values.len(),
                n
            )));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("functional has a non-finite value"));
        }
        Ok(())
    }
}
