use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Tolerance on the total mass of a probability measure.
pub const MASS_TOL: f64 = 1e-9;

/// A finitely supported probability measure on point indices.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMeasure {
    weights: BTreeMap<usize, f64>,
}

impl ProbabilityMeasure {
    pub fn new(weights: BTreeMap<usize, f64>) -> Result<Self> {
        if let Some((i, w)) = weights.iter().find(|(_, w)| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::input(format!("measure weight {} at point {} is not >= 0", w, i)));
        }
        let total: f64 = weights.values().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::input(format!("measure weights sum to {}, not 1", total)));
        }
        Ok(ProbabilityMeasure { weights })
    }

    pub fn dirac(point: usize) -> Self {
        ProbabilityMeasure { weights: BTreeMap::from([(point, 1.0)]) }
    }

    /// Equal mass on every listed point; fails on an empty list.
    pub fn uniform(points: &[usize]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::input("uniform measure needs a nonempty support"));
        }
        let mut weights = BTreeMap::new();
        for &p in points {
            weights.insert(p, 0.0);
        }
        let w = 1.0 / weights.len() as f64;
        weights.values_mut().for_each(|v| *v = w);
        Ok(ProbabilityMeasure { weights })
    }

    /// Drops zero weights and rescales to unit mass; for measures read off
    /// LP duals.
    pub(crate) fn from_raw(raw: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let kept: Vec<(usize, f64)> = raw.into_iter().map(|(i, w)| (i, w.max(0.0))).collect();
        let total: f64 = kept.iter().map(|t| t.1).sum();
        if !(total > 0.0) {
            return Err(Error::NumericalFailure {
                message: "dual multipliers carry no mass".into(),
                iterations: 0,
                pivot: 0.0,
            });
        }
        let weights = kept.into_iter().filter(|t| t.1 > 0.0).map(|(i, w)| (i, w / total)).collect();
        Ok(ProbabilityMeasure { weights })
    }

    pub fn weights(&self) -> &BTreeMap<usize, f64> {
        &self.weights
    }

    pub fn weight(&self, point: usize) -> f64 {
        self.weights.get(&point).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> Vec<usize> {
        self.weights.iter().filter(|(_, w)| **w > 0.0).map(|(i, _)| *i).collect()
    }

    /// `sum_w mu(w) g(w)`.
    pub fn integrate(&self, mut g: impl FnMut(usize) -> f64) -> f64 {
        self.weights.iter().filter(|(_, w)| **w > 0.0).map(|(&i, &w)| w * g(i)).sum()
    }

    pub(crate) fn check_within(&self, n: usize) -> Result<()> {
        match self.weights.keys().find(|&&i| i >= n) {
            Some(i) => Err(Error::input(format!(
                "measure charges point {} outside a space of {} points",
                i, n
            ))),
            None => Ok(()),
        }
    }

    /// `sum_z nu(z) mu_z`.
    pub fn mixture<'a>(parts: impl IntoIterator<Item = (f64, &'a ProbabilityMeasure)>) -> Result<Self> {
        let mut weights: BTreeMap<usize, f64> = BTreeMap::new();
        for (nu, mu) in parts {
            for (&i, &w) in &mu.weights {
                *weights.entry(i).or_insert(0.0) += nu * w;
            }
        }
        ProbabilityMeasure::new(weights)
    }
}

/// A nonnegative constant that may be infinite; serialized as a number or
/// the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Constant {
    Finite(f64),
    Infinite,
}

impl Constant {
    pub fn is_finite(&self) -> bool {
        matches!(self, Constant::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            Constant::Finite(v) => Some(v),
            Constant::Infinite => None,
        }
    }

    /// `f64::INFINITY` for the infinite case.
    pub fn as_f64(&self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    pub fn max(self, other: Constant) -> Constant {
        match (self, other) {
            (Constant::Finite(a), Constant::Finite(b)) => Constant::Finite(a.max(b)),
            _ => Constant::Infinite,
        }
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Finite(v) => write!(f, "{}", v),
            Constant::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Constant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Constant::Finite(v) => s.serialize_f64(*v),
            Constant::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Constant {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Number(v) if v.is_finite() && v >= 0.0 => Ok(Constant::Finite(v)),
            Repr::Text(s) if s == "inf" => Ok(Constant::Infinite),
            _ => Err(serde::de::Error::custom("expected a nonnegative number or \"inf\"")),
        }
    }
}
