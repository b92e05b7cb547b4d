use serde::Serialize;

use super::metrics::{d_p, d_p_mu, e_p, lip_constant};
use super::{IndexFunction, WeightedGraph};
use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::summing::{Constant, PietschCertificate, ProbabilityMeasure};

/// Default threshold on `d_{p,mu}` for two vertices to count as symmetric.
pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-8;

/// Additive slack in the best-path bounds.
pub const T2_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryClasses {
    /// Classes ordered by smallest member; members ascending.
    pub classes: Vec<Vec<usize>>,
    /// Set when two vertices share a class without being within `tol` of
    /// each other.
    pub non_transitive: bool,
}

impl SymmetryClasses {
    pub fn class_of(&self, v: usize) -> Option<&[usize]> {
        self.classes.iter().find(|c| c.contains(&v)).map(|c| c.as_slice())
    }

    pub fn same_class(&self, u: usize, v: usize) -> bool {
        self.class_of(u).is_some_and(|c| c.contains(&v))
    }
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// Groups vertices joined by chains of pairs with `d_{p,mu} <= tol`.
pub fn symmetry_classes(
    g: &WeightedGraph,
    d: &FiniteMetricSpace,
    p: f64,
    mu: &ProbabilityMeasure,
    tol: f64,
) -> Result<SymmetryClasses> {
    let dm = d_p_mu(g, d, p, mu)?;
    let n = g.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for u in 0..n {
        for v in u + 1..n {
            if dm.distance(u, v) <= tol {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if slot[r] == usize::MAX {
            slot[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[slot[r]].push(v);
    }
    let non_transitive = classes
        .iter()
        .any(|c| c.iter().enumerate().any(|(i, &u)| c[i + 1..].iter().any(|&v| dm.distance(u, v) > tol)));
    if non_transitive {
        log::warn!("symmetry relation at tol {} is not transitive; classes are its transitive closure", tol);
    }
    Ok(SymmetryClasses { classes, non_transitive })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    /// The multiplier `K` in `E_p(f) <= K * D`.
    pub constant: Constant,
    /// Largest `E_p(f) - K * D` over vertex pairs.
    pub worst_excess: f64,
    pub worst_pair: Option<(usize, usize)>,
    /// Largest `E_p(f) / D` over pairs with `D > 0`.
    pub worst_ratio: f64,
    pub passes: bool,
}

fn bound_check(n: usize, e: impl Fn(usize, usize) -> f64, k: Constant, dist: impl Fn(usize, usize) -> f64) -> BoundCheck {
    let mut worst = (f64::NEG_INFINITY, None);
    let mut worst_ratio = 0.0f64;
    for u in 0..n {
        for v in u + 1..n {
            let (ev, dv) = (e(u, v), dist(u, v));
            let excess = match k {
                Constant::Finite(c) => ev - c * dv,
                Constant::Infinite if dv > 0.0 || ev <= 0.0 => f64::NEG_INFINITY,
                Constant::Infinite => ev,
            };
            if excess > worst.0 {
                worst = (excess, Some((u, v)));
            }
            if dv > 0.0 {
                worst_ratio = worst_ratio.max(ev / dv);
            }
        }
    }
    let worst_excess = if n < 2 { 0.0 } else { worst.0 };
    BoundCheck {
        constant: k,
        worst_excess,
        worst_pair: worst.1,
        worst_ratio,
        passes: worst_excess <= T2_SLACK,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct T2Report {
    /// `E_p(f) <= Lip(f) d_p`.
    pub lipschitz: BoundCheck,
    /// `E_p(f) <= C(f) d_{p,mu*}`; absent for an infinite certificate.
    pub summing: Option<BoundCheck>,
}

impl T2Report {
    pub fn passes(&self) -> bool {
        self.lipschitz.passes && self.summing.as_ref().is_none_or(|s| s.passes)
    }
}

/// Checks both best-path bounds for an index `f` against the Pietsch
/// certificate of `f` on `(d, k)`.
pub fn check_t2(
    g: &WeightedGraph,
    d: &FiniteMetricSpace,
    p: f64,
    f: &IndexFunction,
    certificate: &PietschCertificate,
) -> Result<T2Report> {
    if certificate.p != p {
        return Err(Error::input(format!(
            "certificate was computed for p = {}, not p = {}",
            certificate.p, p
        )));
    }
    let e = e_p(g, f, p)?;
    let dp = d_p(g, d, p)?;
    let lip = lip_constant(d.matrix(), f)?;
    let n = g.len();
    let lipschitz = bound_check(n, |u, v| e.distance(u, v), lip, |u, v| dp.distance(u, v));
    let summing = match (&certificate.constant, &certificate.measure) {
        (Constant::Finite(c), Some(mu)) => {
            let dm = d_p_mu(g, d, p, mu)?;
            Some(bound_check(n, |u, v| e.distance(u, v), Constant::Finite(*c), |u, v| dm.distance(u, v)))
        }
        _ => None,
    };
    Ok(T2Report { lipschitz, summing })
}
