//! Eccentrically p-approximating constants.
//!
//! The left-hand supremum over `z in K2` decomposes pointwise, so the
//! constant is the largest eccentric p-summing constant among the
//! functionals `x -> d_N(Tx, z)`, each with its own Pietsch measure.

use rayon::prelude::*;

use super::pietsch::{pietsch_functional, DominationReport, MetricMap, PietschCertificate};
use super::{Constant, ProbabilityMeasure};
use crate::error::{Error, Result};
use crate::metric::{check_p, LipschitzFunctional};
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct ApproximatingConstant {
    pub constant: Constant,
    /// One certificate per `z` in `K2`, in input order.
    pub per_z: Vec<(usize, PietschCertificate)>,
    /// First `z` with an infinite constant and its witness pair.
    pub witness: Option<(usize, (usize, usize))>,
}

impl ApproximatingConstant {
    /// The measure `sum_z nu(z) mu_z` on `K1`, for mixing weights `nu` on `K2`.
    pub fn mixed_measure(&self, nu: &ProbabilityMeasure) -> Result<ProbabilityMeasure> {
        let mut parts = Vec::new();
        for (z, w) in nu.weights() {
            let (_, cert) = self
                .per_z
                .iter()
                .find(|(zz, _)| zz == z)
                .ok_or_else(|| Error::input(format!("mixing weight on point {} outside K2", z)))?;
            let mu = cert.measure.as_ref().ok_or_else(|| {
                Error::input(format!("certificate for point {} is infinite; nothing to mix", z))
            })?;
            parts.push((*w, mu));
        }
        ProbabilityMeasure::mixture(parts)
    }
}

/// `f_z o T` for `f_z = d_N(., z)`.
fn composed_distance(t: &MetricMap, z: usize) -> LipschitzFunctional {
    LipschitzFunctional::new(t.images().iter().map(|&tx| t.codomain.distance(tx, z)).collect())
}

pub fn approximating_constant(
    t: &MetricMap,
    k1: &[usize],
    k2: &[usize],
    p: f64,
    tol: &ToleranceConfig,
) -> Result<ApproximatingConstant> {
    check_p(p)?;
    t.domain.check_subset(k1)?;
    t.codomain.check_subset(k2)?;
    let per_z: Vec<(usize, PietschCertificate)> = k2
        .par_iter()
        .map(|&z| {
            let f = composed_distance(t, z);
            pietsch_functional(&t.domain, &f, k1, p, tol).map(|c| (z, c))
        })
        .collect::<Result<_>>()?;
    let constant = per_z
        .iter()
        .map(|(_, c)| c.constant)
        .fold(Constant::Finite(0.0), Constant::max);
    let witness = per_z
        .iter()
        .find_map(|(z, c)| c.witness_pair.filter(|_| !c.constant.is_finite()).map(|w| (*z, w)));
    Ok(ApproximatingConstant { constant, per_z, witness })
}

/// Checks the two-measure domination
/// `int_N |d_N(Tx,y) - d_N(Tx',y)|^p dnu(y) <= Q^p int_M |d_M(x,w) - d_M(x',w)|^p dmu_M(w)`
/// for all pairs, with `mu_M` the mixture of the per-z measures and `Q` the
/// approximating constant.
pub fn verify_mixed_domination(
    t: &MetricMap,
    result: &ApproximatingConstant,
    nu: &ProbabilityMeasure,
    p: f64,
    tol: &ToleranceConfig,
) -> Result<DominationReport> {
    let q = result
        .constant
        .finite()
        .ok_or_else(|| Error::input("approximating constant is infinite"))?;
    let mu_m = result.mixed_measure(nu)?;
    let qp = q.powf(p);
    let n = t.domain.len();
    let mut worst = (f64::NEG_INFINITY, None);
    for x in 0..n {
        for y in x + 1..n {
            let lhs = nu.integrate(|z| {
                (t.codomain.distance(t.image(x), z) - t.codomain.distance(t.image(y), z)).abs().powf(p)
            });
            let rhs = qp
                * mu_m.integrate(|w| (t.domain.distance(x, w) - t.domain.distance(y, w)).abs().powf(p));
            let scale = 1.0 + lhs.abs();
            let violation = (lhs - rhs) / scale;
            if violation > worst.0 {
                worst = (violation, Some((x, y)));
            }
        }
    }
    let worst_violation = if n < 2 { 0.0 } else { worst.0 };
    Ok(DominationReport { worst_violation, worst_pair: worst.1, passes: worst_violation <= tol.feas })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{FiniteMetricSpace, SquareMatrix};

    fn two_point() -> FiniteMetricSpace {
        FiniteMetricSpace::new(
            vec!["a".into(), "b".into()],
            SquareMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap(),
            0,
            false,
        )
        .unwrap()
    }

    #[test]
    fn identity_on_two_points() {
        let t = MetricMap::identity(two_point());
        let r = approximating_constant(&t, &[0, 1], &[0, 1], 1.0, &ToleranceConfig::default()).unwrap();
        assert!((r.constant.finite().unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(r.per_z.len(), 2);
        assert!(r.witness.is_none());
    }

    #[test]
    fn constant_map_is_zero() {
        let t = MetricMap::constant(two_point(), two_point(), 0).unwrap();
        let r = approximating_constant(&t, &[0], &[0, 1], 2.0, &ToleranceConfig::default()).unwrap();
        assert_eq!(r.constant, Constant::Finite(0.0));
    }

    #[test]
    fn mixing_rejects_foreign_points() {
        let t = MetricMap::identity(two_point());
        let r = approximating_constant(&t, &[0, 1], &[0], 1.0, &ToleranceConfig::default()).unwrap();
        assert!(r.mixed_measure(&ProbabilityMeasure::dirac(1)).is_err());
        assert!(r.mixed_measure(&ProbabilityMeasure::dirac(0)).is_ok());
    }
}
