//! Arens-Eells (Lipschitz-free) norms of molecules.
//!
//! `||m|| = sup { <m, f> : Lip(f) <= 1, f(base) = 0 }`. The supremum is the
//! dual of a min-cost flow on the support of `m`: ship the positive mass to
//! the negative mass along arcs priced by the distance. The node potentials
//! of the optimal flow are a 1-Lipschitz maximizer on the support, which is
//! then extended to the whole space by the McShane formula.

use super::{FiniteMetricSpace, LipschitzFunctional, Molecule};
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LinearProgram, Relation};
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct AeNorm {
    pub value: f64,
    /// 1-Lipschitz, vanishing at the base point, attaining `value`.
    pub witness: LipschitzFunctional,
}

/// Norm of `m` in the Arens-Eells space of `space`, with a maximizing
/// 1-Lipschitz function.
pub fn ae_norm(space: &FiniteMetricSpace, m: &Molecule, tol: &ToleranceConfig) -> Result<AeNorm> {
    m.check_against(space)?;
    let support = m.support();
    if support.len() < 2 {
        return Ok(AeNorm { value: 0.0, witness: LipschitzFunctional::zero(space.len()) });
    }
    let s = support.len();
    let coef: Vec<f64> = support.iter().map(|i| m.coefficients()[i]).collect();

    // Arc (a -> b) for every ordered pair of support points; one
    // conservation row per support point except the last (the system has
    // rank s - 1, and the dropped node gets potential zero).
    let arcs: Vec<(usize, usize)> =
        (0..s).flat_map(|a| (0..s).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let objective: Vec<f64> =
        arcs.iter().map(|&(a, b)| -space.distance(support[a], support[b])).collect();
    let mut lp = LinearProgram::new(objective);
    for node in 0..s - 1 {
        let row: Vec<f64> = arcs
            .iter()
            .map(|&(a, b)| {
                if a == node {
                    1.0
                } else if b == node {
                    -1.0
                } else {
                    0.0
                }
            })
            .collect();
        lp.add_constraint(row, Relation::Eq, coef[node]);
    }
    let sol = solve_lp(&lp, tol)?;
    if !sol.is_optimal() {
        return Err(Error::NumericalFailure {
            message: format!("transport LP for the Arens-Eells norm returned {:?}", sol.status),
            iterations: sol.iterations,
            pivot: 0.0,
        });
    }
    let value = (-sol.objective).max(0.0);

    let mut on_support = vec![0.0; s];
    for node in 0..s - 1 {
        on_support[node] = -sol.dual[node];
    }
    let witness = mcshane_extension(space, &support, &on_support);
    Ok(AeNorm { value, witness })
}

/// `F(x) = min_z (f(z) + d(x, z))` over the given points, shifted to vanish
/// at the base point.
pub(crate) fn mcshane_extension(
    space: &FiniteMetricSpace,
    points: &[usize],
    values: &[f64],
) -> LipschitzFunctional {
    let raw: Vec<f64> = (0..space.len())
        .map(|x| {
            points
                .iter()
                .zip(values)
                .map(|(&z, &fz)| fz + space.distance(x, z))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let shift = raw[space.base()];
    LipschitzFunctional::new(raw.into_iter().map(|v| v - shift).collect())
}

/// Largest `f(x) - f(y) - d(x, y)` over ordered pairs; `<= 0` means 1-Lipschitz.
pub fn lipschitz_excess(space: &FiniteMetricSpace, f: &LipschitzFunctional) -> f64 {
    let n = space.len();
    let mut worst = f64::NEG_INFINITY;
    for x in 0..n {
        for y in 0..n {
            if x != y {
                worst = worst.max(f.values[x] - f.values[y] - space.distance(x, y));
            }
        }
    }
    if n < 2 {
        0.0
    } else {
        worst
    }
}
