//! Minimal eccentric p-summing constants and their Pietsch measures.
//!
//! For a numerator `N(x, y) >= 0` (either `|f(x) - f(y)|` or
//! `d_N(Tx, Ty)`), the smallest `C` with
//!
//! ```text
//! N(x, y)^p <= C^p * sum_{w in K} mu(w) |d(x, w) - d(y, w)|^p   for all pairs
//! ```
//!
//! over probability measures `mu` on `K` is `C = t*^(-1/p)`, where `t*` is
//! the optimum of the pair of programs
//!
//! ```text
//! max t   s.t. sum_w mu_w A[pair, w] >= t B[pair],  sum mu = 1, mu >= 0
//! min s   s.t. sum_pair a_pair A[pair, w] <= s (w in K), sum a B = 1, a >= 0
//! ```
//!
//! with `A[pair, w] = |d(x, w) - d(y, w)|^p` and `B[pair] = N(x, y)^p`.
//! The second program (one row per `w`) is handed to the solver; its
//! multipliers are `mu`, and its solution `a` is a weighted pair sequence
//! whose summing ratio equals `C`, certifying minimality.

use serde::Serialize;

use super::{Constant, ProbabilityMeasure};
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LinearProgram, Relation};
use crate::metric::{check_p, FiniteMetricSpace, LipschitzFunctional, PairSequence};
use crate::tolerance::ToleranceConfig;

/// Below this, a numerator and denominator are both treated as noise.
pub const TINY: f64 = 1e-14;

/// Relative threshold under which the eccentric denominator of a pair is
/// considered to vanish on `K`.
pub const DEGENERATE_REL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairSlack {
    pub x: usize,
    pub y: usize,
    /// `C^p * int |d(x,.) - d(y,.)|^p dmu - N(x,y)^p`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PietschCertificate {
    pub p: f64,
    pub constant: Constant,
    /// Absent when the constant is infinite.
    pub measure: Option<ProbabilityMeasure>,
    pub slack: Vec<PairSlack>,
    /// Weighted pairs whose summing ratio attains `constant`.
    pub dual_witness: Option<PairSequence>,
    /// Present when infinite: a pair with positive numerator whose distance
    /// profiles agree on all of `K`.
    pub witness_pair: Option<(usize, usize)>,
    /// Pairs with zero numerator (no constraint).
    pub skipped_zero: usize,
    /// Pairs skipped because numerator and denominator were both below [`TINY`].
    pub flagged_tiny: Vec<(usize, usize)>,
}

impl PietschCertificate {
    /// Smallest slack, or `None` when there are no constrained pairs.
    pub fn min_slack(&self) -> Option<f64> {
        self.slack.iter().map(|s| s.value).reduce(f64::min)
    }
}

/// A map between two finite metric spaces, given by point indices.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMap {
    pub domain: FiniteMetricSpace,
    pub codomain: FiniteMetricSpace,
    images: Vec<usize>,
}

impl MetricMap {
    pub fn new(domain: FiniteMetricSpace, codomain: FiniteMetricSpace, images: Vec<usize>) -> Result<Self> {
        if images.len() != domain.len() {
            return Err(Error::input(format!(
                "map defines {} images for a domain of {} points",
                images.len(),
                domain.len()
            )));
        }
        for &i in &images {
            codomain.check_index(i)?;
        }
        Ok(MetricMap { domain, codomain, images })
    }

    pub fn identity(space: FiniteMetricSpace) -> Self {
        let images = space.all_points();
        MetricMap { codomain: space.clone(), domain: space, images }
    }

    pub fn constant(domain: FiniteMetricSpace, codomain: FiniteMetricSpace, point: usize) -> Result<Self> {
        let images = vec![point; domain.len()];
        Self::new(domain, codomain, images)
    }

    pub fn image(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }
}

fn denominators(space: &FiniteMetricSpace, x: usize, y: usize, k: &[usize], p: f64) -> Vec<f64> {
    k.iter().map(|&w| (space.distance(x, w) - space.distance(y, w)).abs().powf(p)).collect()
}

struct Constrained {
    x: usize,
    y: usize,
    b: f64,
    a: Vec<f64>,
}

/// Core solver shared by the functional and map variants.
fn solve_pietsch(
    space: &FiniteMetricSpace,
    numerator: impl Fn(usize, usize) -> f64,
    k: &[usize],
    p: f64,
    tol: &ToleranceConfig,
) -> Result<PietschCertificate> {
    check_p(p)?;
    space.check_subset(k)?;
    let n = space.len();
    let dscale = space.matrix().max_entry().max(1.0);

    let mut rows: Vec<Constrained> = Vec::new();
    let mut skipped_zero = 0;
    let mut flagged_tiny = Vec::new();
    let mut infinite: Option<(usize, usize)> = None;

    for x in 0..n {
        for y in x + 1..n {
            let num = numerator(x, y);
            if num == 0.0 {
                skipped_zero += 1;
                continue;
            }
            let den = k
                .iter()
                .map(|&w| (space.distance(x, w) - space.distance(y, w)).abs())
                .fold(0.0, f64::max);
            if num < TINY && den < TINY {
                flagged_tiny.push((x, y));
                continue;
            }
            if den <= DEGENERATE_REL * dscale {
                infinite.get_or_insert((x, y));
                continue;
            }
            rows.push(Constrained { x, y, b: num.powf(p), a: denominators(space, x, y, k, p) });
        }
    }

    if let Some(pair) = infinite {
        return Ok(PietschCertificate {
            p,
            constant: Constant::Infinite,
            measure: None,
            slack: Vec::new(),
            dual_witness: None,
            witness_pair: Some(pair),
            skipped_zero,
            flagged_tiny,
        });
    }
    if rows.is_empty() {
        return Ok(PietschCertificate {
            p,
            constant: Constant::Finite(0.0),
            measure: Some(ProbabilityMeasure::uniform(k)?),
            slack: Vec::new(),
            dual_witness: Some(PairSequence::empty()),
            witness_pair: None,
            skipped_zero,
            flagged_tiny,
        });
    }

    let b_max = rows.iter().map(|r| r.b).fold(0.0, f64::max);
    let a_max = rows.iter().flat_map(|r| r.a.iter().copied()).fold(0.0, f64::max);
    let np = rows.len();

    // Each pair column is scaled to unit maximum; a pair with a tiny
    // numerator would otherwise carry entries far below the pivot tolerance.
    let col_scale: Vec<f64> = rows
        .iter()
        .map(|r| r.a.iter().fold(r.b / b_max, |m, &a| m.max(a / a_max)))
        .collect();

    // Variables: scaled pair weights, then s.
    let mut objective = vec![0.0; np + 1];
    objective[np] = -1.0;
    let mut lp = LinearProgram::new(objective);
    for wi in 0..k.len() {
        let mut row: Vec<f64> = rows.iter().zip(&col_scale).map(|(r, cs)| r.a[wi] / a_max / cs).collect();
        row.push(-1.0);
        lp.add_constraint(row, Relation::Le, 0.0);
    }
    let mut norm_row: Vec<f64> = rows.iter().zip(&col_scale).map(|(r, cs)| r.b / b_max / cs).collect();
    norm_row.push(0.0);
    lp.add_constraint(norm_row, Relation::Eq, 1.0);

    let sol = solve_lp(&lp, tol)?;
    if !sol.is_optimal() {
        return Err(Error::NumericalFailure {
            message: format!("Pietsch LP returned {:?}", sol.status),
            iterations: sol.iterations,
            pivot: 0.0,
        });
    }
    let s_hat = sol.primal[np];
    if !(s_hat > 0.0) {
        return Err(Error::NumericalFailure {
            message: "Pietsch LP optimum is zero although every pair has a positive denominator".into(),
            iterations: sol.iterations,
            pivot: 0.0,
        });
    }
    let t_star = s_hat * a_max / b_max;
    let c = t_star.powf(-1.0 / p);

    let measure = ProbabilityMeasure::from_raw(k.iter().enumerate().map(|(wi, &w)| (w, sol.dual[wi])))?;
    let cp = c.powf(p);
    let slack = rows
        .iter()
        .map(|r| {
            let integral: f64 = k.iter().zip(&r.a).map(|(&w, a)| measure.weight(w) * a).sum();
            PairSlack { x: r.x, y: r.y, value: cp * integral - r.b }
        })
        .collect();

    let (pairs, weights): (Vec<_>, Vec<_>) = rows
        .iter()
        .zip(sol.primal[..np].iter().zip(&col_scale))
        .filter(|(_, (&a, _))| a > 0.0)
        .map(|(r, (&a, cs))| ((r.x, r.y), a / cs))
        .unzip();
    let dual_witness = PairSequence::new(pairs, Some(weights))?;

    Ok(PietschCertificate {
        p,
        constant: Constant::Finite(c),
        measure: Some(measure),
        slack,
        dual_witness: Some(dual_witness),
        witness_pair: None,
        skipped_zero,
        flagged_tiny,
    })
}

/// Minimal eccentric p-summing constant of a real function `f` with respect
/// to the point set `k`, with a witnessing Pietsch measure.
pub fn pietsch_functional(
    space: &FiniteMetricSpace,
    f: &LipschitzFunctional,
    k: &[usize],
    p: f64,
    tol: &ToleranceConfig,
) -> Result<PietschCertificate> {
    f.check_against(space.len())?;
    solve_pietsch(space, |x, y| (f.values[x] - f.values[y]).abs(), k, p, tol)
}

/// Same as [`pietsch_functional`] with numerator `d_N(Tx, Ty)`.
pub fn pietsch_map(t: &MetricMap, k: &[usize], p: f64, tol: &ToleranceConfig) -> Result<PietschCertificate> {
    solve_pietsch(&t.domain, |x, y| t.codomain.distance(t.image(x), t.image(y)), k, p, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DominationReport {
    /// Largest `N(x,y) - c * (int |d(x,.) - d(y,.)|^p dmu)^(1/p)`.
    pub worst_violation: f64,
    pub worst_pair: Option<(usize, usize)>,
    pub passes: bool,
}

fn check_domination(
    space: &FiniteMetricSpace,
    numerator: impl Fn(usize, usize) -> f64,
    mu: &ProbabilityMeasure,
    c: f64,
    p: f64,
    tol: &ToleranceConfig,
) -> Result<DominationReport> {
    check_p(p)?;
    mu.check_within(space.len())?;
    let n = space.len();
    let mut worst = (f64::NEG_INFINITY, None);
    for x in 0..n {
        for y in x + 1..n {
            let integral = mu.integrate(|w| (space.distance(x, w) - space.distance(y, w)).abs().powf(p));
            let rhs = c * integral.powf(1.0 / p);
            let violation = numerator(x, y) - rhs;
            if violation > worst.0 {
                worst = (violation, Some((x, y)));
            }
        }
    }
    let worst_violation = if n < 2 { 0.0 } else { worst.0 };
    Ok(DominationReport {
        worst_violation,
        worst_pair: worst.1,
        passes: worst_violation <= tol.feas,
    })
}

/// Checks `|f(x) - f(y)| <= c (int_K |d(x,w) - d(y,w)|^p dmu(w))^(1/p)` for
/// every pair.
pub fn verify_domination(
    space: &FiniteMetricSpace,
    f: &LipschitzFunctional,
    mu: &ProbabilityMeasure,
    c: f64,
    p: f64,
    tol: &ToleranceConfig,
) -> Result<DominationReport> {
    f.check_against(space.len())?;
    check_domination(space, |x, y| (f.values[x] - f.values[y]).abs(), mu, c, p, tol)
}

/// [`verify_domination`] for a map, with numerator `d_N(Tx, Ty)`.
pub fn verify_map_domination(
    t: &MetricMap,
    mu: &ProbabilityMeasure,
    c: f64,
    p: f64,
    tol: &ToleranceConfig,
) -> Result<DominationReport> {
    check_domination(&t.domain, |x, y| t.codomain.distance(t.image(x), t.image(y)), mu, c, p, tol)
}

/// `(sum a_i |f(x_i) - f(y_i)|^p)^(1/p) / max_{w in K} (sum a_i |d(x_i,w) - d(y_i,w)|^p)^(1/p)`.
///
/// Every such ratio is a lower bound for the eccentric p-summing constant.
pub fn summing_ratio_oracle(
    space: &FiniteMetricSpace,
    f: &LipschitzFunctional,
    k: &[usize],
    p: f64,
    seq: &PairSequence,
) -> Result<f64> {
    check_p(p)?;
    space.check_subset(k)?;
    f.check_against(space.len())?;
    seq.check_against(space)?;
    let num: f64 = seq.iter().map(|(x, y, a)| a * (f.values[x] - f.values[y]).abs().powf(p)).sum();
    let den = k
        .iter()
        .map(|&w| {
            seq.iter()
                .map(|(x, y, a)| a * (space.distance(x, w) - space.distance(y, w)).abs().powf(p))
                .sum::<f64>()
        })
        .fold(0.0, f64::max);
    if den <= 0.0 {
        return Err(Error::DegenerateSequence(
            "eccentric denominator vanishes on every point of K".into(),
        ));
    }
    Ok((num / den).powf(1.0 / p))
}
