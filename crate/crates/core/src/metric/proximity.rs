//! Eccentric pseudometrics and the proximity functionals between two
//! sequences of points: absolute (`d_ac`), eccentric (`d_cc`) and weak
//! (`d_wc`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::arens_eells::ae_norm;
use super::{FiniteMetricSpace, LipschitzFunctional, Molecule, PairSequence, SquareMatrix};
use crate::error::{Error, Result};
use crate::tolerance::ToleranceConfig;

pub(crate) fn check_p(p: f64) -> Result<()> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::input(format!("exponent p = {} must be a finite real >= 1", p)));
    }
    Ok(())
}

/// `d_S(x1, x2) = max_{y in S} |d(x1, y) - d(x2, y)|`.
pub fn eccentric_pseudometric(space: &FiniteMetricSpace, s: &[usize]) -> Result<SquareMatrix> {
    space.check_subset(s)?;
    Ok(SquareMatrix::from_fn(space.len(), |i, j| {
        s.iter()
            .map(|&y| (space.distance(i, y) - space.distance(j, y)).abs())
            .fold(0.0, f64::max)
    }))
}

/// `(sum_i a_i d(x_i, y_i)^p)^(1/p)`.
pub fn d_ac(space: &FiniteMetricSpace, seq: &PairSequence, p: f64) -> Result<f64> {
    check_p(p)?;
    seq.check_against(space)?;
    let sum: f64 = seq.iter().map(|(x, y, a)| a * space.distance(x, y).powf(p)).sum();
    Ok(sum.powf(1.0 / p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CcValue {
    pub value: f64,
    /// A point of `S` attaining the supremum.
    pub witness: usize,
}

/// `max_{y in S} (sum_i a_i |d(x_i, y) - d(y_i, y)|^p)^(1/p)`.
pub fn d_cc(space: &FiniteMetricSpace, seq: &PairSequence, p: f64, s: &[usize]) -> Result<CcValue> {
    check_p(p)?;
    space.check_subset(s)?;
    seq.check_against(space)?;
    let mut best = CcValue { value: f64::NEG_INFINITY, witness: s[0] };
    for &y in s {
        let sum: f64 = seq
            .iter()
            .map(|(x1, x2, a)| a * (space.distance(x1, y) - space.distance(x2, y)).abs().powf(p))
            .sum();
        let value = sum.powf(1.0 / p);
        if value > best.value {
            best = CcValue { value, witness: y };
        }
    }
    Ok(best)
}

/// How `d_wc` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WcMode {
    /// `p = 1` only: maximum of the Arens-Eells norm over all sign vectors.
    Exact { limit: usize },
    /// Certified bracket `[lower, upper]` for any `p`.
    Bracket { starts: usize, seed: u64 },
}

impl WcMode {
    pub const DEFAULT_EXACT_LIMIT: usize = 16;
    pub const DEFAULT_STARTS: usize = 32;
    pub const DEFAULT_SEED: u64 = 0x5eed;

    pub fn exact() -> Self {
        WcMode::Exact { limit: Self::DEFAULT_EXACT_LIMIT }
    }

    pub fn bracket() -> Self {
        WcMode::Bracket { starts: Self::DEFAULT_STARTS, seed: Self::DEFAULT_SEED }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WcMethod {
    ExactSignEnumeration,
    Bracket,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WcResult {
    pub lower: f64,
    pub upper: f64,
    pub method: WcMethod,
    /// Coefficients `lambda` of the best molecule found (unit `l^{p'}` norm).
    pub lambda: Vec<f64>,
    /// A 1-Lipschitz function realizing `lower`, when one was needed.
    pub witness: Option<LipschitzFunctional>,
}

impl WcResult {
    /// The exact value, when the method certifies one.
    pub fn value(&self) -> Option<f64> {
        (self.method == WcMethod::ExactSignEnumeration).then_some(self.lower)
    }
}

/// `sup_{Lip(f) <= 1} (sum_i a_i |f(x_i) - f(y_i)|^p)^(1/p)`.
pub fn d_wc(
    space: &FiniteMetricSpace,
    seq: &PairSequence,
    p: f64,
    mode: WcMode,
    tol: &ToleranceConfig,
) -> Result<WcResult> {
    check_p(p)?;
    seq.check_against(space)?;
    match mode {
        WcMode::Exact { limit } => {
            if p != 1.0 {
                return Err(Error::Unsupported(format!(
                    "exact d_wc is only available for p = 1 (got p = {}); use bracket mode",
                    p
                )));
            }
            let active = seq.iter().filter(|&(x, y, a)| x != y && a > 0.0).count();
            if active > limit {
                return Err(Error::Unsupported(format!(
                    "exact d_wc enumerates 2^n sign vectors; {} active pairs exceed the limit of {}",
                    active, limit
                )));
            }
            exact_wc(space, seq, tol)
        }
        WcMode::Bracket { starts, seed } => bracket_wc(space, seq, p, starts, seed, tol),
    }
}

fn exact_wc(space: &FiniteMetricSpace, seq: &PairSequence, tol: &ToleranceConfig) -> Result<WcResult> {
    let active: Vec<(usize, (usize, usize), f64)> = seq
        .iter()
        .enumerate()
        .filter(|&(_, (x, y, a))| x != y && a > 0.0)
        .map(|(i, (x, y, a))| (i, (x, y), a))
        .collect();
    let n = active.len();
    if n == 0 {
        return Ok(WcResult {
            lower: 0.0,
            upper: 0.0,
            method: WcMethod::ExactSignEnumeration,
            lambda: vec![0.0; seq.len()],
            witness: None,
        });
    }
    let pairs: Vec<(usize, usize)> = active.iter().map(|t| t.1).collect();
    let signs = |mask: u64| -> Vec<f64> {
        (0..n).map(|k| if k == 0 || mask & (1 << (k - 1)) == 0 { 1.0 } else { -1.0 }).collect()
    };
    // The first sign is fixed: ||m|| = ||-m||.
    let best = (0..1u64 << (n - 1))
        .into_par_iter()
        .map(|mask| {
            let lambda = signs(mask);
            let coeffs: Vec<f64> = lambda.iter().zip(&active).map(|(l, t)| l * t.2).collect();
            let m = Molecule::from_pairs(&pairs, &coeffs);
            ae_norm(space, &m, tol).map(|r| (r.value, mask))
        })
        .try_reduce(
            || (f64::NEG_INFINITY, u64::MAX),
            |a, b| Ok(if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a }),
        )?;
    let mut lambda = vec![0.0; seq.len()];
    for (s, t) in signs(best.1).into_iter().zip(&active) {
        lambda[t.0] = s;
    }
    Ok(WcResult {
        lower: best.0,
        upper: best.0,
        method: WcMethod::ExactSignEnumeration,
        lambda,
        witness: None,
    })
}

fn lp_norm(v: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        v.iter().fold(0.0, |a, x| a.max(x.abs()))
    } else {
        v.iter().map(|x| x.abs().powf(q)).sum::<f64>().powf(1.0 / q)
    }
}

/// `(sum_i a_i |f(x_i) - f(y_i)|^p)^(1/p)`.
fn weak_value(seq: &PairSequence, f: &LipschitzFunctional, p: f64) -> f64 {
    seq.iter()
        .map(|(x, y, a)| a * (f.values[x] - f.values[y]).abs().powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

/// Alternating ascent from one starting `lambda`: take the Lipschitz
/// maximizer of the induced molecule, then the `l^{p'}` direction that
/// maximizes the linearization. Every iterate's value is attained by an
/// explicit 1-Lipschitz function, so it is a certified lower bound.
fn ascend(
    space: &FiniteMetricSpace,
    seq: &PairSequence,
    p: f64,
    mut lambda: Vec<f64>,
    tol: &ToleranceConfig,
) -> Result<(f64, Vec<f64>, LipschitzFunctional)> {
    const MAX_ROUNDS: usize = 100;
    let root: Vec<f64> = seq.weights().iter().map(|a| a.powf(1.0 / p)).collect();
    let mut best = (f64::NEG_INFINITY, lambda.clone(), LipschitzFunctional::zero(space.len()));
    for _ in 0..MAX_ROUNDS {
        let coeffs: Vec<f64> = lambda.iter().zip(&root).map(|(l, r)| l * r).collect();
        let m = Molecule::from_pairs(seq.pairs(), &coeffs);
        let f = ae_norm(space, &m, tol)?.witness;
        let value = weak_value(seq, &f, p);
        if value <= best.0 * (1.0 + 1e-12) {
            break;
        }
        best = (value, lambda.clone(), f.clone());
        let g: Vec<f64> = seq
            .pairs()
            .iter()
            .zip(&root)
            .map(|(&(x, y), r)| r * (f.values[x] - f.values[y]))
            .collect();
        let gnorm = lp_norm(&g, p);
        if gnorm == 0.0 {
            break;
        }
        lambda = if p == 1.0 {
            g.iter().map(|v| if *v < 0.0 { -1.0 } else { 1.0 }).collect()
        } else {
            g.iter().map(|v| v.signum() * (v.abs() / gnorm).powf(p - 1.0)).collect()
        };
    }
    Ok(best)
}

fn bracket_wc(
    space: &FiniteMetricSpace,
    seq: &PairSequence,
    p: f64,
    starts: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<WcResult> {
    let upper = d_ac(space, seq, p)?;
    let all = space.all_points();
    let cc = d_cc(space, seq, p, &all)?;
    if seq.is_empty() || upper == 0.0 {
        return Ok(WcResult {
            lower: 0.0,
            upper,
            method: WcMethod::Bracket,
            lambda: vec![0.0; seq.len()],
            witness: Some(LipschitzFunctional::zero(space.len())),
        });
    }
    let dual_exp = if p == 1.0 { f64::INFINITY } else { p / (p - 1.0) };
    let n = seq.len();
    let runs: Vec<(f64, Vec<f64>, LipschitzFunctional)> = (0..starts.max(1))
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
            let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let lambda: Vec<f64> = if p == 1.0 {
                raw.iter().map(|v| if *v < 0.0 { -1.0 } else { 1.0 }).collect()
            } else {
                let norm = lp_norm(&raw, dual_exp).max(f64::MIN_POSITIVE);
                raw.iter().map(|v| v / norm).collect()
            };
            ascend(space, seq, p, lambda, tol)
        })
        .collect::<Result<_>>()?;
    let mut best = runs
        .into_iter()
        .fold(None::<(f64, Vec<f64>, LipschitzFunctional)>, |acc, r| match acc {
            Some(a) if a.0 >= r.0 => Some(a),
            _ => Some(r),
        })
        .expect("at least one start");

    // The f_y at the eccentric witness is itself 1-Lipschitz.
    if cc.value > best.0 {
        best = (cc.value, vec![0.0; n], LipschitzFunctional::distance_to(space, cc.witness));
    }
    Ok(WcResult {
        lower: best.0.min(upper),
        upper,
        method: WcMethod::Bracket,
        lambda: best.1,
        witness: Some(best.2),
    })
}

/// `max_{y in S} |<m, f_y>|`: the pairing of `m` against the eccentric
/// functionals `f_y = d(., y) - d(y, base)`.
pub fn eccentric_pairing(space: &FiniteMetricSpace, m: &Molecule, s: &[usize]) -> Result<f64> {
    space.check_subset(s)?;
    m.check_against(space)?;
    Ok(s.iter()
        .map(|&y| m.coefficients().iter().map(|(&x, &c)| c * space.distance(x, y)).sum::<f64>().abs())
        .fold(0.0, f64::max))
}

/// Empirical norming constant of `{f_y : y in S}` over the sign molecules of
/// `seq`: `max_lambda ||m_lambda|| / max_{y in S} |<m_lambda, f_y>|`.
///
/// Infinite when some molecule has positive norm but vanishing eccentric
/// pairing. Only a finite family is checked, so this is a lower estimate of
/// the norming constant on the whole Arens-Eells space.
pub fn empirical_norming_constant(
    space: &FiniteMetricSpace,
    seq: &PairSequence,
    s: &[usize],
    tol: &ToleranceConfig,
) -> Result<f64> {
    seq.check_against(space)?;
    let n = seq.len();
    if n > WcMode::DEFAULT_EXACT_LIMIT {
        return Err(Error::Unsupported(format!("{} pairs exceed the enumeration limit", n)));
    }
    let mut k: f64 = 0.0;
    for mask in 0..(1u64 << n) {
        let coeffs: Vec<f64> = seq
            .weights()
            .iter()
            .enumerate()
            .map(|(i, a)| if mask & (1 << i) == 0 { *a } else { -*a })
            .collect();
        let m = Molecule::from_pairs(seq.pairs(), &coeffs);
        let norm = ae_norm(space, &m, tol)?.value;
        if norm <= 1e-12 {
            continue;
        }
        let pairing = eccentric_pairing(space, &m, s)?;
        if pairing <= 1e-12 {
            return Ok(f64::INFINITY);
        }
        k = k.max(norm / pairing);
    }
    Ok(k.max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn discrete4() -> FiniteMetricSpace {
        FiniteMetricSpace::discrete(["X1", "X2", "X3", "X4"].map(String::from).to_vec()).unwrap()
    }

    fn counterexample_seq() -> PairSequence {
        PairSequence::new(vec![(0, 1), (2, 3)], Some(vec![0.5, 0.5])).unwrap()
    }

    #[test]
    fn full_subset_recovers_distance() {
        let space = FiniteMetricSpace::real_line(
            ["a", "b", "c", "d"].map(String::from).to_vec(),
            &[0.0, 0.3, 1.7, -2.0],
            0,
        )
        .unwrap();
        let e = eccentric_pseudometric(&space, &space.all_points()).unwrap();
        assert!(e.max_abs_diff(space.matrix()) <= 1e-12);
    }

    #[test]
    fn real_line_symmetric_points_collapse() {
        let space = FiniteMetricSpace::real_line(
            ["-1/2", "0", "1/2"].map(String::from).to_vec(),
            &[-0.5, 0.0, 0.5],
            1,
        )
        .unwrap();
        let e = eccentric_pseudometric(&space, &[1]).unwrap();
        assert_eq!(e.get(2, 0), 0.0);
        assert_eq!(e.get(1, 0), 0.5);
    }

    #[test]
    fn singleton_subset_is_profile_difference() {
        let space = discrete4();
        let e = eccentric_pseudometric(&space, &[2]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = (space.distance(i, 2) - space.distance(j, 2)).abs();
                assert_eq!(e.get(i, j), expect);
            }
        }
        assert!(eccentric_pseudometric(&space, &[]).is_err());
    }

    #[test]
    fn d_ac_examples() {
        let space = discrete4();
        let one = PairSequence::unit(vec![(0, 1)]);
        assert_eq!(d_ac(&space, &one, 2.0).unwrap(), 1.0);
        let two = PairSequence::unit(vec![(0, 1), (0, 1)]);
        assert_eq!(d_ac(&space, &two, 1.0).unwrap(), 2.0);
        assert_eq!(d_ac(&space, &PairSequence::empty(), 1.0).unwrap(), 0.0);
        assert!(d_ac(&space, &one, 0.5).is_err());
    }

    #[test]
    fn d_cc_examples() {
        let space = discrete4();
        let cc = d_cc(&space, &PairSequence::unit(vec![(0, 1)]), 1.0, &[1, 3]).unwrap();
        assert_eq!(cc, CcValue { value: 1.0, witness: 1 });
        let zero = d_cc(&space, &PairSequence::unit(vec![(2, 2)]), 1.0, &[0]).unwrap();
        assert_eq!(zero.value, 0.0);
        let half = d_cc(&space, &counterexample_seq(), 1.0, &space.all_points()).unwrap();
        assert!((half.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn d_wc_examples() {
        let space = discrete4();
        let tol = ToleranceConfig::default();
        let r = d_wc(&space, &counterexample_seq(), 1.0, WcMode::exact(), &tol).unwrap();
        assert!((r.value().unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(r.lambda, vec![1.0, 1.0]);

        let empty = d_wc(&space, &PairSequence::empty(), 1.0, WcMode::exact(), &tol).unwrap();
        assert_eq!(empty.value(), Some(0.0));

        for p in [1.0, 1.5, 3.0] {
            let b = d_wc(&space, &PairSequence::unit(vec![(0, 3)]), p, WcMode::bracket(), &tol)
                .unwrap();
            assert!((b.lower - 1.0).abs() < 1e-9 && (b.upper - 1.0).abs() < 1e-12);
            assert_eq!(b.value(), None);
        }
        assert!(matches!(
            d_wc(&space, &counterexample_seq(), 2.0, WcMode::exact(), &tol),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn bracket_is_deterministic() {
        let space = FiniteMetricSpace::real_line(
            ["a", "b", "c", "d"].map(String::from).to_vec(),
            &[0.0, 1.0, 3.0, 7.0],
            0,
        )
        .unwrap();
        let seq = PairSequence::unit(vec![(0, 1), (2, 3), (1, 2)]);
        let tol = ToleranceConfig::default();
        let a = d_wc(&space, &seq, 2.0, WcMode::bracket(), &tol).unwrap();
        let b = d_wc(&space, &seq, 2.0, WcMode::bracket(), &tol).unwrap();
        assert_eq!(a, b);
        assert!(a.lower <= a.upper);
    }

    #[test]
    fn norming_constant_of_counterexample() {
        let space = discrete4();
        let tol = ToleranceConfig::default();
        let k = empirical_norming_constant(&space, &counterexample_seq(), &space.all_points(), &tol)
            .unwrap();
        // (+,+) has norm 1 and eccentric pairing 1/2.
        assert!((k - 2.0).abs() < 1e-9);
    }
}
