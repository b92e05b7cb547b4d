//! Path metrics on weighted graphs and best-path estimates of indices.

use super::paths::{all_pairs, PathMetric};
use super::{IndexFunction, WeightedGraph};
use crate::error::Result;
use crate::metric::{FiniteMetricSpace, SquareMatrix};
use crate::summing::{Constant, ProbabilityMeasure};

/// Below this a distance counts as zero when computing Lipschitz constants.
const ZERO_DISTANCE: f64 = 1e-15;

/// Shortest path p-distance: step cost `w^p`.
pub fn q_p(g: &WeightedGraph, p: f64) -> Result<PathMetric> {
    all_pairs(g, p, |_, _, w| w.powf(p))
}

/// p-shortest path pseudodistance of `d`: step cost `d(u, v)^p`.
pub fn d_p(g: &WeightedGraph, d: &FiniteMetricSpace, p: f64) -> Result<PathMetric> {
    g.check_space(d)?;
    all_pairs(g, p, |u, v, _| d.distance(u, v).powf(p))
}

/// Step cost `sum_w mu(w) |d(u, w) - d(v, w)|^p`.
pub fn d_p_mu(g: &WeightedGraph, d: &FiniteMetricSpace, p: f64, mu: &ProbabilityMeasure) -> Result<PathMetric> {
    g.check_space(d)?;
    mu.check_within(g.len())?;
    all_pairs(g, p, |u, v, _| mu.integrate(|w| (d.distance(u, w) - d.distance(v, w)).abs().powf(p)))
}

/// p-best path estimate: step cost `|f(u) - f(v)|^p`.
pub fn e_p(g: &WeightedGraph, f: &IndexFunction, p: f64) -> Result<PathMetric> {
    f.check_against(g.len())?;
    all_pairs(g, p, |u, v, _| (f.values[u] - f.values[v]).abs().powf(p))
}

/// `max_{x != y} |f(x) - f(y)| / d(x, y)`; infinite when `f` separates two
/// points at distance zero.
pub fn lip_constant(d: &SquareMatrix, f: &IndexFunction) -> Result<Constant> {
    f.check_against(d.n())?;
    let mut best = 0.0f64;
    for x in 0..d.n() {
        for y in x + 1..d.n() {
            let df = (f.values[x] - f.values[y]).abs();
            let dist = d.get(x, y);
            if dist <= ZERO_DISTANCE {
                if df > ZERO_DISTANCE {
                    return Ok(Constant::Infinite);
                }
                continue;
            }
            best = best.max(df / dist);
        }
    }
    Ok(Constant::Finite(best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::path_graph;

    #[test]
    fn path_graph_q2() {
        let g = path_graph(5, 1.0).unwrap();
        let q = q_p(&g, 2.0).unwrap();
        assert!((q.distance(0, 4) - 2.0).abs() < 1e-15);
        assert_eq!(q.path(0, 4).path, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn discrete_metric_on_path() {
        let g = path_graph(4, 1.0).unwrap();
        let d = FiniteMetricSpace::discrete(g.ids().to_vec()).unwrap();
        let dp = d_p(&g, &d, 2.0).unwrap();
        assert!((dp.distance(0, 3) - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn lip_of_constant_and_separating() {
        let d = SquareMatrix::from_rows(&[vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(lip_constant(&d, &IndexFunction::new(vec![1.0, 1.0])).unwrap(), Constant::Finite(0.0));
        assert_eq!(lip_constant(&d, &IndexFunction::new(vec![1.0, 2.0])).unwrap(), Constant::Infinite);
        assert!(lip_constant(&d, &IndexFunction::new(vec![1.0])).is_err());
    }
}
