use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::Serialize;

use super::WeightedGraph;
use crate::error::{Error, Result};
use crate::metric::SquareMatrix;

/// Largest exponent accepted for path metrics.
pub const MAX_P: f64 = 64.0;

/// Relative tolerance under which two path costs count as tied.
const TIE_REL: f64 = 1e-12;

pub(crate) fn check_graph_p(p: f64) -> Result<()> {
    if !(p.is_finite() && (1.0..=MAX_P).contains(&p)) {
        return Err(Error::input(format!("exponent p = {} must lie in [1, {}]", p, MAX_P)));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathResult {
    pub value: f64,
    /// Vertex indices from the source to the target, both included.
    pub path: Vec<usize>,
}

/// All-pairs minimal path sums under a per-edge step cost, kept in p-th
/// power space.
#[derive(Debug, Clone, PartialEq)]
pub struct PathMetric {
    p: f64,
    powered: SquareMatrix,
    /// `pred[s][v]` is the predecessor of `v` on the chosen path from `s`.
    pred: Vec<Vec<usize>>,
}

impl PathMetric {
    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.powered.n()
    }

    pub fn is_empty(&self) -> bool {
        self.powered.n() == 0
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.powered.get(i, j).powf(1.0 / self.p)
    }

    /// Minimal path sums of step costs, before the p-th root.
    pub fn powered(&self) -> &SquareMatrix {
        &self.powered
    }

    pub fn matrix(&self) -> SquareMatrix {
        let r = 1.0 / self.p;
        self.powered.map(|v| v.powf(r))
    }

    pub fn path(&self, i: usize, j: usize) -> PathResult {
        let mut path = vec![j];
        let mut v = j;
        while v != i {
            v = self.pred[i][v];
            path.push(v);
        }
        path.reverse();
        PathResult { value: self.distance(i, j), path }
    }
}

#[derive(PartialEq)]
struct Entry {
    cost: f64,
    vertex: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.cost.total_cmp(&self.cost).then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn single_source(
    source: usize,
    adj: &[Vec<(usize, f64)>],
    rank: &[usize],
) -> (Vec<f64>, Vec<usize>) {
    let n = adj.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![source; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Entry { cost: 0.0, vertex: source });
    while let Some(Entry { cost, vertex: u }) = heap.pop() {
        if settled[u] || cost > dist[u] {
            continue;
        }
        settled[u] = true;
        for &(v, c) in &adj[u] {
            if settled[v] {
                continue;
            }
            let cand = dist[u] + c;
            let tie = TIE_REL * cand.max(1.0);
            if dist[v].is_infinite() || cand < dist[v] - tie {
                dist[v] = cand;
                pred[v] = u;
                heap.push(Entry { cost: cand, vertex: v });
            } else if cand <= dist[v] + tie && rank[u] < rank[pred[v]] {
                pred[v] = u;
                if cand < dist[v] {
                    dist[v] = cand;
                    heap.push(Entry { cost: cand, vertex: v });
                }
            }
        }
    }
    (dist, pred)
}

/// Label-setting all-pairs search with `step(u, v, w)` as the nonnegative
/// cost of traversing edge `{u, v}` of weight `w`. Ties between
/// predecessors go to the lexicographically smallest vertex id.
pub(crate) fn all_pairs(
    g: &WeightedGraph,
    p: f64,
    step: impl Fn(usize, usize, f64) -> f64 + Sync,
) -> Result<PathMetric> {
    check_graph_p(p)?;
    let n = g.len();
    let mut adj = Vec::with_capacity(n);
    for u in 0..n {
        let mut list = Vec::with_capacity(g.neighbors(u).len());
        for &(v, w) in g.neighbors(u) {
            let c = step(u, v, w);
            if !(c.is_finite() && c >= 0.0) {
                return Err(Error::input(format!(
                    "step cost {} on edge {:?}-{:?} is not a finite nonnegative number",
                    c,
                    g.id(u),
                    g.id(v)
                )));
            }
            list.push((v, c));
        }
        adj.push(list);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| g.id(a).cmp(g.id(b)));
    let mut rank = vec![0; n];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }

    let rows: Vec<(Vec<f64>, Vec<usize>)> =
        (0..n).into_par_iter().map(|s| single_source(s, &adj, &rank)).collect();
    let mut powered = SquareMatrix::zeros(n);
    let mut pred = Vec::with_capacity(n);
    for (s, (dist, pr)) in rows.into_iter().enumerate() {
        for (t, v) in dist.into_iter().enumerate() {
            powered.set(s, t, v);
        }
        pred.push(pr);
    }
    // Floating-point sums along reversed paths can differ in the last bits.
    for i in 0..n {
        for j in i + 1..n {
            let v = powered.get(i, j).min(powered.get(j, i));
            powered.set(i, j, v);
            powered.set(j, i, v);
        }
    }
    Ok(PathMetric { p, powered, pred })
}
