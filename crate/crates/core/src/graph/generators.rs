//! Fixture graphs: a truncated convergent sequence with its limit, the same
//! sequence seen from two symmetric apexes, a discretized circle with a
//! center, and plain paths.

use std::f64::consts::PI;

use super::WeightedGraph;
use crate::error::{Error, Result};

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::input(format!("fixture size n = {} must be at least 2", n)));
    }
    Ok(())
}

/// Vertices `v0..v{n-1}` at positions `1 - 1/2^i` and the limit `s` at 1.
pub fn sequence_graph(n: usize) -> Result<WeightedGraph> {
    check_n(n)?;
    let mut ids: Vec<String> = (0..n).map(|i| format!("v{}", i)).collect();
    ids.push("s".into());
    WeightedGraph::new(ids, sequence_edges(n))
}

fn sequence_edges(n: usize) -> Vec<(usize, usize, f64)> {
    let mut edges = Vec::new();
    for i in 0..n {
        if i + 1 < n {
            edges.push((i, i + 1, 0.5f64.powi(i as i32 + 1)));
        }
        edges.push((i, n, 0.5f64.powi(i as i32)));
    }
    edges
}

/// Apexes `v1` at `(-1, 0)` and `v2` at `(1, 0)`, the sequence core
/// `a0..a{n-1}` at `(0, 1 - 1/2^k)` and its limit `s` at `(0, 1)`. Each apex
/// is joined to every core vertex by a straight segment.
pub fn two_apex_graph(n: usize) -> Result<WeightedGraph> {
    check_n(n)?;
    let mut ids: Vec<String> = vec!["v1".into(), "v2".into()];
    ids.extend((0..n).map(|k| format!("a{}", k)));
    ids.push("s".into());
    let mut edges: Vec<(usize, usize, f64)> =
        sequence_edges(n).into_iter().map(|(u, v, w)| (u + 2, v + 2, w)).collect();
    for k in 0..=n {
        let y = if k == n { 1.0 } else { 1.0 - 0.5f64.powi(k as i32) };
        let w = (1.0 + y * y).sqrt();
        edges.push((0, k + 2, w));
        edges.push((1, k + 2, w));
    }
    WeightedGraph::new(ids, edges)
}

/// Center `v0` and circle vertices `v1..vn`; neighbors on the circle are
/// joined by arcs of length `2 pi / n` and every circle vertex is joined to
/// the center with weight 1. Non-adjacent circle vertices share no edge, so
/// `q_1` between them is the shorter arc capped at 2 through the center.
pub fn circle_graph(n: usize) -> Result<WeightedGraph> {
    check_n(n)?;
    let ids: Vec<String> = (0..=n).map(|i| format!("v{}", i)).collect();
    let arc = 2.0 * PI / n as f64;
    let mut edges = Vec::new();
    for i in 1..=n {
        edges.push((0, i, 1.0));
    }
    if n == 2 {
        edges.push((1, 2, arc));
    } else {
        for i in 1..=n {
            edges.push((i, i % n + 1, arc));
        }
    }
    WeightedGraph::new(ids, edges)
}

/// Vertices `v0..v{n-1}` with consecutive edges of weight `w`.
pub fn path_graph(n: usize, w: f64) -> Result<WeightedGraph> {
    if n == 0 {
        return Err(Error::input("path graph needs at least one vertex"));
    }
    let ids = (0..n).map(|i| format!("v{}", i)).collect();
    WeightedGraph::new(ids, (1..n).map(|i| (i - 1, i, w)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::q_p;

    #[test]
    fn sizes() {
        let g = sequence_graph(3).unwrap();
        assert_eq!((g.len(), g.edges().len()), (4, 5));
        assert!(sequence_graph(1).is_err());
        let g = two_apex_graph(3).unwrap();
        assert_eq!((g.len(), g.edges().len()), (6, 5 + 8));
        let g = circle_graph(4).unwrap();
        assert_eq!((g.len(), g.edges().len()), (5, 8));
        assert_eq!(circle_graph(2).unwrap().edges().len(), 3);
    }

    #[test]
    fn sequence_positions() {
        let g = sequence_graph(6).unwrap();
        let q = q_p(&g, 1.0).unwrap();
        let s = g.index_of("s").unwrap();
        for i in 0..6 {
            assert!((q.distance(0, i) - (1.0 - 0.5f64.powi(i as i32))).abs() < 1e-15);
            assert!((q.distance(i, s) - 0.5f64.powi(i as i32)).abs() < 1e-15);
        }
    }

    #[test]
    fn circle_center_row() {
        let g = circle_graph(8).unwrap();
        let q = q_p(&g, 1.0).unwrap();
        for i in 1..=8 {
            assert_eq!(q.distance(0, i), 1.0);
        }
        assert!((q.distance(1, 2) - PI / 4.0).abs() < 1e-15);
        assert_eq!(q.distance(1, 5), 2.0);
    }
}
