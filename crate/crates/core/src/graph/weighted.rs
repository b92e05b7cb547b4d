use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, LipschitzFunctional};

/// A real function on the vertices of a graph.
pub type IndexFunction = LipschitzFunctional;

/// An undirected connected graph with strictly positive edge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    ids: Vec<String>,
    edges: Vec<(usize, usize, f64)>,
    adj: Vec<Vec<(usize, f64)>>,
}

impl WeightedGraph {
    pub fn new(ids: Vec<String>, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let n = ids.len();
        if n == 0 {
            return Err(Error::input("graph needs at least one vertex"));
        }
        let mut seen_ids = HashSet::new();
        for id in &ids {
            if !seen_ids.insert(id.as_str()) {
                return Err(Error::input(format!("duplicate vertex id {:?}", id)));
            }
        }
        let mut adj = vec![Vec::new(); n];
        let mut seen_edges = HashSet::new();
        for &(u, v, w) in &edges {
            if u >= n || v >= n {
                return Err(Error::input(format!("edge ({}, {}) references a missing vertex", u, v)));
            }
            if u == v {
                return Err(Error::input(format!("self-loop at vertex {:?}", ids[u])));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::input(format!(
                    "edge {:?}-{:?} has weight {}; weights must be finite and > 0",
                    ids[u], ids[v], w
                )));
            }
            if !seen_edges.insert((u.min(v), u.max(v))) {
                return Err(Error::input(format!("duplicate edge {:?}-{:?}", ids[u], ids[v])));
            }
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        for list in adj.iter_mut() {
            list.sort_by_key(|e| e.0);
        }

        let mut reached = vec![false; n];
        let mut queue = VecDeque::from([0]);
        reached[0] = true;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &adj[u] {
                if !reached[v] {
                    reached[v] = true;
                    queue.push_back(v);
                }
            }
        }
        if let Some(v) = reached.iter().position(|r| !r) {
            return Err(Error::input(format!(
                "graph is disconnected: {:?} is unreachable from {:?}",
                ids[v], ids[0]
            )));
        }
        Ok(WeightedGraph { ids, edges, adj })
    }

    /// Builds a graph from edges given by vertex id.
    pub fn from_named_edges<S: AsRef<str>>(ids: Vec<String>, edges: &[(S, S, f64)]) -> Result<Self> {
        let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let lookup = |s: &str| {
            index.get(s).copied().ok_or_else(|| Error::input(format!("edge references unknown vertex {:?}", s)))
        };
        let resolved = edges
            .iter()
            .map(|(u, v, w)| Ok((lookup(u.as_ref())?, lookup(v.as_ref())?, *w)))
            .collect::<Result<Vec<_>>>()?;
        WeightedGraph::new(ids, resolved)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn indices_of<S: AsRef<str>>(&self, ids: &[S]) -> Result<Vec<usize>> {
        ids.iter()
            .map(|id| {
                self.index_of(id.as_ref())
                    .ok_or_else(|| Error::input(format!("unknown vertex id {:?}", id.as_ref())))
            })
            .collect()
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Neighbors of `v` with edge weights, by increasing index.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[v]
    }

    pub fn edge_weight(&self, u: usize, v: usize) -> Option<f64> {
        self.adj[u].iter().find(|e| e.0 == v).map(|e| e.1)
    }

    /// The graph's `q_p` shortest-path metric as a metric space based at the
    /// first vertex.
    pub fn metric_space(&self, p: f64) -> Result<FiniteMetricSpace> {
        let q = super::q_p(self, p)?;
        FiniteMetricSpace::new(self.ids.clone(), q.matrix(), 0, false)
    }

    pub(crate) fn check_space(&self, d: &FiniteMetricSpace) -> Result<()> {
        if d.ids() != self.ids.as_slice() {
            return Err(Error::input(
                "metric and graph must list the same vertex ids in the same order",
            ));
        }
        Ok(())
    }
}
