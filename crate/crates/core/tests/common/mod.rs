#![allow(dead_code)]

use eccentric::graph::{IndexFunction, WeightedGraph};
use eccentric::metric::{FiniteMetricSpace, LipschitzFunctional, PairSequence, SquareMatrix};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn ids(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{}{}", prefix, i)).collect()
}

/// Random points in the unit square with the Euclidean distance.
pub fn euclidean_space<R: Rng>(rng: &mut R, n: usize) -> FiniteMetricSpace {
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
    let d = SquareMatrix::from_fn(n, |i, j| {
        let (a, b) = (pts[i], pts[j]);
        ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
    });
    FiniteMetricSpace::new(ids("x", n), d, 0, false).unwrap()
}

/// Shortest-path closure of random positive weights on the complete graph.
pub fn path_closure_space<R: Rng>(rng: &mut R, n: usize) -> FiniteMetricSpace {
    let mut d = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let w = rng.gen_range(0.2..2.0);
            d.set(i, j, w);
            d.set(j, i, w);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d.get(i, k) + d.get(k, j);
                if via < d.get(i, j) {
                    d.set(i, j, via);
                }
            }
        }
    }
    FiniteMetricSpace::new(ids("x", n), d, 0, false).unwrap()
}

pub fn random_space<R: Rng>(rng: &mut R, n: usize) -> FiniteMetricSpace {
    if rng.gen_bool(0.5) {
        euclidean_space(rng, n)
    } else {
        path_closure_space(rng, n)
    }
}

pub fn random_sequence<R: Rng>(rng: &mut R, n_points: usize, len: usize) -> PairSequence {
    let pairs = (0..len).map(|_| (rng.gen_range(0..n_points), rng.gen_range(0..n_points))).collect();
    let weights = (0..len).map(|_| rng.gen_range(0.1..2.0)).collect();
    PairSequence::new(pairs, Some(weights)).unwrap()
}

pub fn random_subset<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    let k = rng.gen_range(1..=n);
    let mut s = all[..k].to_vec();
    s.sort();
    s
}

/// Either arbitrary values or a rescaled distance function.
pub fn random_function<R: Rng>(rng: &mut R, space: &FiniteMetricSpace) -> LipschitzFunctional {
    let n = space.len();
    if rng.gen_bool(0.5) {
        LipschitzFunctional::new((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
    } else {
        let y = rng.gen_range(0..n);
        let s = rng.gen_range(0.5..2.0);
        LipschitzFunctional::new((0..n).map(|x| s * space.distance(x, y)).collect())
    }
}

/// Connected graph: a random spanning tree plus random extra edges.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, extra: usize) -> WeightedGraph {
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for i in 1..n {
        let u = order[i];
        let v = order[rng.gen_range(0..i)];
        seen.insert((u.min(v), u.max(v)));
        edges.push((u, v, rng.gen_range(0.1..2.0)));
    }
    for _ in 0..extra {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v && seen.insert((u.min(v), u.max(v))) {
            edges.push((u, v, rng.gen_range(0.1..2.0)));
        }
    }
    WeightedGraph::new(ids("g", n), edges).unwrap()
}

pub fn random_index<R: Rng>(rng: &mut R, n: usize) -> IndexFunction {
    IndexFunction::new((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
}

/// Minimum over all simple paths from `a` to `b` of the summed step costs,
/// by depth-first enumeration. Returns the minimum and one minimizing path.
pub fn brute_force_path(
    g: &WeightedGraph,
    a: usize,
    b: usize,
    step: &dyn Fn(usize, usize, f64) -> f64,
) -> (f64, Vec<usize>) {
    fn dfs(
        g: &WeightedGraph,
        v: usize,
        b: usize,
        step: &dyn Fn(usize, usize, f64) -> f64,
        cost: f64,
        path: &mut Vec<usize>,
        on_path: &mut Vec<bool>,
        best: &mut (f64, Vec<usize>),
    ) {
        if v == b {
            if cost < best.0 {
                *best = (cost, path.clone());
            }
            return;
        }
        for &(u, w) in g.neighbors(v) {
            if !on_path[u] {
                on_path[u] = true;
                path.push(u);
                dfs(g, u, b, step, cost + step(v, u, w), path, on_path, best);
                path.pop();
                on_path[u] = false;
            }
        }
    }
    let mut on_path = vec![false; g.len()];
    on_path[a] = true;
    let mut best = (f64::INFINITY, vec![]);
    dfs(g, a, b, step, 0.0, &mut vec![a], &mut on_path, &mut best);
    best
}

/// Balanced transport cost by enumerating every integer flow with the given
/// integer supplies and demands.
pub fn brute_force_transport(supply: &[u32], demand: &[u32], cost: &[Vec<f64>]) -> f64 {
    fn go(
        i: usize,
        j: usize,
        supply: &mut Vec<u32>,
        demand: &mut Vec<u32>,
        cost: &[Vec<f64>],
        acc: f64,
        best: &mut f64,
    ) {
        if i == supply.len() {
            if demand.iter().all(|&d| d == 0) && acc < *best {
                *best = acc;
            }
            return;
        }
        if j == demand.len() {
            if supply[i] == 0 {
                go(i + 1, 0, supply, demand, cost, acc, best);
            }
            return;
        }
        let max = supply[i].min(demand[j]);
        for x in 0..=max {
            supply[i] -= x;
            demand[j] -= x;
            go(i, j + 1, supply, demand, cost, acc + x as f64 * cost[i][j], best);
            supply[i] += x;
            demand[j] += x;
        }
    }
    let mut best = f64::INFINITY;
    go(0, 0, &mut supply.to_vec(), &mut demand.to_vec(), cost, 0.0, &mut best);
    best
}

/// Minimal average matching cost between equal-size point lists, by trying
/// every permutation.
pub fn brute_force_matching(space: &FiniteMetricSpace, from: &[usize], to: &[usize]) -> f64 {
    fn permute(k: usize, perm: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if k == perm.len() {
            f(perm);
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            permute(k + 1, perm, f);
            perm.swap(k, i);
        }
    }
    let mut best = f64::INFINITY;
    let mut perm: Vec<usize> = (0..to.len()).collect();
    permute(0, &mut perm, &mut |p| {
        let c: f64 = from.iter().zip(p).map(|(&x, &j)| space.distance(x, to[j])).sum();
        best = best.min(c);
    });
    best / from.len() as f64
}

pub fn assert_close(actual: f64, expected: f64, tol: f64) {
    assert!(
        (actual - expected).abs() <= tol,
        "expected {} within {}, got {} (diff {:e})",
        expected,
        tol,
        actual,
        (actual - expected).abs()
    );
}
