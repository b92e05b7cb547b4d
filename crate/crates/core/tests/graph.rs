mod common;

use std::collections::BTreeMap;

use common::{assert_close, brute_force_path, ids, random_graph, random_index};
use eccentric::graph::*;
use eccentric::metric::{FiniteMetricSpace, LipschitzFunctional, SquareMatrix};
use eccentric::summing::{pietsch_functional, Constant, ProbabilityMeasure};
use eccentric::{Error, ToleranceConfig};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// d_{p,mu}(v1, v2) on two_apex_graph(4) with its q_1 metric and mu uniform
/// on all seven vertices, from exhaustive path enumeration.
const TWO_APEX_UNIFORM_P1: f64 = 1.424575936489949;
const TWO_APEX_UNIFORM_P2: f64 = 1.0703062966096881;

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_measure(rng: &mut ChaCha8Rng, n: usize) -> ProbabilityMeasure {
    let raw: Vec<f64> = (0..n).map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen::<f64>() }).collect();
    let mut raw = raw;
    if raw.iter().all(|&w| w == 0.0) {
        raw[rng.gen_range(0..n)] = 1.0;
    }
    let total: f64 = raw.iter().sum();
    let mut weights: BTreeMap<usize, f64> =
        raw.iter().enumerate().filter(|(_, &w)| w > 0.0).map(|(i, &w)| (i, w / total)).collect();
    // Absorb rounding so the mass is exactly representable as one.
    let sum: f64 = weights.values().sum();
    if let Some(w) = weights.values_mut().next() {
        *w += 1.0 - sum;
    }
    ProbabilityMeasure::new(weights).unwrap()
}

fn discrete_space(n: usize, prefix: &str) -> FiniteMetricSpace {
    FiniteMetricSpace::discrete(ids(prefix, n)).unwrap()
}

fn assert_pseudometric(m: &SquareMatrix, tol: f64) {
    let n = m.n();
    for i in 0..n {
        assert_eq!(m.get(i, i), 0.0);
        for j in 0..n {
            assert!(m.get(i, j) >= 0.0);
            assert_eq!(m.get(i, j), m.get(j, i));
            for k in 0..n {
                assert!(m.get(i, j) <= m.get(i, k) + m.get(k, j) + tol, "triangle ({}, {}, {})", i, j, k);
            }
        }
    }
}

#[test]
fn construction_is_validated() {
    let id = ids("v", 3);
    assert!(matches!(WeightedGraph::new(id.clone(), vec![(0, 1, 1.0)]), Err(Error::Input(_))));
    assert!(matches!(WeightedGraph::new(id.clone(), vec![(0, 0, 1.0), (1, 2, 1.0)]), Err(Error::Input(_))));
    assert!(matches!(WeightedGraph::new(id.clone(), vec![(0, 1, 0.0), (1, 2, 1.0)]), Err(Error::Input(_))));
    assert!(matches!(
        WeightedGraph::new(id.clone(), vec![(0, 1, 1.0), (1, 0, 2.0), (1, 2, 1.0)]),
        Err(Error::Input(_))
    ));
    assert!(matches!(WeightedGraph::new(vec![], vec![]), Err(Error::Input(_))));
    let g = WeightedGraph::from_named_edges(id, &[("v0", "v1", 1.0), ("v2", "v1", 2.0)]).unwrap();
    assert_eq!(g.edge_weight(2, 1), Some(2.0));
    assert_eq!(g.edge_weight(0, 2), None);
}

#[test]
fn q_p_examples() {
    let g = WeightedGraph::new(ids("u", 2), vec![(0, 1, 0.7)]).unwrap();
    for p in [1.0, 2.0, 3.5, 64.0] {
        assert_close(q_p(&g, p).unwrap().distance(0, 1), 0.7, 1e-15);
    }
    assert!(matches!(q_p(&g, 0.5), Err(Error::Input(_))));
    assert!(matches!(q_p(&g, 65.0), Err(Error::Input(_))));

    let seq = sequence_graph(6).unwrap();
    let s = seq.index_of("s").unwrap();
    assert_close(q_p(&seq, 1.0).unwrap().distance(0, s), 1.0, 1e-15);

    for n in 2..=7 {
        let g = path_graph(n, 1.0).unwrap();
        let (sum, path) = brute_force_path(&g, 0, n - 1, &|_, _, w: f64| w.powi(2));
        let q = q_p(&g, 2.0).unwrap();
        assert_close(q.distance(0, n - 1), sum.sqrt(), 1e-12);
        assert_close(q.distance(0, n - 1), ((n - 1) as f64).sqrt(), 1e-12);
        assert_eq!(q.path(0, n - 1).path, path);
    }
}

#[test]
fn d_p_examples() {
    for n in [3, 5, 10] {
        let g = path_graph(n, 1.0).unwrap();
        let d = discrete_space(n, "v");
        for p in [1.0, 2.0, 3.0] {
            let dp = d_p(&g, &d, p).unwrap();
            assert_close(dp.distance(0, n - 1), ((n - 1) as f64).powf(1.0 / p), 1e-12);
        }
    }

    let mut rng = seeded(7);
    let g = random_graph(&mut rng, 9, 12);
    for p in [1.0, 2.0, 3.0] {
        let q = q_p(&g, p).unwrap();
        let space = g.metric_space(p).unwrap();
        let again = d_p(&g, &space, p).unwrap();
        assert!(again.matrix().max_abs_diff(&q.matrix()) <= 1e-12);
    }

    // Complete graph: the direct edge bounds d_p by d.
    let n = 6;
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j, 1.0))).collect();
    let complete = WeightedGraph::new(ids("x", n), edges).unwrap();
    let space = common::euclidean_space(&mut rng, n);
    let dp = d_p(&complete, &space, 2.0).unwrap();
    for i in 0..n {
        for j in 0..n {
            assert!(dp.distance(i, j) <= space.distance(i, j) + 1e-12);
        }
    }

    let other = discrete_space(n, "y");
    assert!(matches!(d_p(&complete, &other, 1.0), Err(Error::Input(_))));
}

#[test]
fn d_p_mu_examples() {
    let circle = circle_graph(16).unwrap();
    let d = circle.metric_space(1.0).unwrap();
    for p in [1.0, 2.0] {
        let dm = d_p_mu(&circle, &d, p, &ProbabilityMeasure::dirac(0)).unwrap();
        for i in 1..=16 {
            for j in 1..=16 {
                assert!(dm.distance(i, j) <= 1e-12);
            }
        }
    }

    let g = two_apex_graph(4).unwrap();
    let d = g.metric_space(1.0).unwrap();
    let all: Vec<usize> = (0..g.len()).collect();
    let mu = ProbabilityMeasure::uniform(&all).unwrap();
    for (p, frozen) in [(1.0, TWO_APEX_UNIFORM_P1), (2.0, TWO_APEX_UNIFORM_P2)] {
        let step = |u: usize, v: usize, _: f64| mu.integrate(|w| (d.distance(u, w) - d.distance(v, w)).abs().powf(p));
        let (sum, path) = brute_force_path(&g, 0, 1, &step);
        let dm = d_p_mu(&g, &d, p, &mu).unwrap();
        assert_close(sum.powf(1.0 / p), frozen, 1e-12);
        assert_close(dm.distance(0, 1), frozen, 1e-12);
        assert!(dm.distance(0, 1) > 0.0);
        assert_eq!(dm.path(0, 1).path, path);
        assert_eq!(path, vec![0, 2, 1]);
        assert_eq!(dm.distance(3, 3), 0.0);
        assert_eq!(dm.path(3, 3).path, vec![3]);
    }

    let outside = ProbabilityMeasure::dirac(g.len());
    assert!(matches!(d_p_mu(&g, &d, 1.0, &outside), Err(Error::Input(_))));
}

#[test]
fn e_p_examples() {
    let g = two_apex_graph(3).unwrap();
    let zero = e_p(&g, &LipschitzFunctional::new(vec![2.5; g.len()]), 2.0).unwrap();
    assert_eq!(zero.matrix().max_entry(), 0.0);

    for n in 2..=6 {
        let g = path_graph(n, 1.0).unwrap();
        let f = LipschitzFunctional::new((0..n).map(|i| (i * i) as f64 * 0.3 - 1.0).collect());
        for p in [1.0, 2.0, 3.0] {
            let expected: f64 = (1..n).map(|i| (f.values[i] - f.values[i - 1]).abs().powf(p)).sum::<f64>();
            let (sum, _) = brute_force_path(&g, 0, n - 1, &|u, v, _| (f.values[u] - f.values[v]).abs().powf(p));
            assert_close(sum, expected, 1e-12);
            assert_close(e_p(&g, &f, p).unwrap().distance(0, n - 1), expected.powf(1.0 / p), 1e-12);
        }
    }

    // v1 -> s -> v2 keeps the value of d(., a0) fixed at 1.
    let g = two_apex_graph(4).unwrap();
    let d = g.metric_space(1.0).unwrap();
    let f = LipschitzFunctional::distance_to(&d, g.index_of("a0").unwrap());
    let e = e_p(&g, &f, 1.0).unwrap();
    let route = e.path(0, 1);
    assert_eq!(route.value, 0.0);
    assert_eq!(route.path, vec![0, g.index_of("s").unwrap(), 1]);
    assert!(matches!(e_p(&g, &LipschitzFunctional::new(vec![0.0; 3]), 1.0), Err(Error::Input(_))));
}

#[test]
fn lip_constant_examples() {
    let mut rng = seeded(11);
    let g = random_graph(&mut rng, 8, 6);
    let d = g.metric_space(1.0).unwrap();
    assert_eq!(lip_constant(d.matrix(), &LipschitzFunctional::new(vec![3.0; 8])).unwrap(), Constant::Finite(0.0));

    let y0 = 2;
    let f = LipschitzFunctional::distance_to(&d, y0);
    let far = (0..8).max_by(|&a, &b| d.distance(a, y0).total_cmp(&d.distance(b, y0))).unwrap();
    assert_close((f.values[far] - f.values[y0]).abs() / d.distance(far, y0), 1.0, 1e-12);
    assert_close(lip_constant(d.matrix(), &f).unwrap().finite().unwrap(), 1.0, 1e-12);

    let f = random_index(&mut rng, 8);
    let mut expected = 0.0f64;
    for x in 0..8 {
        for y in 0..8 {
            if x != y {
                expected = expected.max((f.values[x] - f.values[y]).abs() / d.distance(x, y));
            }
        }
    }
    assert_eq!(lip_constant(d.matrix(), &f).unwrap().finite().unwrap(), expected);

    let pseudo = SquareMatrix::from_rows(&[vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
    assert_eq!(lip_constant(&pseudo, &LipschitzFunctional::new(vec![0.0, 1.0])).unwrap(), Constant::Infinite);
}

#[test]
fn symmetry_examples() {
    let circle = circle_graph(16).unwrap();
    let d = circle.metric_space(1.0).unwrap();
    let classes = symmetry_classes(&circle, &d, 1.0, &ProbabilityMeasure::dirac(0), DEFAULT_SYMMETRY_TOL).unwrap();
    assert!(!classes.non_transitive);
    let ring: Vec<usize> = (1..=16).collect();
    assert!(classes.classes.contains(&ring));
    assert_eq!(classes.class_of(0), Some(&[0usize][..]));

    let mut rng = seeded(3);
    let rigid = random_graph(&mut rng, 10, 8);
    let d = rigid.metric_space(1.0).unwrap();
    let all: Vec<usize> = (0..10).collect();
    let mu = ProbabilityMeasure::uniform(&all).unwrap();
    let dm = d_p_mu(&rigid, &d, 1.0, &mu).unwrap();
    for u in 0..10 {
        for v in u + 1..10 {
            assert!(dm.distance(u, v) > DEFAULT_SYMMETRY_TOL);
        }
    }
    let classes = symmetry_classes(&rigid, &d, 1.0, &mu, DEFAULT_SYMMETRY_TOL).unwrap();
    assert_eq!(classes.classes.len(), 10);

    // v1 and v2 are metrically symmetric with respect to {a0}.
    let g = two_apex_graph(4).unwrap();
    let d = g.metric_space(1.0).unwrap();
    let a0 = g.index_of("a0").unwrap();
    let classes = symmetry_classes(&g, &d, 2.0, &ProbabilityMeasure::dirac(a0), DEFAULT_SYMMETRY_TOL).unwrap();
    assert!(classes.same_class(0, 1));
    assert!(!classes.same_class(0, a0));
}

#[test]
fn check_t2_examples() {
    let g = path_graph(6, 1.0).unwrap();
    let d = g.metric_space(1.0).unwrap();
    let all = d.all_points();
    let tol = ToleranceConfig::default();

    let constant = LipschitzFunctional::new(vec![1.0; 6]);
    let cert = pietsch_functional(&d, &constant, &all, 1.0, &tol).unwrap();
    let report = check_t2(&g, &d, 1.0, &constant, &cert).unwrap();
    assert!(report.passes());
    assert_eq!(report.lipschitz.worst_excess, 0.0);
    assert_eq!(report.summing.unwrap().worst_excess, 0.0);

    // f = d(., y0) against the Dirac at y0 with constant one.
    let y0 = 0;
    let f = LipschitzFunctional::distance_to(&d, y0);
    let cert = pietsch_functional(&d, &f, &[y0], 2.0, &tol).unwrap();
    assert_close(cert.constant.finite().unwrap(), 1.0, 1e-9);
    assert_eq!(cert.measure.as_ref().unwrap(), &ProbabilityMeasure::dirac(y0));
    let report = check_t2(&g, &d, 2.0, &f, &cert).unwrap();
    assert!(report.passes());
    let summing = report.summing.unwrap();
    assert!(summing.worst_excess.abs() <= 1e-9);
    assert_close(summing.worst_ratio, 1.0, 1e-9);

    // Infinite certificate: only the first bound is reported.
    let apex = two_apex_graph(3).unwrap();
    let d = apex.metric_space(1.0).unwrap();
    let mut values: Vec<f64> = (0..apex.len()).map(|v| d.distance(v, 2)).collect();
    values[0] = 0.5;
    let f = LipschitzFunctional::new(values);
    let core: Vec<usize> = (2..apex.len()).collect();
    let cert = pietsch_functional(&d, &f, &core, 1.0, &tol).unwrap();
    assert_eq!(cert.constant, Constant::Infinite);
    let report = check_t2(&apex, &d, 1.0, &f, &cert).unwrap();
    assert!(report.summing.is_none());
    assert!(report.lipschitz.passes);
    assert!(matches!(check_t2(&apex, &d, 2.0, &f, &cert), Err(Error::Input(_))));
}

#[test]
fn generator_examples() {
    let g = sequence_graph(3).unwrap();
    assert_eq!((g.len(), g.edges().len()), (4, 5));
    assert_eq!(g.ids(), ["v0", "v1", "v2", "s"]);
    for n in [0, 1] {
        assert!(matches!(sequence_graph(n), Err(Error::Input(_))));
        assert!(matches!(two_apex_graph(n), Err(Error::Input(_))));
        assert!(matches!(circle_graph(n), Err(Error::Input(_))));
    }

    let circle = circle_graph(4).unwrap();
    let q = q_p(&circle, 1.0).unwrap();
    for i in 1..=4 {
        assert_eq!(q.distance(i, 0), 1.0);
    }
    // Opposite vertices: half the circle is longer than two radii.
    assert_close(q.distance(1, 3), 2.0, 1e-15);
    assert_close(q.distance(1, 2), std::f64::consts::FRAC_PI_2, 1e-15);

    let apex = two_apex_graph(5).unwrap();
    let d = apex.metric_space(1.0).unwrap();
    for w in 2..apex.len() {
        assert_eq!(d.distance(0, w), d.distance(1, w));
    }
}

#[test]
fn paths_break_ties_towards_smaller_ids() {
    // Two equal routes from a to d: via b and via c.
    let g = WeightedGraph::from_named_edges(
        ids("n", 4),
        &[("n0", "n2", 1.0), ("n0", "n1", 1.0), ("n2", "n3", 1.0), ("n1", "n3", 1.0)],
    )
    .unwrap();
    let q = q_p(&g, 1.0).unwrap();
    assert_eq!(q.path(0, 3).path, vec![0, 1, 3]);
    assert_eq!(q.path(3, 0).path, vec![3, 1, 0]);
}

fn check_path_result(g: &WeightedGraph, m: &PathMetric, step: &dyn Fn(usize, usize, f64) -> f64) {
    for a in 0..g.len() {
        for b in 0..g.len() {
            let r = m.path(a, b);
            assert_eq!((r.path[0], *r.path.last().unwrap()), (a, b));
            let mut cost = 0.0;
            for w in r.path.windows(2) {
                let weight = g.edge_weight(w[0], w[1]).expect("consecutive path vertices share an edge");
                cost += step(w[0], w[1], weight);
            }
            assert!((cost.powf(1.0 / m.p()) - r.value).abs() <= 1e-9, "path cost {} vs {}", cost, r.value);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn q_r_is_a_fixed_point(seed in any::<u64>(), n in 2usize..=30, rp in 0usize..4) {
        let (r, p) = [(1.0, 1.0), (1.0, 2.0), (2.0, 2.0), (2.0, 4.0)][rp];
        let mut rng = seeded(seed);
        let g = random_graph(&mut rng, n, n);
        let qr = g.metric_space(r).unwrap();
        let qrp = d_p(&g, &qr, p).unwrap().matrix();
        prop_assert!(qrp.max_excess_over(qr.matrix()) <= 1e-9);
        if r == p {
            prop_assert!(qrp.max_abs_diff(qr.matrix()) <= 1e-9);
        }
        let mu = random_measure(&mut rng, n);
        let qrpmu = d_p_mu(&g, &qr, p, &mu).unwrap().matrix();
        prop_assert!(qrpmu.max_excess_over(&qrp) <= 1e-9);
    }

    #[test]
    fn measured_distance_is_dominated(seed in any::<u64>(), n in 2usize..=20, pi in 0usize..3) {
        let p = [1.0, 2.0, 3.0][pi];
        let mut rng = seeded(seed);
        let g = random_graph(&mut rng, n, n / 2);
        let d = if rng.gen_bool(0.5) { g.metric_space(1.0).unwrap() } else {
            let e = common::euclidean_space(&mut rng, n);
            FiniteMetricSpace::new(g.ids().to_vec(), e.matrix().clone(), 0, false).unwrap()
        };
        let mu = random_measure(&mut rng, n);
        let dm = d_p_mu(&g, &d, p, &mu).unwrap().matrix();
        let dp = d_p(&g, &d, p).unwrap().matrix();
        prop_assert!(dm.max_excess_over(&dp) <= 1e-9);
    }

    #[test]
    fn best_paths_obey_both_bounds(seed in any::<u64>(), n in 2usize..=12, pi in 0usize..2) {
        let p = [1.0, 2.0][pi];
        let mut rng = seeded(seed);
        let g = random_graph(&mut rng, n, n);
        let d = g.metric_space(1.0).unwrap();
        let f = if rng.gen_bool(0.5) { random_index(&mut rng, n) } else {
            LipschitzFunctional::distance_to(&d, rng.gen_range(0..n)).scaled(rng.gen_range(0.5..2.0))
        };
        let k = common::random_subset(&mut rng, n);
        let cert = pietsch_functional(&d, &f, &k, p, &ToleranceConfig::default()).unwrap();
        let report = check_t2(&g, &d, p, &f, &cert).unwrap();
        prop_assert!(report.lipschitz.passes, "{:?}", report.lipschitz);
        if cert.constant.is_finite() {
            let summing = report.summing.as_ref().unwrap();
            prop_assert!(summing.passes, "{:?}", summing);
        } else {
            prop_assert!(report.summing.is_none());
        }
    }

    #[test]
    fn symmetric_vertices_are_joined_by_level_paths(seed in any::<u64>(), n in 2usize..=6, pi in 0usize..2) {
        let p = [1.0, 2.0][pi];
        let mut rng = seeded(seed);
        let g = two_apex_graph(n).unwrap();
        let d = g.metric_space(1.0).unwrap();
        let core: Vec<usize> = (2..g.len()).collect();
        let k: Vec<usize> = core.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let k = if k.is_empty() { vec![2] } else { k };
        let y = k[rng.gen_range(0..k.len())];
        let f = LipschitzFunctional::distance_to(&d, y).scaled(rng.gen_range(0.5..2.0));
        let cert = pietsch_functional(&d, &f, &k, p, &ToleranceConfig::default()).unwrap();
        let mu = cert.measure.as_ref().unwrap();
        let classes = symmetry_classes(&g, &d, p, mu, DEFAULT_SYMMETRY_TOL).unwrap();
        let e = e_p(&g, &f, p).unwrap();
        for class in &classes.classes {
            for &u in class {
                for &v in class {
                    let route = e.path(u, v);
                    for w in route.path.windows(2) {
                        prop_assert!((f.values[w[0]] - f.values[w[1]]).abs() <= 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn path_metrics_are_pseudometrics(seed in any::<u64>(), n in 2usize..=40, pi in 0usize..3) {
        let p = [1.0, 2.5, 4.0][pi];
        let mut rng = seeded(seed);
        let g = random_graph(&mut rng, n, n);
        let d = g.metric_space(1.0).unwrap();
        let f = random_index(&mut rng, n);
        let mu = random_measure(&mut rng, n);
        let q = q_p(&g, p).unwrap();
        assert_pseudometric(&q.matrix(), 1e-9);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    prop_assert!(q.distance(i, j) > 0.0);
                }
            }
        }
        assert_pseudometric(&d_p(&g, &d, p).unwrap().matrix(), 1e-9);
        assert_pseudometric(&d_p_mu(&g, &d, p, &mu).unwrap().matrix(), 1e-9);
        assert_pseudometric(&e_p(&g, &f, p).unwrap().matrix(), 1e-9);
    }

    #[test]
    fn path_results_are_consistent(seed in any::<u64>(), n in 2usize..=15, pi in 0usize..2) {
        let p = [1.0, 3.0][pi];
        let mut rng = seeded(seed);
        let g = random_graph(&mut rng, n, n);
        let d = g.metric_space(1.0).unwrap();
        let f = random_index(&mut rng, n);
        let mu = random_measure(&mut rng, n);
        check_path_result(&g, &q_p(&g, p).unwrap(), &|_, _, w| w.powf(p));
        check_path_result(&g, &d_p(&g, &d, p).unwrap(), &|u, v, _| d.distance(u, v).powf(p));
        check_path_result(&g, &e_p(&g, &f, p).unwrap(), &|u, v, _| (f.values[u] - f.values[v]).abs().powf(p));
        let step = |u: usize, v: usize, _: f64| mu.integrate(|w| (d.distance(u, w) - d.distance(v, w)).abs().powf(p));
        check_path_result(&g, &d_p_mu(&g, &d, p, &mu).unwrap(), &step);
    }

    #[test]
    fn shortest_paths_match_enumeration(seed in any::<u64>(), n in 2usize..=8, pi in 0usize..2) {
        let p = [1.0, 2.0][pi];
        let mut rng = seeded(seed);
        let g = random_graph(&mut rng, n, 4);
        let q = q_p(&g, p).unwrap();
        for a in 0..n {
            for b in 0..n {
                let (sum, _) = brute_force_path(&g, a, b, &|_, _, w: f64| w.powf(p));
                prop_assert!((q.powered().get(a, b) - sum).abs() <= 1e-12 * (1.0 + sum));
            }
        }
    }

    #[test]
    fn parallel_results_are_deterministic(seed in any::<u64>(), n in 2usize..=25) {
        let mut rng = seeded(seed);
        let g = random_graph(&mut rng, n, n);
        let f = random_index(&mut rng, n);
        let a = e_p(&g, &f, 2.0).unwrap();
        let b = e_p(&g, &f, 2.0).unwrap();
        prop_assert_eq!(a, b);
    }
}
