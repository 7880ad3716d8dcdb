use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uptail_core::ap::ApModel;
use uptail_core::cube::CubeModel;
use uptail_core::graph::{InducedModel, SubgraphModel};
use uptail_core::moments::{
    am_condition, exact_distribution, factorial_moments, falling_factorial_log, poisson_markov_bound,
};
use uptail_core::montecarlo::{
    detect_clique_event, detect_hub_event, sample_tail, verify_clique_event, verify_hub_event, McConfig, McModel, Plant,
};
use uptail_core::{Graph, Rational, Scalar};

fn r(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}

/// Exact-scale instances with at most 15 coordinates.
fn instances() -> Vec<CubeModel<Rational>> {
    let mut out = Vec::new();
    for p in [r(1, 4), r(1, 2)] {
        for n in 3..=5 {
            out.push(CubeModel::from_subgraph(&SubgraphModel::new(Graph::complete(3), n, p.clone()).unwrap()).unwrap());
        }
        out.push(CubeModel::from_subgraph(&SubgraphModel::new(Graph::cycle(4), 5, p.clone()).unwrap()).unwrap());
        out.push(CubeModel::from_induced(&InducedModel::new(Graph::path(3), 4, p.clone()).unwrap()).unwrap());
        for n in [8, 12, 15] {
            out.push(CubeModel::from_ap(&ApModel::new(n, 3, p.clone()).unwrap()).unwrap());
        }
    }
    out
}

#[test]
fn pmf_and_factorial_moments_agree() {
    for cube in instances() {
        let d = exact_distribution(&cube).unwrap();
        assert_eq!(d.total(), Rational::from_count(1));
        let fm = factorial_moments(&cube, 4).unwrap();
        assert_eq!(fm.from_dist.as_ref(), fm.from_tuples.as_ref());
        for t in 0..=4 {
            assert_eq!(d.factorial_moment(t), fm.from_tuples.as_ref().unwrap()[t]);
        }
    }
}

#[test]
fn markov_bound_is_below_the_exact_rate() {
    for cube in instances() {
        let d = exact_distribution(&cube).unwrap();
        let mu = cube.mean();
        for delta in [r(1, 2), r(1, 1), r(2, 1), r(4, 1)] {
            let x = (Rational::from_count(1) + delta.clone()) * mu.clone();
            let tail = d.tail_ge(&x);
            if tail == Rational::from_count(0) {
                continue;
            }
            let mut t = 1;
            while Rational::from_count(t as u64) <= x {
                let b = poisson_markov_bound(&cube, &delta, t).unwrap();
                assert!(b.bound <= -tail.ln() + 1e-9, "t={t}: {} > {}", b.bound, -tail.ln());
                t += 1;
            }
        }
    }
}

#[test]
fn falling_factorial_band() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10_000 {
        let x = 10f64.powf(rng.gen_range(-1.0..4.0));
        let t = rng.gen_range(0..=1000u64);
        let (_, lambda) = falling_factorial_log(x, t).unwrap();
        assert!(lambda >= -1e-9 && lambda <= (t as f64 + 1.0) / x + 1e-9, "x={x} t={t} λ={lambda}");
    }
}

#[test]
fn cluster_bound_hypothesis_needs_large_universes() {
    for n in 5..=1000 {
        assert!(!am_condition(n, 3, 4));
    }
    assert!(am_condition(1_000_000, 3, 4));
}

#[test]
fn monte_carlo_is_unbiased_at_oracle_scale() {
    let cases = [
        (CubeModel::from_subgraph(&SubgraphModel::new(Graph::complete(3), 4, r(1, 2)).unwrap()).unwrap(), r(1, 1)),
        (CubeModel::from_ap(&ApModel::new(10, 3, r(1, 3)).unwrap()).unwrap(), r(1, 2)),
    ];
    for (cube, delta) in cases {
        let d = exact_distribution(&cube).unwrap();
        let exact = d.tail_ge(&((Rational::from_count(1) + delta.clone()) * cube.mean())).as_f64();
        for seed in 0..20 {
            let cfg = McConfig { model: McModel::Cube(cube.clone()), delta: delta.clone(), samples: 20_000, seed, plant: None };
            let est = sample_tail(&cfg).unwrap();
            assert!((est.p_hat - exact).abs() <= 4.0 * est.stderr, "seed {seed}: {} vs {exact}", est.p_hat);
        }
    }
}

#[test]
fn planted_mean_matches_conditional_expectation() {
    let model = SubgraphModel::new(Graph::complete(3), 6, r(1, 3)).unwrap();
    let cube = CubeModel::from_subgraph(&model).unwrap();
    let g0 = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
    let mask = cube.graph_to_mask(&g0).unwrap();
    let exact = cube.conditional_mean(mask, 0).as_f64();
    for plant in [Plant::Coords(mask), Plant::Graph(g0.clone())] {
        let cfg = McConfig { model: McModel::Cube(cube.clone()), delta: r(1, 1), samples: 50_000, seed: 3, plant: Some(plant) };
        let est = sample_tail(&cfg).unwrap();
        assert!((est.x_mean - exact).abs() <= 4.0 * est.x_stderr, "{} vs {exact}", est.x_mean);
    }
}

fn gnp(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn detected_events_verify(seed in any::<u64>(), n in 20usize..60, plant in 0usize..20, hub in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = 0.3;
        let mut g = gnp(&mut rng, n, p);
        for u in 0..plant.min(n) {
            for v in u + 1..plant.min(n) {
                g.add_edge(u, v);
            }
        }
        for u in 0..hub {
            for v in 0..n {
                if u != v {
                    g.add_edge(u, v);
                }
            }
        }
        let (eps, x) = (0.2, 0.5);
        if let Some(u) = detect_clique_event(&g, eps, x, p, 3).unwrap() {
            prop_assert!(verify_clique_event(&g, &u, eps, x, p, 3));
        }
        if let Some(u) = detect_hub_event(&g, eps, x, p, 3).unwrap() {
            prop_assert!(verify_hub_event(&g, &u, eps, x, p, 3));
        }
    }
}
