use uptail_core::cores::{classify_core_edges, enumerate_cores, extract_core, is_core, CoreParams};
use uptail_core::cube::{full_mask, popcount, CubeModel};
use uptail_core::graph::SubgraphModel;
use uptail_core::variational::next_combination;
use uptail_core::{Graph, Rational, Scalar};

fn r(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}

fn triangles(n: usize, p: Rational) -> (SubgraphModel<Rational>, CubeModel<Rational>) {
    let m = SubgraphModel::new(Graph::complete(3), n, p).unwrap();
    let c = CubeModel::from_subgraph(&m).unwrap();
    (m, c)
}

#[test]
fn enumeration_is_exactly_the_core_set() {
    let (_, cube) = triangles(5, r(1, 3));
    let params = CoreParams::new(r(1, 1), r(1, 4), 1.0, 6.0).unwrap();
    let n = cube.n_coords();
    for m in 1..=4 {
        let rep = enumerate_cores(&cube, &params, m, u64::MAX).unwrap();
        for &w in &rep.witnesses {
            assert!(is_core(&cube, &params, w).is_core());
        }
        let mut idx: Vec<usize> = (0..m).collect();
        let mut found = 0;
        loop {
            let mask = idx.iter().fold(0u128, |a, &i| a | 1u128 << i);
            if is_core(&cube, &params, mask).is_core() {
                found += 1;
                assert!(rep.witnesses.contains(&mask));
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
        assert_eq!(found, rep.count);
    }
}

/// Every seed contains a core: with seed bias δ−ε, seed size at most L and
/// s = εE[X], the extracted set meets core bias δ−2ε and min gain εE[X]/L.
#[test]
fn seeds_contain_cores() {
    let (eps, size) = (r(1, 4), 6u64);
    for n in 4..=5 {
        for p in [r(1, 4), r(1, 2)] {
            let (_, cube) = triangles(n, p);
            let mean = cube.mean();
            for delta in [r(1, 2), r(1, 1), r(2, 1)] {
                // Core params: C1 threshold (1+δ−2ε)E, C3 threshold E/(K·φ+) = εE/L.
                let params = CoreParams::new(delta.clone() - eps.clone(), eps.clone(), 1.0, (size * 4) as f64).unwrap();
                let seed_bias = (Rational::from_count(1) + delta.clone() - eps.clone()) * mean.clone();
                let s = eps.clone() * mean.clone();
                for seed in 0..=full_mask(cube.n_coords()) {
                    if popcount(seed) as u64 > size || cube.conditional_mean(seed, 0) < seed_bias {
                        continue;
                    }
                    let core = extract_core(&cube, seed, &s).unwrap().core;
                    let check = is_core(&cube, &params, core);
                    assert!(check.c1 && check.c3, "n={n} δ={} seed={seed:b}", delta.render());
                }
            }
        }
    }
}

#[test]
fn edge_decomposition_matches_gain() {
    for n in 4..=6 {
        let (model, _) = triangles(n, r(1, 3));
        let pairs = n * (n - 1) / 2;
        for bits in (0u64..1 << pairs).step_by(7) {
            let mut g = Graph::empty(n);
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits >> i & 1 == 1 {
                        g.add_edge(u, v);
                    }
                    i += 1;
                }
            }
            for class in classify_core_edges(&model, &g, 2, 3).unwrap() {
                assert_eq!(class.gain, class.decomposition);
                assert_eq!(class.t0 + class.t1 + class.t2, n - 2);
            }
        }
    }
}
