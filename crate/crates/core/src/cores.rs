//! Seed and core predicates, core extraction by peeling low-gain elements,
//! and exhaustive core enumeration.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cube::{mask_bits, popcount, CubeModel, Mask};
use crate::error::{Error, Result};
use crate::graph::{Graph, SubgraphModel};
use crate::scalar::{f64_to_ratio, ratio_to_f64, Scalar};
use crate::Rational;

/// Parameters of the core conditions. `k` and `phi_plus` are user inputs;
/// they are converted to exact rationals on construction.
#[derive(Clone, Debug)]
pub struct CoreParams {
    pub delta: Rational,
    pub eps: Rational,
    pub k: Rational,
    pub phi_plus: Rational,
}

impl CoreParams {
    pub fn new(delta: Rational, eps: Rational, k: f64, phi_plus: f64) -> Result<Self> {
        let half = Rational::new(1.into(), 2.into());
        if !(eps > Rational::zero() && eps < half) {
            return Err(Error::Domain("ε must lie in (0, 1/2)".into()));
        }
        if !(k > 0.0) || !(phi_plus > 0.0) {
            return Err(Error::Domain("K and phi_plus must be positive".into()));
        }
        Ok(CoreParams { delta, eps, k: f64_to_ratio(k)?, phi_plus: f64_to_ratio(phi_plus)? })
    }

    /// `K · Φ_X(δ+ε)`.
    pub fn size_cap(&self) -> Rational {
        &self.k * &self.phi_plus
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoreCheck {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    pub conditional_mean: String,
    /// Smallest single-element gain; absent for the empty set.
    pub min_gain: Option<String>,
}

impl CoreCheck {
    pub fn is_core(&self) -> bool {
        self.c1 && self.c2 && self.c3
    }
}

/// `E_I[X] − E_{I∖{i}}[X]`.
pub fn gain(cube: &CubeModel<Rational>, set: Mask, i: usize) -> Rational {
    cube.conditional_mean(set, 0) - cube.conditional_mean(set & !(1u128 << i), 0)
}

fn min_gain(cube: &CubeModel<Rational>, set: Mask) -> Option<Rational> {
    let e = cube.conditional_mean(set, 0);
    mask_bits(set).map(|i| &e - cube.conditional_mean(set & !(1u128 << i), 0)).min()
}

/// Checks (C1) bias, (C2) size and (C3) minimum gain, all exactly.
pub fn is_core(cube: &CubeModel<Rational>, params: &CoreParams, set: Mask) -> CoreCheck {
    let mean = cube.mean();
    let e = cube.conditional_mean(set, 0);
    let cap = params.size_cap();
    let c1 = e >= (Rational::one() + &params.delta - &params.eps) * &mean;
    let c2 = Rational::from_count(popcount(set) as u64) <= cap;
    let mg = min_gain(cube, set);
    let c3 = match &mg {
        None => true,
        Some(g) => *g >= &mean / &cap,
    };
    CoreCheck { c1, c2, c3, conditional_mean: e.render(), min_gain: mg.map(|g| g.render()) }
}

#[derive(Clone, Debug)]
pub struct CoreExtraction {
    pub core: Mask,
    /// Removed coordinates in removal order.
    pub removed: Vec<usize>,
    /// `s / |I|` with the original `|I|`.
    pub threshold: Rational,
}

/// Removes, while possible, an element whose gain in the current set is below
/// `s/|I|` (original `|I|`); smallest gain first, ties to the smaller index.
pub fn extract_core(cube: &CubeModel<Rational>, set: Mask, s: &Rational) -> Result<CoreExtraction> {
    if *s < Rational::zero() {
        return Err(Error::Domain("s must be nonnegative".into()));
    }
    let size = popcount(set);
    if size == 0 {
        return Ok(CoreExtraction { core: 0, removed: Vec::new(), threshold: Rational::zero() });
    }
    let threshold = s / Rational::from_count(size as u64);
    let mut cur = set;
    let mut removed = Vec::new();
    loop {
        let e = cube.conditional_mean(cur, 0);
        let best = mask_bits(cur)
            .map(|i| (&e - cube.conditional_mean(cur & !(1u128 << i), 0), i))
            .min();
        match best {
            Some((g, i)) if g < threshold => {
                cur &= !(1u128 << i);
                removed.push(i);
            }
            _ => break,
        }
    }
    Ok(CoreExtraction { core: cur, removed, threshold })
}

#[derive(Clone, Debug)]
pub struct CoreReport {
    pub size: usize,
    pub count: u64,
    pub witnesses: Vec<Mask>,
    /// `(1/p)^{εm/2}`.
    pub stability_bound: f64,
    pub passes: bool,
}

impl CoreReport {
    pub fn to_json(&self, cube: &CubeModel<Rational>) -> Value {
        json!({
            "size": self.size,
            "count": self.count,
            "witnesses": self.witnesses.iter().map(|&w| cube.payload(w)).collect::<Vec<_>>(),
            "stability_bound": self.stability_bound,
            "passes": self.passes,
        })
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn stability_bound(cube: &CubeModel<Rational>, params: &CoreParams, m: usize) -> f64 {
    let p = cube.p.as_f64();
    (1.0 / p).powf(ratio_to_f64(&params.eps) * m as f64 / 2.0)
}

/// Scans every size-`m` subset of the coordinates and keeps the cores.
/// Witnesses are listed in lexicographic order of their coordinates.
pub fn enumerate_cores(cube: &CubeModel<Rational>, params: &CoreParams, m: usize, budget: u64) -> Result<CoreReport> {
    let n = cube.n_coords();
    let bound = stability_bound(cube, params, m);
    let empty = |size| CoreReport { size, count: 0, witnesses: Vec::new(), stability_bound: bound, passes: true };
    if Rational::from_count(m as u64) > params.size_cap() || m > n {
        return Ok(empty(m));
    }
    let total = binomial(n, m);
    if total > budget as u128 {
        // Partial sequential scan for the error payload.
        let mut idx: Vec<usize> = (0..m).collect();
        let mut count = 0u64;
        for _ in 0..budget {
            let mask = idx.iter().fold(0u128, |a, &i| a | 1u128 << i);
            if is_core(cube, params, mask).is_core() {
                count += 1;
            }
            if !crate::variational::next_combination(&mut idx, n) {
                break;
            }
        }
        return Err(Error::Budget {
            msg: format!("C({n},{m}) = {total} subsets exceed the budget of {budget}"),
            partial: Some(json!({ "size": m, "scanned": budget, "partial_count": count })),
        });
    }
    if m == 0 {
        let hit = is_core(cube, params, 0).is_core();
        let w = if hit { vec![0] } else { Vec::new() };
        return Ok(CoreReport { size: 0, count: hit as u64, witnesses: w, stability_bound: bound, passes: hit as u64 as f64 <= bound });
    }
    // Blocks keyed by the smallest element.
    let blocks: Vec<Vec<Mask>> = (0..=n - m)
        .into_par_iter()
        .map(|first| {
            let mut found = Vec::new();
            let rest = n - first - 1;
            let mut idx: Vec<usize> = (0..m - 1).collect();
            loop {
                let mask = idx.iter().fold(1u128 << first, |a, &i| a | 1u128 << (first + 1 + i));
                if is_core(cube, params, mask).is_core() {
                    found.push(mask);
                }
                if m == 1 || !crate::variational::next_combination(&mut idx, rest) {
                    break;
                }
            }
            found
        })
        .collect();
    let witnesses: Vec<Mask> = blocks.into_iter().flatten().collect();
    let count = witnesses.len() as u64;
    Ok(CoreReport { size: m, count, witnesses, stability_bound: bound, passes: count as f64 <= bound })
}

/// Second count of size-`m` cores: coordinates are visited through a seeded
/// random permutation, subsets are produced by Gosper's hack in reverse, and
/// the conditions are evaluated directly from the definitions.
pub fn recount_cores_permuted(cube: &CubeModel<Rational>, params: &CoreParams, m: usize, seed: u64) -> Result<u64> {
    let n = cube.n_coords();
    if n > 63 {
        return Err(Error::budget("the permuted recount handles at most 63 coordinates"));
    }
    if m > n || Rational::from_count(m as u64) > params.size_cap() {
        return Ok(0);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mean = cube.mean();
    let bias = (Rational::one() + &params.delta - &params.eps) * &mean;
    let gain_floor = &mean / params.size_cap();
    let holds = |mask: Mask| -> bool {
        let e = cube.conditional_mean(mask, 0);
        if e < bias {
            return false;
        }
        (0..n).filter(|&i| mask >> i & 1 == 1).all(|i| &e - cube.conditional_mean(mask ^ (1u128 << i), 0) >= gain_floor)
    };
    let map = |local: u64| -> Mask { (0..n).filter(|&b| local >> b & 1 == 1).fold(0, |a, b| a | 1u128 << perm[b]) };
    if m == 0 {
        return Ok(holds(0) as u64);
    }
    // Gosper's hack on the local (permuted) indices, from the top down.
    let limit = 1u64 << n;
    let mut subsets = Vec::new();
    let mut x: u64 = (1u64 << m) - 1;
    while x < limit {
        subsets.push(x);
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    Ok(subsets.iter().rev().filter(|&&s| holds(map(s))).count() as u64)
}

/// Decomposition of one core edge's gain for the triangle model.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeClass {
    pub edge: (usize, usize),
    /// Triangles of `G*` through the edge.
    pub t2: usize,
    /// Two-paths through the edge whose closing pair is absent from `G*`.
    pub t1: usize,
    /// Remaining vertices.
    pub t0: usize,
    pub gain: String,
    pub decomposition: String,
    pub in_a: bool,
    pub endpoint_in_b: bool,
}

/// Splits each edge gain as `(1−p)(t_2 + t_1 p + t_0 p²)` and reports whether
/// the edge lies inside the degree class `A` (degree ≥ `a_deg`) or meets `B`
/// (degree ≥ `b_deg`).
pub fn classify_core_edges(model: &SubgraphModel<Rational>, g_star: &Graph, a_deg: usize, b_deg: usize) -> Result<Vec<EdgeClass>> {
    let pat = &model.pattern;
    if pat.n() != 3 || pat.edge_count() != 3 {
        return Err(Error::Unsupported("edge classification is defined for the triangle model only".into()));
    }
    if g_star.n() != model.n {
        return Err(Error::Domain("G* must live on the model's vertex set".into()));
    }
    let p = &model.p;
    let q = Rational::one() - p;
    let n = model.n;
    let mut out = Vec::new();
    for (u, v) in g_star.edges() {
        let nu = g_star.neighbors(u);
        let nv = g_star.neighbors(v);
        let t2 = nu.intersection_count(nv);
        let t1 = (0..n).filter(|&w| w != u && w != v && (nu.contains(w) != nv.contains(w))).count();
        let t0 = n - 2 - t2 - t1;
        let dec = &q * (Rational::from_count(t2 as u64) + Rational::from_count(t1 as u64) * p + Rational::from_count(t0 as u64) * p * p);
        let g = crate::graph::edge_gain(model, g_star, (u, v))?;
        let in_a = g_star.degree(u) >= a_deg && g_star.degree(v) >= a_deg;
        let endpoint_in_b = g_star.degree(u) >= b_deg || g_star.degree(v) >= b_deg;
        out.push(EdgeClass { edge: (u, v), t2, t1, t0, gain: g.render(), decomposition: dec.render(), in_a, endpoint_in_b });
    }
    Ok(out)
}
