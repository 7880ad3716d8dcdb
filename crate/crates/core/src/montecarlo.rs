//! Seeded Monte Carlo estimates of upper-tail probabilities, optionally
//! conditioned on a planted structure, and certifiers for the clique and hub
//! events.
//!
//! Samples are drawn in fixed blocks; block `b` uses a ChaCha stream keyed by
//! `(seed, b)`, so the result does not depend on how blocks are scheduled.

use num_traits::{One, ToPrimitive};
use rand::distributions::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bitset::BitSet;
use crate::cube::{CubeModel, Mask};
use crate::error::{Error, Result};
use crate::graph::{enumerate_embeddings, EmbedOptions, Graph, SubgraphModel};
use crate::model::Model;
use crate::scalar::ratio_to_f64;
use crate::Rational;

pub const BLOCK: u64 = 4096;

/// What is sampled: a cube model (at most 128 coordinates) or a subgraph
/// count on `G(n,p)` for larger `n`.
#[derive(Clone, Debug)]
pub enum McModel {
    Cube(CubeModel<Rational>),
    Graph(SubgraphModel<Rational>),
}

impl McModel {
    /// Uses the cube whenever it fits, the graph sampler otherwise.
    pub fn from_model(model: &Model<Rational>) -> Result<Self> {
        match model.cube() {
            Ok(c) => Ok(McModel::Cube(c)),
            Err(Error::Budget { .. }) => match model {
                Model::Subgraph(m) => Ok(McModel::Graph(m.clone())),
                _ => Err(Error::Unsupported("sampling beyond 128 coordinates is available for subgraph counts only".into())),
            },
            Err(e) => Err(e),
        }
    }

    fn p(&self) -> &Rational {
        match self {
            McModel::Cube(c) => &c.p,
            McModel::Graph(m) => &m.p,
        }
    }

    pub fn mean(&self) -> Rational {
        match self {
            McModel::Cube(c) => c.mean(),
            McModel::Graph(m) => m.mean(),
        }
    }
}

/// Forced-present coordinates.
#[derive(Clone, Debug)]
pub enum Plant {
    Coords(Mask),
    Graph(Graph),
}

#[derive(Clone, Debug)]
pub struct McConfig {
    pub model: McModel,
    pub delta: Rational,
    pub samples: u64,
    pub seed: u64,
    pub plant: Option<Plant>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub p_hat: f64,
    pub stderr: f64,
    pub hits: u64,
    pub samples: u64,
    pub seed: u64,
    /// Sample mean of `X` and its standard error.
    pub x_mean: f64,
    pub x_stderr: f64,
}

impl McEstimate {
    pub fn to_json(&self) -> Value {
        json!({
            "p_hat": self.p_hat,
            "stderr": self.stderr,
            "hits": self.hits,
            "samples": self.samples,
            "seed": self.seed,
            "x_mean": self.x_mean,
            "x_stderr": self.x_stderr,
        })
    }
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Smallest integer `t` with `t ≥ (1+δ)E[X]`.
pub fn tail_threshold(mean: &Rational, delta: &Rational) -> u64 {
    let t = (Rational::one() + delta) * mean;
    t.ceil().to_integer().to_u64().unwrap_or(u64::MAX)
}

#[derive(Default, Clone, Copy)]
struct Acc {
    hits: u64,
    sum: f64,
    sum_sq: f64,
}

fn sample_graph(n: usize, coin: &Bernoulli, plant: Option<&Graph>, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = plant.cloned().unwrap_or_else(|| Graph::empty(n));
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) && coin.sample(rng) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Estimates `Pr(X ≥ (1+δ)E[X])`, conditioned on the plant when given.
pub fn sample_tail(cfg: &McConfig) -> Result<McEstimate> {
    if cfg.samples == 0 {
        return Err(Error::Domain("samples must be at least 1".into()));
    }
    let coin = Bernoulli::new(ratio_to_f64(cfg.model.p())).map_err(|e| Error::Domain(e.to_string()))?;
    let threshold = tail_threshold(&cfg.model.mean(), &cfg.delta);
    let blocks = cfg.samples.div_ceil(BLOCK);

    let run_block = |b: u64| -> Result<Acc> {
        let mut rng = block_rng(cfg.seed, b);
        let count = BLOCK.min(cfg.samples - b * BLOCK);
        let mut acc = Acc::default();
        let mut record = |x: u64| {
            acc.hits += (x >= threshold) as u64;
            acc.sum += x as f64;
            acc.sum_sq += (x as f64) * (x as f64);
        };
        match &cfg.model {
            McModel::Cube(cube) => {
                let planted = match &cfg.plant {
                    None => 0,
                    Some(Plant::Coords(m)) => *m,
                    Some(Plant::Graph(g)) => cube.graph_to_mask(g)?,
                };
                let free: Vec<usize> = (0..cube.n_coords()).filter(|&i| planted >> i & 1 == 0).collect();
                for _ in 0..count {
                    let mut y = planted;
                    for &i in &free {
                        if coin.sample(&mut rng) {
                            y |= 1u128 << i;
                        }
                    }
                    record(cube.value(y));
                }
            }
            McModel::Graph(model) => {
                let plant = match &cfg.plant {
                    None => None,
                    Some(Plant::Graph(g)) if g.n() == model.n => Some(g),
                    Some(_) => return Err(Error::Domain("plant must be a graph on the model's vertex set".into())),
                };
                for _ in 0..count {
                    let g = sample_graph(model.n, &coin, plant, &mut rng);
                    record(enumerate_embeddings(&model.pattern, &g, &EmbedOptions::default()).copies);
                }
            }
        }
        Ok(acc)
    };
    let parts: Vec<Acc> = (0..blocks).into_par_iter().map(run_block).collect::<Result<_>>()?;
    let tot = parts.iter().fold(Acc::default(), |a, b| Acc { hits: a.hits + b.hits, sum: a.sum + b.sum, sum_sq: a.sum_sq + b.sum_sq });
    let n = cfg.samples as f64;
    let p_hat = tot.hits as f64 / n;
    let x_mean = tot.sum / n;
    let var = if cfg.samples > 1 { ((tot.sum_sq - n * x_mean * x_mean) / (n - 1.0)).max(0.0) } else { 0.0 };
    Ok(McEstimate {
        p_hat,
        stderr: (p_hat * (1.0 - p_hat) / n).sqrt(),
        hits: tot.hits,
        samples: cfg.samples,
        seed: cfg.seed,
        x_mean,
        x_stderr: (var / n).sqrt(),
    })
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain("ε must lie in (0, 1)".into()));
    }
    Ok(())
}

/// `(1−ε)x^{1/r}np^{(r−1)/2}`.
pub fn clique_size_floor(n: usize, eps: f64, x: f64, p: f64, r: usize) -> f64 {
    (1.0 - eps) * x.powf(1.0 / r as f64) * n as f64 * p.powf((r - 1) as f64 / 2.0)
}

/// `(1−ε)n(⌊a⌋ + {a}^{1/(r−1)})` with `a = xnp^{r−1}/r`.
pub fn hub_cut_floor(n: usize, eps: f64, x: f64, p: f64, r: usize) -> f64 {
    let a = x * n as f64 * p.powi(r as i32 - 1) / r as f64;
    let fl = a.floor();
    (1.0 - eps) * n as f64 * (fl + (a - fl).powf(1.0 / (r - 1) as f64))
}

/// Checks the clique event's inequalities for a given `U`.
pub fn verify_clique_event(g: &Graph, u: &[usize], eps: f64, x: f64, p: f64, r: usize) -> bool {
    if x == 0.0 {
        return true;
    }
    let set = BitSet::from_iter_len(g.n(), u.iter().copied());
    let size = set.count();
    size as f64 >= clique_size_floor(g.n(), eps, x, p, r)
        && size > 0
        && set.iter().all(|v| g.degree_within(v, &set) as f64 >= (1.0 - eps) * size as f64)
}

/// Checks the hub event's inequalities for a given `U`.
pub fn verify_hub_event(g: &Graph, u: &[usize], eps: f64, x: f64, p: f64, r: usize) -> bool {
    if x == 0.0 {
        return true;
    }
    let n = g.n();
    let set = BitSet::from_iter_len(n, u.iter().copied());
    let high = set.iter().filter(|&v| g.degree(v) as f64 >= (1.0 - eps) * n as f64).count();
    high as f64 >= ((1.0 - eps) * set.count() as f64).floor() && g.cut_size(&set) as f64 >= hub_cut_floor(n, eps, x, p, r)
}

/// Peels minimum-degree vertices until `G[U]` has minimum degree at least
/// `(1−ε)|U|`.
fn peel(g: &Graph, mut set: BitSet, eps: f64) -> BitSet {
    loop {
        let size = set.count();
        if size == 0 {
            return set;
        }
        let (v, d) = set.iter().map(|v| (v, g.degree_within(v, &set))).min_by_key(|&(v, d)| (d, v)).unwrap();
        if d as f64 >= (1.0 - eps) * size as f64 {
            return set;
        }
        set.remove(v);
    }
}

/// Sound but incomplete certifier for the clique event. Candidates are the
/// whole vertex set and every closed neighbourhood; each is peeled and the
/// largest survivor meeting the size floor is returned (re-verified).
pub fn detect_clique_event(g: &Graph, eps: f64, x: f64, p: f64, r: usize) -> Result<Option<Vec<usize>>> {
    check_eps(eps)?;
    if x == 0.0 {
        return Ok(Some(Vec::new()));
    }
    let n = g.n();
    let mut starts = vec![BitSet::full(n)];
    for v in 0..n {
        let mut s = g.neighbors(v).clone();
        s.insert(v);
        starts.push(s);
    }
    let best = starts
        .into_par_iter()
        .map(|s| peel(g, s, eps))
        .filter(|s| !s.is_empty())
        .map(|s| s.iter().collect::<Vec<_>>())
        .max_by_key(|u| (u.len(), std::cmp::Reverse(u.clone())));
    Ok(best.filter(|u| verify_clique_event(g, u, eps, x, p, r)))
}

/// Sound but incomplete certifier for the hub event: `U` ranges over the
/// top-`k` vertices by degree (ties to the smaller index), smallest `k` first.
pub fn detect_hub_event(g: &Graph, eps: f64, x: f64, p: f64, r: usize) -> Result<Option<Vec<usize>>> {
    check_eps(eps)?;
    if x == 0.0 {
        return Ok(Some(Vec::new()));
    }
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    for k in 1..=order.len() {
        let mut u = order[..k].to_vec();
        u.sort_unstable();
        if verify_hub_event(g, &u, eps, x, p, r) {
            return Ok(Some(u));
        }
    }
    Ok(None)
}
