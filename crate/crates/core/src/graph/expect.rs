use std::collections::HashMap;

use super::embed::{automorphisms, for_each_embedding, is_canonical};
use super::Graph;
use crate::error::{Error, Result};
use crate::scalar::{check_probability, Scalar};

/// Number of copies of the pattern `H` in `G_{n,p}`, with `p` exact or float.
#[derive(Clone, Debug)]
pub struct SubgraphModel<F> {
    pub pattern: Graph,
    pub n: usize,
    pub p: F,
}

/// Number of induced copies of the pattern: all pattern edges present and
/// all other pairs inside the copy's vertex set absent.
#[derive(Clone, Debug)]
pub struct InducedModel<F> {
    pub pattern: Graph,
    pub n: usize,
    pub p: F,
}

fn validate_pattern(h: &Graph) -> Result<()> {
    if h.edge_count() == 0 {
        return Err(Error::Domain("pattern must have at least one edge".into()));
    }
    if !h.isolated_vertices().is_empty() {
        return Err(Error::Domain("pattern must not have isolated vertices".into()));
    }
    Ok(())
}

impl<F: Scalar> SubgraphModel<F> {
    pub fn new(pattern: Graph, n: usize, p: F) -> Result<Self> {
        validate_pattern(&pattern)?;
        check_probability(&p)?;
        Ok(SubgraphModel { pattern, n, p })
    }

    /// `E[X] = N(H, K_n) p^{e_H}`.
    pub fn mean(&self) -> F {
        F::from_count(copies_in_complete(&self.pattern, self.n) as u64) * self.p.powi(self.pattern.edge_count())
    }

    pub fn max_value(&self) -> u128 {
        copies_in_complete(&self.pattern, self.n)
    }
}

impl<F: Scalar> InducedModel<F> {
    pub fn new(pattern: Graph, n: usize, p: F) -> Result<Self> {
        validate_pattern(&pattern)?;
        check_probability(&p)?;
        Ok(InducedModel { pattern, n, p })
    }

    pub fn mean(&self) -> F {
        let v = self.pattern.n();
        let e = self.pattern.edge_count();
        let non = v * (v - 1) / 2 - e;
        F::from_count(copies_in_complete(&self.pattern, self.n) as u64)
            * self.p.powi(e)
            * (F::one() - self.p.clone()).powi(non)
    }
}

/// `N(H, K_n) = (n)_{v_H} / |Aut(H)|`.
pub fn copies_in_complete(h: &Graph, n: usize) -> u128 {
    if h.n() > n {
        return 0;
    }
    let emb: u128 = (0..h.n()).map(|i| (n - i) as u128).product();
    emb / automorphisms(h).len() as u128
}

fn sum_by_missing<F: Scalar>(hist: &[u64], p: &F) -> F {
    let mut acc = F::zero();
    let mut pw = F::one();
    for &c in hist {
        if c > 0 {
            acc = acc + F::from_count(c) * pw.clone();
        }
        pw = pw * p.clone();
    }
    acc
}

/// `E[X | G0 ⊆ G_{n,p}]` by listing every copy of `H` in `K_n`.
pub fn conditional_expectation_subgraph_direct<F: Scalar>(model: &SubgraphModel<F>, g0: &Graph) -> Result<F> {
    check_probability(&model.p)?;
    if g0.n() != model.n {
        return Err(Error::Domain(format!("G0 has {} vertices, model has n={}", g0.n(), model.n)));
    }
    let h = &model.pattern;
    let kn = Graph::complete(model.n);
    let auts = automorphisms(h);
    let edges = h.edges();
    let mut hist = vec![0u64; edges.len() + 1];
    for_each_embedding(h, &kn, &[], |phi| {
        let canonical = is_canonical(phi, &auts);
        if canonical {
            let missing = edges.iter().filter(|&&(a, b)| !g0.has_edge(phi[a], phi[b])).count();
            hist[missing] += 1;
        }
    });
    Ok(sum_by_missing(&hist, &model.p))
}

/// `E[X | G0 ⊆ G_{n,p}]`, exact.
///
/// Expands `prod_e (p + (1-p)[e ∈ G0])` over edge subsets `T` of `H`, so the
/// work scales with embeddings into `G0` rather than into `K_n`. Small
/// hosts use the direct copy listing.
pub fn conditional_expectation_subgraph<F: Scalar>(model: &SubgraphModel<F>, g0: &Graph) -> Result<F> {
    check_probability(&model.p)?;
    if g0.n() != model.n {
        return Err(Error::Domain(format!("G0 has {} vertices, model has n={}", g0.n(), model.n)));
    }
    let h = &model.pattern;
    let direct_work: f64 = (0..h.n()).map(|i| (model.n - i.min(model.n)) as f64).product();
    if direct_work <= 2e5 || h.edge_count() > 20 {
        return conditional_expectation_subgraph_direct(model, g0);
    }
    let edges = h.edges();
    let e = edges.len();
    let p = &model.p;
    let q = F::one() - p.clone();
    let aut = automorphisms(h).len() as u64;
    let mut cache: HashMap<Graph, u64> = HashMap::new();
    let mut acc = F::zero();
    for t in 0u32..(1u32 << e) {
        let chosen: Vec<(usize, usize)> =
            (0..e).filter(|&i| t >> i & 1 == 1).map(|i| edges[i]).collect();
        let mut covered: Vec<usize> = chosen.iter().flat_map(|&(a, b)| [a, b]).collect();
        covered.sort_unstable();
        covered.dedup();
        let jt = {
            let pos = |x: usize| covered.binary_search(&x).unwrap();
            let rel: Vec<(usize, usize)> = chosen.iter().map(|&(a, b)| (pos(a), pos(b))).collect();
            Graph::from_edges(covered.len(), &rel)?
        };
        let emb = *cache.entry(jt.clone()).or_insert_with(|| {
            let mut c = 0u64;
            for_each_embedding(&jt, g0, &[], |_| c += 1);
            c
        });
        if emb == 0 {
            continue;
        }
        let vt = covered.len();
        let free: u64 = (0..h.n() - vt).map(|i| (model.n - vt - i) as u64).product();
        let weight = p.powi(e - chosen.len()) * q.powi(chosen.len());
        acc = acc + F::from_count(emb) * F::from_count(free) * weight;
    }
    Ok(acc / F::from_count(aut))
}

/// `E_{G0}[X] - E_{G0 - e}[X] = (1-p) Σ_{copies H' ∋ e} p^{|E(H') \ E(G0)|}`.
///
/// `e` must be an edge of `G0`.
pub fn edge_gain<F: Scalar>(model: &SubgraphModel<F>, g0: &Graph, e: (usize, usize)) -> Result<F> {
    check_probability(&model.p)?;
    if !g0.has_edge(e.0, e.1) {
        return Err(Error::Domain(format!("({},{}) is not an edge of G0", e.0, e.1)));
    }
    let h = &model.pattern;
    let kn = Graph::complete(model.n);
    let auts = automorphisms(h);
    let edges = h.edges();
    let mut hist = vec![0u64; edges.len() + 1];
    for &(a, b) in &edges {
        for fixed in [[(a, e.0), (b, e.1)], [(a, e.1), (b, e.0)]] {
            for_each_embedding(h, &kn, &fixed, |phi| {
                let canonical = is_canonical(phi, &auts);
                if canonical {
                    let missing = edges.iter().filter(|&&(x, y)| !g0.has_edge(phi[x], phi[y])).count();
                    hist[missing] += 1;
                }
            });
        }
    }
    Ok((F::one() - model.p.clone()) * sum_by_missing(&hist, &model.p))
}
