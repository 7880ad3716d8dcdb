//! Constructive stability extractors: a dense piece from a clique-rich graph,
//! the high-degree split, and near-extremal star configurations.

use serde::Serialize;

use super::bounds::{falling_u64, star_side};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{enumerate_embeddings, EmbedOptions, Graph};
use crate::scalar::ratio_to_f64;
use crate::Rational;
use num_traits::Signed;

fn emb_count(j: &Graph, g: &Graph) -> u64 {
    enumerate_embeddings(j, g, &EmbedOptions::default()).total
}

#[derive(Clone, Debug, Serialize)]
pub struct DenseSubgraph {
    /// Vertices of `G` kept, ascending.
    pub vertices: Vec<usize>,
    /// Induced subgraph on `vertices`, relabelled in that order.
    pub graph: Graph,
    pub emb: u64,
    /// Deficit with the lower clamp `e_G^{-1/2}` applied.
    pub eps: f64,
    /// Degree threshold used when peeling the auxiliary graph.
    pub threshold: f64,
    /// `(1 − 4ε^{1/2})(2e_G)^{1/2}`.
    pub guarantee: f64,
    pub min_degree: usize,
}

/// The clique deficit `ε` with `|Emb(K_r,G)| = (1−ε)(2e_G)^{r/2}`, clamped
/// below at `e_G^{-1/2}`, plus the raw embedding count.
pub fn clique_deficit(g: &Graph, r: usize) -> (f64, u64) {
    let e = g.edge_count() as f64;
    let emb = emb_count(&Graph::complete(r), g);
    if e == 0.0 {
        return (1.0, emb);
    }
    let raw = 1.0 - emb as f64 / (2.0 * e).powf(r as f64 / 2.0);
    (raw.max(e.powf(-0.5)), emb)
}

/// Peels the auxiliary graph on `E(G)` (two disjoint edges adjacent when
/// their four endpoints span a `K_4`) and returns the subgraph induced by the
/// endpoints of surviving edges.
///
/// `threshold` defaults to `(1 − 2ε'^{1/2})e_G`, where `ε' = 3ε` for odd `r`
/// (the triangle route) and `ε' = ε` for even `r`. Without an override the
/// result is `None` whenever the guaranteed minimum degree is nonpositive.
pub fn extract_dense_subgraph(g: &Graph, r: usize, threshold: Option<f64>) -> Result<Option<DenseSubgraph>> {
    if r < 3 {
        return Err(Error::Domain("r must be at least 3".into()));
    }
    let m = g.edge_count();
    if m == 0 {
        return Ok(None);
    }
    let (eps, emb) = clique_deficit(g, r);
    let e = m as f64;
    let guarantee = (1.0 - 4.0 * eps.sqrt()) * (2.0 * e).sqrt();
    let threshold = match threshold {
        Some(t) => t,
        None => {
            if guarantee <= 0.0 {
                return Ok(None);
            }
            let eps_p4 = if r % 2 == 1 { 3.0 * eps } else { eps };
            (1.0 - 2.0 * eps_p4.sqrt()) * e
        }
    };

    let edges = g.edges();
    let mut f: Vec<Vec<usize>> = vec![Vec::new(); m];
    for i in 0..m {
        let (u, v) = edges[i];
        for k in i + 1..m {
            let (x, y) = edges[k];
            if u == x || u == y || v == x || v == y {
                continue;
            }
            if g.has_edge(u, x) && g.has_edge(u, y) && g.has_edge(v, x) && g.has_edge(v, y) {
                f[i].push(k);
                f[k].push(i);
            }
        }
    }
    let mut deg: Vec<usize> = f.iter().map(Vec::len).collect();
    let mut alive = vec![true; m];
    let mut queue: Vec<usize> = (0..m).filter(|&i| (deg[i] as f64) < threshold).collect();
    for &i in &queue {
        alive[i] = false;
    }
    while let Some(i) = queue.pop() {
        for &k in &f[i] {
            if alive[k] {
                deg[k] -= 1;
                if (deg[k] as f64) < threshold {
                    alive[k] = false;
                    queue.push(k);
                }
            }
        }
    }
    let mut keep = BitSet::new(g.n());
    for i in (0..m).filter(|&i| alive[i]) {
        keep.insert(edges[i].0);
        keep.insert(edges[i].1);
    }
    if keep.is_empty() {
        return Ok(None);
    }
    let vertices: Vec<usize> = keep.iter().collect();
    let graph = g.induced(&vertices);
    let min_degree = graph.min_degree();
    Ok(Some(DenseSubgraph { vertices, graph, emb, eps, threshold, guarantee, min_degree }))
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitReport {
    pub u: Vec<usize>,
    pub v: Vec<usize>,
    pub emb_kr: u64,
    pub emb_kr_v: u64,
    /// `Emb(K_r,G) − Emb(K_r,G[V])`.
    pub loss: u64,
    /// `r·|U|·Emb(K_{r−1},G)`.
    pub loss_bound: u64,
    /// `2e_G/θ`.
    pub u_bound: f64,
    pub stars_total: u64,
    pub stars_hub: u64,
    pub t1: u64,
    pub t2: u64,
    /// `(r−1)|U|²n^{r−2}`.
    pub t1_bound: f64,
    /// `2(r−1)e_G θ^{r−2}`.
    pub t2_bound: f64,
}

impl SplitReport {
    pub fn identities_hold(&self) -> bool {
        self.loss <= self.loss_bound
            && self.u.len() as f64 <= self.u_bound
            && self.stars_total == self.stars_hub + self.t1 + self.t2
            && self.t1 as f64 <= self.t1_bound
            && self.t2 as f64 <= self.t2_bound
    }
}

/// Splits off the vertices of degree at least `theta` and reports the
/// clique and star accounting.
pub fn split_high_degree(g: &Graph, theta: f64, r: usize) -> Result<SplitReport> {
    if !(theta > 0.0) {
        return Err(Error::Domain("theta must be positive".into()));
    }
    if r < 3 {
        return Err(Error::Domain("r must be at least 3".into()));
    }
    let n = g.n();
    let u: Vec<usize> = (0..n).filter(|&x| g.degree(x) as f64 >= theta).collect();
    let v: Vec<usize> = (0..n).filter(|&x| (g.degree(x) as f64) < theta).collect();
    let vset = BitSet::from_iter_len(n, v.iter().copied());
    let kr = Graph::complete(r);
    let emb_kr = emb_count(&kr, g);
    let emb_kr_v = emb_count(&kr, &g.induced(&v));
    let loss_bound = (r * u.len()) as u64 * emb_count(&Graph::complete(r - 1), g);
    let s = r - 1;
    let stars_total: u64 = (0..n).map(|x| falling_u64(g.degree(x) as u64, s)).sum();
    let stars_hub: u64 = u.iter().map(|&x| falling_u64(g.degree_within(x, &vset) as u64, s)).sum();
    let t2: u64 = v.iter().map(|&x| falling_u64(g.degree(x) as u64, s)).sum();
    let t1 = stars_total - stars_hub - t2;
    let e = g.edge_count() as f64;
    Ok(SplitReport {
        loss: emb_kr - emb_kr_v,
        emb_kr,
        emb_kr_v,
        loss_bound,
        u_bound: 2.0 * e / theta,
        stars_total,
        stars_hub,
        t1,
        t2,
        t1_bound: s as f64 * (u.len() as f64).powi(2) * (n as f64).powi(r as i32 - 2),
        t2_bound: 2.0 * s as f64 * e * theta.powi(r as i32 - 2),
        u,
        v,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct StarWitness {
    pub w: Vec<usize>,
    pub w_prime: Vec<usize>,
    /// `e_G(W, V)`.
    pub cut: usize,
}

/// Takes the `⌈q⌉` largest-degree vertices of `U` (ties to the smaller
/// index) and returns them with their near-full members when the edge and
/// size conditions hold.
pub fn star_witness(g: &Graph, q: &Rational, s: usize, eps: f64, u: Option<&[usize]>) -> Result<Option<StarWitness>> {
    if s < 2 {
        return Err(Error::Precondition("s must be at least 2".into()));
    }
    let uset = star_side(g, u)?;
    let nu = uset.count();
    let nv = g.n() - nu;
    if !q.is_positive() || ratio_to_f64(q) > nu as f64 {
        return Err(Error::Precondition("q must lie in (0, |U|]".into()));
    }
    let k = q.ceil().to_integer().try_into().unwrap_or(usize::MAX).min(nu);
    let mut cand: Vec<usize> = uset.iter().collect();
    cand.sort_by_key(|&x| (std::cmp::Reverse(g.degree(x)), x));
    let mut w: Vec<usize> = cand[..k].to_vec();
    w.sort_unstable();
    let cut: usize = w.iter().map(|&x| g.degree(x)).sum();
    let w_prime: Vec<usize> = w.iter().copied().filter(|&x| g.degree(x) as f64 >= (1.0 - eps) * nv as f64).collect();
    let ok_cut = cut as f64 >= (1.0 - eps) * ratio_to_f64(q) * nv as f64;
    let ok_size = w_prime.len() as f64 >= ((1.0 - eps) * w.len() as f64).floor();
    Ok((ok_cut && ok_size).then_some(StarWitness { w, w_prime, cut }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn disjoint_union(a: &Graph, extra_edges: usize) -> Graph {
        let n = a.n() + 2 * extra_edges;
        let mut edges = a.edges();
        for i in 0..extra_edges {
            edges.push((a.n() + 2 * i, a.n() + 2 * i + 1));
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn k40_survives_whole() {
        let g = Graph::complete(40);
        let d = extract_dense_subgraph(&g, 3, None).unwrap().unwrap();
        assert_eq!(d.emb, 59280);
        assert_eq!(d.min_degree, 39);
        assert!(d.guarantee > 8.0 && d.guarantee < 10.0);
    }

    #[test]
    fn matching_has_nothing() {
        let g = disjoint_union(&Graph::empty(0), 5);
        assert!(extract_dense_subgraph(&g, 3, None).unwrap().is_none());
    }

    #[test]
    fn isolated_edges_are_peeled() {
        let g = disjoint_union(&Graph::complete(40), 10);
        let d = extract_dense_subgraph(&g, 3, None).unwrap().unwrap();
        assert_eq!(d.vertices, (0..40).collect::<Vec<_>>());
        assert!(d.min_degree as f64 >= d.guarantee);

        // With 40 extra edges the default guarantee is vacuous; an explicit
        // threshold still isolates the clique.
        let g = disjoint_union(&Graph::complete(20), 40);
        assert!(extract_dense_subgraph(&g, 3, None).unwrap().is_none());
        let d = extract_dense_subgraph(&g, 3, Some(1.0)).unwrap().unwrap();
        assert_eq!(d.vertices, (0..20).collect::<Vec<_>>());
    }

    #[test]
    fn split_examples() {
        let r = split_high_degree(&Graph::star(50), 10.0, 3).unwrap();
        assert_eq!(r.u, vec![0]);
        assert!(r.identities_hold());
        assert_eq!(r.stars_hub, 50 * 49);
        assert!(split_high_degree(&Graph::empty(0), 1.0, 3).unwrap().u.is_empty());
        let r = split_high_degree(&Graph::cycle(8), 3.0, 3).unwrap();
        assert!(r.u.is_empty());
        assert_eq!(r.t2, 16);
        assert!(r.identities_hold());
    }

    #[test]
    fn star_witness_examples() {
        let q = |a: i64| Rational::from_integer(BigInt::from(a));
        let w = star_witness(&Graph::complete_bipartite(2, 5), &q(2), 2, 0.1, None).unwrap().unwrap();
        assert_eq!(w.w, vec![0, 1]);
        assert_eq!(w.w_prime, w.w);

        let empty = Graph::empty(6);
        let u = [0, 1];
        assert!(star_witness(&empty, &q(1), 2, 0.1, Some(&u)).unwrap().is_none());

        let mut g = Graph::empty(6);
        for v in 2..6 {
            g.add_edge(0, v);
        }
        g.add_edge(1, 2);
        let w = star_witness(&g, &q(1), 2, 0.1, Some(&u)).unwrap().unwrap();
        assert_eq!(w.w, vec![0]);
        assert_eq!(w.w_prime, vec![0]);
    }
}
