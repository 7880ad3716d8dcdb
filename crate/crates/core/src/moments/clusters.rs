use std::collections::BTreeMap;

use crate::ap::for_each_ap;
use crate::bitset::BitSet;
use crate::cube::{mask_bits, Coords, CubeModel};
use crate::error::{Error, Result};
use crate::graph::index_pair;
use crate::scalar::Scalar;

/// Hypergraph on `0..n_vertices`. When `pair_host` is `Some(n)`, vertex `i`
/// is the `i`-th pair of `K_n`, so unions of edges are graphs.
#[derive(Clone, Debug)]
pub struct Hypergraph {
    pub n_vertices: usize,
    pub edges: Vec<Vec<usize>>,
    pub pair_host: Option<usize>,
}

impl Hypergraph {
    pub fn new(n_vertices: usize, mut edges: Vec<Vec<usize>>) -> Result<Self> {
        for e in edges.iter_mut() {
            e.sort_unstable();
            e.dedup();
            if e.iter().any(|&v| v >= n_vertices) {
                return Err(Error::Domain(format!("hyperedge {e:?} leaves 0..{n_vertices}")));
            }
        }
        let mut seen = edges.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != edges.len() {
            return Err(Error::Domain("hyperedges must be distinct".into()));
        }
        Ok(Hypergraph { n_vertices, edges, pair_host: None })
    }

    /// Supports of the terms of a monotone cube model.
    pub fn from_cube<F: Scalar>(cube: &CubeModel<F>) -> Result<Self> {
        if !cube.is_monotone() {
            return Err(Error::Unsupported("cluster census needs a monotone count".into()));
        }
        let edges = cube.terms.iter().map(|t| mask_bits(t.pos).collect()).collect();
        let mut h = Hypergraph::new(cube.n_coords(), edges)?;
        if let Coords::Pairs { n } = cube.coords {
            h.pair_host = Some(n);
        }
        Ok(h)
    }

    /// The `k`-APs of `[n]`, element `i` stored as vertex `i-1`.
    pub fn aps(n: usize, k: usize) -> Self {
        let mut edges = Vec::new();
        for_each_ap(n, k, |a, b| edges.push((0..k).map(|j| a + j * b - 1).collect()));
        Hypergraph { n_vertices: n, edges, pair_host: None }
    }

    pub fn uniformity(&self) -> Option<usize> {
        let k = self.edges.first()?.len();
        self.edges.iter().all(|e| e.len() == k).then_some(k)
    }
}

#[derive(Clone, Debug)]
pub struct ClusterCensus<F> {
    /// `s -> E[D_s]`.
    pub by_size: BTreeMap<usize, F>,
    /// `(s, k, m) -> E[D_{s,k,m}]` with `k` vertices and `m` edges in the
    /// union; only for pair hypergraphs.
    pub by_size_km: BTreeMap<(usize, usize, usize), F>,
    /// `(s, |union|) -> count`, before weighting.
    pub union_counts: BTreeMap<(usize, usize), u64>,
    pub complete: bool,
    pub enumerated: u64,
}

struct Esu<'a> {
    adj: &'a [Vec<usize>],
    s_max: usize,
    budget: u64,
    seen: u64,
    on_set: &'a mut dyn FnMut(&[usize]),
}

impl Esu<'_> {
    fn extend(&mut self, sub: &mut Vec<usize>, ext: Vec<usize>, root: usize, in_sub_or_nbr: &mut Vec<u32>) -> bool {
        self.seen += 1;
        if self.seen > self.budget {
            return false;
        }
        (self.on_set)(sub);
        if sub.len() == self.s_max {
            return true;
        }
        let mut ext = ext;
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            let mut added = Vec::new();
            for &u in &self.adj[w] {
                if u > root && in_sub_or_nbr[u] == 0 {
                    next.push(u);
                }
            }
            // Mark w's neighbourhood as covered for deeper levels.
            for &u in &self.adj[w] {
                in_sub_or_nbr[u] += 1;
                added.push(u);
            }
            in_sub_or_nbr[w] += 1;
            sub.push(w);
            let ok = self.extend(sub, next, root, in_sub_or_nbr);
            sub.pop();
            in_sub_or_nbr[w] -= 1;
            for u in added {
                in_sub_or_nbr[u] -= 1;
            }
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Calls `f` once for every connected set of at most `s_max` vertices of the
/// graph given by adjacency lists. Returns false if `budget` sets were
/// exceeded.
pub fn for_each_connected_set(adj: &[Vec<usize>], s_max: usize, budget: u64, f: &mut dyn FnMut(&[usize])) -> bool {
    if s_max == 0 {
        return true;
    }
    let mut esu = Esu { adj, s_max, budget, seen: 0, on_set: f };
    let mut mark = vec![0u32; adj.len()];
    for v in 0..adj.len() {
        let ext: Vec<usize> = adj[v].iter().copied().filter(|&u| u > v).collect();
        mark[v] += 1;
        for &u in &adj[v] {
            mark[u] += 1;
        }
        let ok = esu.extend(&mut vec![v], ext, v, &mut mark);
        mark[v] -= 1;
        for &u in &adj[v] {
            mark[u] -= 1;
        }
        if !ok {
            return false;
        }
    }
    true
}

/// Dependency graph: hyperedges joined when they intersect.
pub fn dependency_graph(h: &Hypergraph) -> Vec<Vec<usize>> {
    let sets: Vec<BitSet> = h.edges.iter().map(|e| BitSet::from_iter_len(h.n_vertices, e.iter().copied())).collect();
    let m = sets.len();
    let mut adj = vec![Vec::new(); m];
    for a in 0..m {
        for b in a + 1..m {
            if sets[a].intersection_count(&sets[b]) > 0 {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
    }
    adj
}

/// Exact `E[D_s(H_p)]` for `s ≤ s_max`.
pub fn dependency_clusters<F: Scalar>(h: &Hypergraph, p: &F, s_max: usize, budget: u64) -> ClusterCensus<F> {
    let adj = dependency_graph(h);
    let sets: Vec<BitSet> = h.edges.iter().map(|e| BitSet::from_iter_len(h.n_vertices, e.iter().copied())).collect();
    let mut union_counts: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut km_counts: BTreeMap<(usize, usize, usize), u64> = BTreeMap::new();
    let mut f = |sub: &[usize]| {
        let mut u = BitSet::new(h.n_vertices);
        for &i in sub {
            u.union_with(&sets[i]);
        }
        let size = u.count();
        *union_counts.entry((sub.len(), size)).or_insert(0) += 1;
        if let Some(n) = h.pair_host {
            let mut verts = BitSet::new(n);
            for e in u.iter() {
                let (a, b) = index_pair(n, e);
                verts.insert(a);
                verts.insert(b);
            }
            *km_counts.entry((sub.len(), verts.count(), size)).or_insert(0) += 1;
        }
    };
    let mut seen = 0u64;
    let complete = {
        let mut g = |sub: &[usize]| {
            seen += 1;
            f(sub)
        };
        for_each_connected_set(&adj, s_max, budget, &mut g)
    };
    let mut by_size: BTreeMap<usize, F> = (1..=s_max).map(|s| (s, F::zero())).collect();
    for (&(s, size), &c) in &union_counts {
        let e = by_size.get_mut(&s).unwrap();
        *e = e.clone() + F::from_count(c) * p.powi(size);
    }
    let by_size_km = km_counts.iter().map(|(&key, &c)| (key, F::from_count(c) * p.powi(key.2))).collect();
    ClusterCensus { by_size, by_size_km, union_counts, complete, enumerated: seen }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let nxt = self.0[y];
            self.0[y] = r;
            y = nxt;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Whether `edges` (indices into `sets`) form one connected cluster, by
/// union-find over pairwise intersections.
pub fn is_cluster(sets: &[u64], edges: &[usize]) -> bool {
    if edges.is_empty() {
        return false;
    }
    let mut uf = UnionFind::new(edges.len());
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            if sets[edges[i]] & sets[edges[j]] != 0 {
                uf.union(i, j);
            }
        }
    }
    (0..edges.len()).all(|i| uf.find(i) == uf.find(0))
}

/// `a_m`: number of `m`-subsets of `[n]` that are the union of a single
/// cluster of `k`-APs.
pub fn ap_cluster_union_count(n: usize, k: usize, m: usize) -> Result<u64> {
    if n > 24 {
        return Err(Error::budget(format!("N={n} is beyond the exhaustive range")));
    }
    if m < k || m > n {
        return Ok(0);
    }
    let mut aps: Vec<u64> = Vec::new();
    for_each_ap(n, k, |a, b| aps.push((0..k).fold(0u64, |s, j| s | 1 << (a + j * b - 1))));
    let mut count = 0u64;
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        let set = idx.iter().fold(0u64, |s, &i| s | 1 << i);
        let inside: Vec<u64> = aps.iter().copied().filter(|&a| a & !set == 0).collect();
        let mut uf = UnionFind::new(inside.len());
        for i in 0..inside.len() {
            for j in i + 1..inside.len() {
                if inside[i] & inside[j] != 0 {
                    uf.union(i, j);
                }
            }
        }
        let mut unions: BTreeMap<usize, u64> = BTreeMap::new();
        for (i, &a) in inside.iter().enumerate() {
            *unions.entry(uf.find(i)).or_insert(0) |= a;
        }
        if unions.values().any(|&u| u == set) {
            count += 1;
        }
        // Next combination in lexicographic order.
        let mut i = m;
        loop {
            if i == 0 {
                return Ok(count);
            }
            i -= 1;
            if idx[i] < n - m + i {
                idx[i] += 1;
                for j in i + 1..m {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `N² (2kmN)^{(m-k)/(k-1)}`.
pub fn am_upper_bound(n: usize, k: usize, m: usize) -> f64 {
    let (nf, kf, mf) = (n as f64, k as f64, m as f64);
    nf * nf * (2.0 * kf * mf * nf).powf((mf - kf) / (kf - 1.0))
}

/// The induction condition `k³ m'² (2km'N)^{-1/(k-1)} ≤ 1/2` for all
/// `k < m' ≤ m`.
pub fn am_condition(n: usize, k: usize, m: usize) -> bool {
    let (nf, kf) = (n as f64, k as f64);
    (k + 1..=m).all(|mp| {
        let mf = mp as f64;
        kf.powi(3) * mf * mf * (2.0 * kf * mf * nf).powf(-1.0 / (kf - 1.0)) <= 0.5
    })
}
