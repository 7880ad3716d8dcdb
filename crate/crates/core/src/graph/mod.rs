//! Labelled simple graphs on `0..n`, embedding enumeration and exact
//! conditional expectations for subgraph-count models.

mod embed;
mod expect;
mod graph6;

pub use embed::{automorphisms, enumerate_embeddings, list_copies, EmbedOptions, EmbeddingCount};
pub use expect::{
    conditional_expectation_subgraph, conditional_expectation_subgraph_direct, copies_in_complete, edge_gain,
    InducedModel, SubgraphModel,
};
pub use graph6::{parse_graph6, to_graph6};

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Graph {
    n: usize,
    adj: Vec<BitSet>,
    m: usize,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Graph", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("edges", &self.edges())?;
        st.end()
    }
}

/// Adjacency-list JSON form: `{"n": 3, "adj": [[1,2],[0,2],[0,1]]}`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyJson {
    pub n: usize,
    pub adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, adj: vec![BitSet::new(n); n], m: 0 }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least 3 vertices");
        let mut g = Self::empty(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    /// Path with `n` vertices.
    pub fn path(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 1..n {
            g.add_edge(i - 1, i);
        }
        g
    }

    /// `K_{1,s}` with centre 0.
    pub fn star(s: usize) -> Self {
        let mut g = Self::empty(s + 1);
        for i in 1..=s {
            g.add_edge(0, i);
        }
        g
    }

    /// `K_{a,b}` with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Self::empty(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Domain(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::Domain(format!("loop at vertex {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    /// Adds `uv`; returns false if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u != v && u < self.n && v < self.n, "bad edge ({u},{v})");
        if self.adj[u].contains(v) {
            return false;
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        self.m += 1;
        true
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if !self.has_edge(u, v) {
            return false;
        }
        self.adj[u].remove(v);
        self.adj[v].remove(u);
        self.m -= 1;
        true
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &BitSet {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).min().unwrap_or(0)
    }

    /// Common degree if every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degrees();
        match d.first() {
            Some(&d0) if d.iter().all(|&x| x == d0) => Some(d0),
            Some(_) => None,
            None => Some(0),
        }
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for v in self.adj[u].iter() {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && (0..self.n).all(|u| self.adj[u].is_subset(&other.adj[u]))
    }

    /// Subgraph induced on `vertices`, relabelled in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::empty(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&u| self.adj[u].is_empty()).collect()
    }

    /// Drops isolated vertices, keeping the relative order of the rest.
    pub fn without_isolated(&self) -> Graph {
        let keep: Vec<usize> = (0..self.n).filter(|&u| !self.adj[u].is_empty()).collect();
        self.induced(&keep)
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for v in self.adj[u].iter() {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Proper 2-colouring with the smallest vertex of each component on side
    /// `false`, or `None` if the graph has an odd cycle.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut side: Vec<Option<bool>> = vec![None; self.n];
        for s in 0..self.n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let su = side[u].unwrap();
                for v in self.adj[u].iter() {
                    match side[v] {
                        None => {
                            side[v] = Some(!su);
                            stack.push(v);
                        }
                        Some(sv) if sv == su => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap()).collect())
    }

    /// Number of edges with one endpoint in `a` and the other outside it.
    pub fn cut_size(&self, a: &BitSet) -> usize {
        a.iter()
            .map(|u| self.adj[u].count() - self.adj[u].intersection_count(a))
            .sum()
    }

    /// Degrees inside the induced subgraph on `a`, for members of `a`.
    pub fn degree_within(&self, u: usize, a: &BitSet) -> usize {
        self.adj[u].intersection_count(a)
    }

    pub fn to_adjacency_json(&self) -> AdjacencyJson {
        AdjacencyJson { n: self.n, adj: (0..self.n).map(|u| self.adj[u].iter().collect()).collect() }
    }

    pub fn from_adjacency_json(j: &AdjacencyJson) -> Result<Self> {
        let mut g = Graph::empty(j.n);
        if j.adj.len() != j.n {
            return Err(Error::Domain(format!("adjacency list has {} rows for n={}", j.adj.len(), j.n)));
        }
        for (u, row) in j.adj.iter().enumerate() {
            for &v in row {
                if v >= j.n || v == u {
                    return Err(Error::Domain(format!("bad neighbour {v} of vertex {u}")));
                }
                g.add_edge(u, v);
            }
        }
        for (u, row) in j.adj.iter().enumerate() {
            if g.degree(u) != row.iter().collect::<std::collections::BTreeSet<_>>().len() {
                return Err(Error::Domain(format!("adjacency list is not symmetric at vertex {u}")));
            }
        }
        Ok(g)
    }
}

/// Index of the pair `{u, v}` among the `n(n-1)/2` pairs of `K_n` in
/// lexicographic order `(0,1), (0,2), ..., (n-2,n-1)`.
pub fn pair_index(n: usize, u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

/// Inverse of [`pair_index`].
pub fn index_pair(n: usize, idx: usize) -> (usize, usize) {
    let mut a = 0;
    let mut rem = idx;
    while rem >= n - a - 1 {
        rem -= n - a - 1;
        a += 1;
    }
    (a, a + 1 + rem)
}
