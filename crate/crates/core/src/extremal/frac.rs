//! Half-integral fractional independent sets via the bipartite double cover.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::graph::Graph;

/// A nonnegative half-integer, stored doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Half(pub u32);

impl Half {
    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for Half {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CoverPart {
    Edge(usize, usize),
    /// Vertices in cyclic order.
    Cycle(Vec<usize>),
}

impl CoverPart {
    pub fn vertices(&self) -> Vec<usize> {
        match self {
            CoverPart::Edge(u, v) => vec![*u, *v],
            CoverPart::Cycle(c) => c.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FracIndepResult {
    pub alpha_star: Half,
    pub assignment: Vec<Half>,
    pub v1: Vec<usize>,
    pub v2: Vec<usize>,
    pub cover: Vec<CoverPart>,
}

/// Maximum matching in the double cover: left copy `u`, right copy `v`,
/// joined when `uv` is an edge. Returns `mate_left[u] = Some(v)`.
fn double_cover_matching(j: &Graph) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    let n = j.n();
    let mut ml: Vec<Option<usize>> = vec![None; n];
    let mut mr: Vec<Option<usize>> = vec![None; n];
    fn augment(j: &Graph, u: usize, seen: &mut [bool], ml: &mut [Option<usize>], mr: &mut [Option<usize>]) -> bool {
        for v in j.neighbors(u).iter() {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if mr[v].is_none() || augment(j, mr[v].unwrap(), seen, ml, mr) {
                ml[u] = Some(v);
                mr[v] = Some(u);
                return true;
            }
        }
        false
    }
    for u in 0..n {
        let mut seen = vec![false; n];
        augment(j, u, &mut seen, &mut ml, &mut mr);
    }
    (ml, mr)
}

/// Computes a maximum fractional independent set with values in
/// `{0, 1/2, 1}` together with the partition `V1 ∪ V2` and a cover of `V1`
/// by vertex-disjoint edges and cycles of `j`.
pub fn fractional_independence(j: &Graph) -> FracIndepResult {
    let n = j.n();
    let (ml, mr) = double_cover_matching(j);

    // König: Z = vertices reachable from unmatched left vertices by
    // alternating paths; the independent set is (L ∩ Z) ∪ (R \ Z).
    let mut zl = vec![false; n];
    let mut zr = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&u| ml[u].is_none()).collect();
    for &u in &stack {
        zl[u] = true;
    }
    while let Some(u) = stack.pop() {
        for v in j.neighbors(u).iter() {
            if ml[u] == Some(v) || zr[v] {
                continue;
            }
            zr[v] = true;
            if let Some(w) = mr[v] {
                if !zl[w] {
                    zl[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    let assignment: Vec<Half> = (0..n).map(|v| Half(zl[v] as u32 + !zr[v] as u32)).collect();
    let alpha_star = Half(assignment.iter().map(|h| h.0).sum());

    // Project the matching; components have maximum degree two.
    let mut m = Graph::empty(n);
    for u in 0..n {
        if let Some(v) = ml[u] {
            m.add_edge(u, v);
        }
    }
    let mut v2 = Vec::new();
    let mut cover = Vec::new();
    for comp in m.components() {
        if comp.len() == 1 {
            v2.push(comp[0]);
            continue;
        }
        let ends: Vec<usize> = comp.iter().copied().filter(|&u| m.degree(u) == 1).collect();
        if ends.is_empty() {
            cover.push(CoverPart::Cycle(walk(&m, comp[0], comp.len())));
            continue;
        }
        let start = ends[0].min(ends[1]);
        let mut path = walk(&m, start, comp.len());
        if (path.len() - 1) % 2 == 0 {
            // Even length: drop the smaller endpoint.
            v2.push(start);
            path.remove(0);
        }
        for pair in path.chunks(2) {
            cover.push(CoverPart::Edge(pair[0].min(pair[1]), pair[0].max(pair[1])));
        }
    }
    v2.sort_unstable();
    let v1: Vec<usize> = (0..n).filter(|v| v2.binary_search(v).is_err()).collect();
    FracIndepResult { alpha_star, assignment, v1, v2, cover }
}

/// Walks a path or cycle of a max-degree-two graph from `start`.
fn walk(m: &Graph, start: usize, len: usize) -> Vec<usize> {
    let mut out = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while out.len() < len {
        let next = m.neighbors(cur).iter().filter(|&w| w != prev).min().unwrap();
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}
