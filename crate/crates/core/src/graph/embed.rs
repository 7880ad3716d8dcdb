use std::collections::BTreeMap;

use serde::Serialize;

use super::Graph;
use crate::bitset::BitSet;

#[derive(Clone, Debug, Default)]
pub struct EmbedOptions {
    /// Only count embeddings whose image contains this edge of the host.
    pub restrict_edge: Option<(usize, usize)>,
    /// Fill `per_edge` even without a restriction.
    pub per_edge: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingCount {
    /// Number of injective homomorphisms.
    pub total: u64,
    /// Number of distinct copies (images up to automorphisms of the pattern).
    pub copies: u64,
    /// Host edge -> number of copies through it.
    pub per_edge: Option<BTreeMap<(usize, usize), u64>>,
}

/// Search order: greedily maximise the number of already placed neighbours.
fn search_order(j: &Graph, seeded: &[usize]) -> Vec<usize> {
    let n = j.n();
    let mut placed = vec![false; n];
    let mut order: Vec<usize> = seeded.to_vec();
    for &s in seeded {
        placed[s] = true;
    }
    while order.len() < n {
        let best = (0..n)
            .filter(|&w| !placed[w])
            .max_by_key(|&w| {
                let back = j.neighbors(w).iter().filter(|&x| placed[x]).count();
                (back, j.degree(w), std::cmp::Reverse(w))
            })
            .unwrap();
        placed[best] = true;
        order.push(best);
    }
    order
}

struct Search<'a, F: FnMut(&[usize])> {
    j: &'a Graph,
    g: &'a Graph,
    order: Vec<usize>,
    phi: Vec<usize>,
    used: BitSet,
    jdeg: Vec<usize>,
    gdeg: Vec<usize>,
    visit: F,
}

impl<F: FnMut(&[usize])> Search<'_, F> {
    fn run(&mut self, depth: usize) {
        if depth == self.order.len() {
            (self.visit)(&self.phi);
            return;
        }
        let w = self.order[depth];
        let mut cand: Option<BitSet> = None;
        for x in self.j.neighbors(w).iter() {
            if self.phi[x] != usize::MAX {
                let nb = self.g.neighbors(self.phi[x]);
                match cand.as_mut() {
                    None => cand = Some(nb.clone()),
                    Some(c) => c.intersect_with(nb),
                }
            }
        }
        let mut cand = cand.unwrap_or_else(|| BitSet::full(self.g.n()));
        cand.difference_with(&self.used);
        let need = self.jdeg[w];
        for v in cand.iter().collect::<Vec<_>>() {
            if self.gdeg[v] < need {
                continue;
            }
            self.phi[w] = v;
            self.used.insert(v);
            self.run(depth + 1);
            self.used.remove(v);
            self.phi[w] = usize::MAX;
        }
    }
}

/// Calls `visit` with every injective homomorphism `J -> G` (indexed by
/// pattern vertex) that extends the partial map `fixed`.
pub(crate) fn for_each_embedding(j: &Graph, g: &Graph, fixed: &[(usize, usize)], visit: impl FnMut(&[usize])) {
    if j.n() > g.n() {
        return;
    }
    let mut phi = vec![usize::MAX; j.n()];
    let mut used = BitSet::new(g.n());
    for &(a, u) in fixed {
        if used.contains(u) || phi[a] != usize::MAX {
            return;
        }
        phi[a] = u;
        used.insert(u);
    }
    for &(a, _) in fixed {
        for b in j.neighbors(a).iter() {
            if phi[b] != usize::MAX && !g.has_edge(phi[a], phi[b]) {
                return;
            }
        }
        if g.degree(phi[a]) < j.degree(a) {
            return;
        }
    }
    let seeded: Vec<usize> = fixed.iter().map(|&(a, _)| a).collect();
    let order = search_order(j, &seeded);
    let mut s = Search {
        j,
        g,
        order,
        phi,
        used,
        jdeg: j.degrees(),
        gdeg: g.degrees(),
        visit,
    };
    s.run(fixed.len());
}

/// All automorphisms of `j`, each as a vertex permutation.
pub fn automorphisms(j: &Graph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_embedding(j, j, &[], |phi| out.push(phi.to_vec()));
    out
}

pub(crate) fn is_canonical(phi: &[usize], auts: &[Vec<usize>]) -> bool {
    auts.iter().all(|a| {
        for x in 0..phi.len() {
            let other = phi[a[x]];
            if other != phi[x] {
                return phi[x] < other;
            }
        }
        true
    })
}

/// One embedding per copy of `j` in `g` (the lexicographically least).
pub fn list_copies(j: &Graph, g: &Graph) -> Vec<Vec<usize>> {
    let auts = automorphisms(j);
    let mut out = Vec::new();
    for_each_embedding(j, g, &[], |phi| {
        if is_canonical(phi, &auts) {
            out.push(phi.to_vec());
        }
    });
    out
}

/// Counts embeddings and copies of `j` in `g` by backtracking.
///
/// A copy is counted through its lexicographically least embedding, so
/// `copies` is computed independently of `total`.
pub fn enumerate_embeddings(j: &Graph, g: &Graph, opts: &EmbedOptions) -> EmbeddingCount {
    let auts = automorphisms(j);
    let want_edges = opts.per_edge || opts.restrict_edge.is_some();
    let mut total = 0u64;
    let mut copies = 0u64;
    let mut per_edge: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let jedges = j.edges();
    let mut visit = |phi: &[usize]| {
        total += 1;
        if is_canonical(phi, &auts) {
            copies += 1;
            if want_edges {
                for &(a, b) in &jedges {
                    let (x, y) = (phi[a].min(phi[b]), phi[a].max(phi[b]));
                    *per_edge.entry((x, y)).or_insert(0) += 1;
                }
            }
        }
    };
    match opts.restrict_edge {
        None => for_each_embedding(j, g, &[], &mut visit),
        Some((u, v)) => {
            if u < g.n() && v < g.n() && g.has_edge(u, v) {
                // An injective map sends at most one pattern edge onto uv.
                for &(a, b) in &jedges {
                    for_each_embedding(j, g, &[(a, u), (b, v)], &mut visit);
                    for_each_embedding(j, g, &[(a, v), (b, u)], &mut visit);
                }
            }
        }
    }
    EmbeddingCount { total, copies, per_edge: want_edges.then_some(per_edge) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(j: &Graph, g: &Graph) -> EmbeddingCount {
        enumerate_embeddings(j, g, &EmbedOptions::default())
    }

    #[test]
    fn small_counts() {
        let c = count(&Graph::complete(3), &Graph::complete(4));
        assert_eq!((c.total, c.copies), (24, 4));
        let c = count(&Graph::cycle(4), &Graph::complete(4));
        assert_eq!((c.total, c.copies), (24, 3));
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        let c = count(&Graph::complete(2), &g);
        assert_eq!(c.total, 2 * g.edge_count() as u64);
        assert_eq!(automorphisms(&Graph::star(3)).len(), 6);
        assert_eq!(automorphisms(&Graph::cycle(5)).len(), 10);
    }

    #[test]
    fn restricted_counts() {
        let g = Graph::complete(4);
        let opts = EmbedOptions { restrict_edge: Some((0, 1)), per_edge: false };
        let c = enumerate_embeddings(&Graph::complete(3), &g, &opts);
        // Two triangles contain 01, each with 6 embeddings.
        assert_eq!((c.total, c.copies), (12, 2));
        let opts = EmbedOptions { restrict_edge: Some((0, 1)), per_edge: false };
        let c = enumerate_embeddings(&Graph::complete(3), &Graph::path(3), &opts);
        assert_eq!(c.total, 0);
    }

    #[test]
    fn pattern_larger_than_host() {
        assert_eq!(count(&Graph::complete(5), &Graph::complete(4)).total, 0);
    }
}
