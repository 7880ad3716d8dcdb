//! The family of subgraphs of a regular graph that are either the whole
//! graph or bipartite with one side saturated at the maximum degree.

use super::frac::fractional_independence;
use crate::error::{Error, Result};
use crate::graph::{enumerate_embeddings, EmbedOptions, Graph};

const MAX_EDGES: usize = 22;

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return false;
    }
    let (mut da, mut db) = (a.degrees(), b.degrees());
    da.sort_unstable();
    db.sort_unstable();
    // Same size and edge count: any embedding is an isomorphism.
    da == db && enumerate_embeddings(a, b, &EmbedOptions::default()).copies > 0
}

/// Every component has a colour class whose vertices all have degree `delta`.
pub fn has_saturated_side(j: &Graph, delta: usize) -> bool {
    let Some(side) = j.bipartition() else { return false };
    j.components().iter().all(|comp| {
        [false, true]
            .iter()
            .any(|&s| comp.iter().filter(|&&v| side[v] == s).all(|&v| j.degree(v) == delta))
    })
}

/// Membership test for a subgraph `j` (without isolated vertices) of `h`.
pub fn in_q_family(h: &Graph, j: &Graph) -> bool {
    let delta = h.max_degree();
    j.edge_count() > 0 && j.isolated_vertices().is_empty() && (is_isomorphic(j, &h.without_isolated()) || has_saturated_side(j, delta))
}

fn check_host(h: &Graph) -> Result<usize> {
    let delta = h.regular_degree().filter(|&d| d > 0).ok_or_else(|| Error::Precondition("H must be regular with positive degree".into()))?;
    if !h.is_connected() {
        return Err(Error::Precondition("H must be connected".into()));
    }
    Ok(delta)
}

/// Calls `visit` with every nonempty subgraph of `h` without isolated
/// vertices (as an edge subset; the graph has the isolated vertices dropped).
pub fn for_each_subgraph(h: &Graph, mut visit: impl FnMut(&Graph)) -> Result<()> {
    let edges = h.edges();
    if edges.len() > MAX_EDGES {
        return Err(Error::budget(format!("H has {} edges; subgraph scan is capped at {MAX_EDGES}", edges.len())));
    }
    for mask in 1u32..(1u32 << edges.len()) {
        let chosen: Vec<(usize, usize)> = (0..edges.len()).filter(|i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
        let j = Graph::from_edges(h.n(), &chosen)?.without_isolated();
        visit(&j);
    }
    Ok(())
}

/// All members of the family up to isomorphism, largest first.
pub fn q_family(h: &Graph) -> Result<Vec<Graph>> {
    let delta = check_host(h)?;
    let mut out: Vec<Graph> = Vec::new();
    for_each_subgraph(h, |j| {
        let member = j.edge_count() == h.edge_count() || has_saturated_side(j, delta);
        if member && !out.iter().any(|k| is_isomorphic(k, j)) {
            out.push(j.clone());
        }
    })?;
    out.sort_by_key(|g| std::cmp::Reverse((g.edge_count(), g.n())));
    Ok(out)
}

/// Outcome of the edge-count versus fractional-independence inequalities
/// for one subgraph.
#[derive(Clone, Debug)]
pub struct AlphaInequality {
    pub e_j: usize,
    /// `2Δ(v_J − α*)`.
    pub middle_twice: usize,
    /// `2Δα*`.
    pub right_twice: usize,
    pub first_tight: bool,
    pub both_tight: bool,
}

pub fn alpha_inequality(j: &Graph, delta: usize) -> AlphaInequality {
    let a = fractional_independence(j).alpha_star.0 as usize;
    let middle_twice = delta * (2 * j.n() - a);
    let right_twice = delta * a;
    let e2 = 2 * j.edge_count();
    AlphaInequality {
        e_j: j.edge_count(),
        middle_twice,
        right_twice,
        first_tight: e2 == middle_twice,
        both_tight: e2 == middle_twice && middle_twice == right_twice,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let c4 = q_family(&Graph::cycle(4)).unwrap();
        assert_eq!(c4.len(), 2);
        assert!(is_isomorphic(&c4[0], &Graph::cycle(4)));
        assert!(is_isomorphic(&c4[1], &Graph::path(3)));

        let k4 = q_family(&Graph::complete(4)).unwrap();
        assert_eq!(k4.len(), 2);
        assert!(is_isomorphic(&k4[1], &Graph::star(3)));

        let k2 = q_family(&Graph::complete(2)).unwrap();
        assert_eq!(k2.len(), 1);
    }

    #[test]
    fn rejects_irregular_or_disconnected() {
        assert!(q_family(&Graph::path(3)).is_err());
        let two_triangles = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(q_family(&two_triangles).is_err());
    }

    #[test]
    fn inequality_on_petersen_like_hosts() {
        for h in [Graph::complete(5), Graph::cycle(6), Graph::complete_bipartite(3, 3)] {
            let delta = h.regular_degree().unwrap();
            for_each_subgraph(&h, |j| {
                let r = alpha_inequality(j, delta);
                assert!(2 * r.e_j <= r.middle_twice && r.middle_twice <= r.right_twice);
                if r.first_tight {
                    assert!(in_q_family(&h, j));
                }
                if r.both_tight {
                    assert!(is_isomorphic(j, &h));
                }
            })
            .unwrap();
        }
    }
}
