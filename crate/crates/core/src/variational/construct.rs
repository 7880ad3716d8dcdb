//! Planted clique, hub and interval witnesses.

use num_traits::{One, ToPrimitive, Zero};

use super::witness::{Payload, Witness, WitnessKind};
use crate::ap::{conditional_expectation_ap, extremal_ap_count, ApModel, IntegerSet};
use crate::error::{Error, Result};
use crate::graph::{conditional_expectation_subgraph, Graph, SubgraphModel};
use crate::scalar::Scalar;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstructionKind {
    Clique,
    Hub,
    Interval,
}

fn check_delta(delta: &Rational) -> Result<()> {
    if *delta <= Rational::zero() {
        return Err(Error::Domain("δ must be positive".into()));
    }
    Ok(())
}

fn graph_witness(model: &SubgraphModel<Rational>, g: Graph, delta: &Rational) -> Result<Witness<Rational>> {
    let e = conditional_expectation_subgraph(model, &g)?;
    let target = (Rational::one() + delta.clone()) * model.mean();
    let cost = g.edge_count() as f64 * (1.0 / model.p.as_f64()).ln();
    Ok(Witness {
        kind: WitnessKind::Graph,
        fixed_ones: g.edge_count(),
        fixed_zeros: 0,
        payload: Payload::Graph(g),
        ones: 0,
        zeros: 0,
        log_cost: cost,
        feasible: e >= target,
        conditional_mean: e,
    })
}

/// Smallest `m` with `m ≥ (1+δ)^{1/v_H} n p^{Δ/2}`, decided exactly as
/// `m^{2v} ≥ (1+δ)² n^{2v} p^{Δv}`.
pub fn clique_size(model: &SubgraphModel<Rational>, delta: &Rational) -> usize {
    let v = model.pattern.n();
    let big_delta = model.pattern.max_degree();
    let rhs = (Rational::one() + delta.clone()).powi(2)
        * Rational::from_count(model.n as u64).powi(2 * v)
        * model.p.powi(big_delta * v);
    let guess = rhs.as_f64().powf(1.0 / (2 * v) as f64).floor().max(0.0) as usize;
    let mut m = guess.saturating_sub(2);
    while Rational::from_count(m as u64).powi(2 * v) < rhs {
        m += 1;
    }
    m
}

pub fn build_clique(model: &SubgraphModel<Rational>, delta: &Rational) -> Result<Witness<Rational>> {
    check_delta(delta)?;
    let m = clique_size(model, delta);
    if m > model.n {
        return Err(Error::Infeasible(format!("clique needs {m} vertices but n={}", model.n)));
    }
    let mut g = Graph::empty(model.n);
    for u in 0..m {
        for w in u + 1..m {
            g.add_edge(u, w);
        }
    }
    graph_witness(model, g, delta)
}

/// Hub for `H = K_r`: `U_2 = {0..a}` with `a = ⌊ℓ⌋`, `ℓ = δnp^{r-1}/r`,
/// joined to `U_3 = [n] \ (U_2 ∪ {u})`, plus a star from `u = a` to the
/// first `⌊{ℓ}^{1/(r-1)}|U_3|⌋` vertices of `U_3`.
pub fn build_hub(model: &SubgraphModel<Rational>, delta: &Rational) -> Result<Witness<Rational>> {
    check_delta(delta)?;
    let r = model.pattern.n();
    if model.pattern.edge_count() != r * (r - 1) / 2 || r < 3 {
        return Err(Error::Unsupported("hub construction is defined for cliques K_r, r ≥ 3".into()));
    }
    let n = model.n;
    let ell = delta.clone() * Rational::from_count(n as u64) * model.p.powi(r - 1) / Rational::from_count(r as u64);
    let a = ell.floor().to_integer().to_usize().unwrap_or(usize::MAX);
    if a + 1 > n {
        return Err(Error::Infeasible(format!("hub needs {} hub vertices but n={n}", a + 1)));
    }
    let frac = ell.clone() - ell.floor();
    let u3 = n - 1 - a;
    // Largest b with b^{r-1} ≤ {ℓ}·|U_3|^{r-1}.
    let cap = frac * Rational::from_count(u3 as u64).powi(r - 1);
    let mut b = (cap.as_f64().powf(1.0 / (r - 1) as f64).floor() as usize + 1).min(u3);
    while b > 0 && Rational::from_count(b as u64).powi(r - 1) > cap {
        b -= 1;
    }
    let mut g = Graph::empty(n);
    for x in 0..a {
        for y in a + 1..n {
            g.add_edge(x, y);
        }
    }
    for y in a + 1..a + 1 + b {
        g.add_edge(a, y);
    }
    graph_witness(model, g, delta)
}

/// Initial segment `[m]` with `m` minimal such that
/// `A_k([m]) ≥ δ p^k A_k([N]) / (1 - p^k)`.
pub fn build_interval(model: &ApModel<Rational>, delta: &Rational) -> Result<Witness<Rational>> {
    check_delta(delta)?;
    let pk = model.p.powi(model.k);
    let need = delta.clone() * pk.clone() * Rational::from_count(extremal_ap_count(model.n, model.k))
        / (Rational::one() - pk);
    let m = (0..=model.n)
        .find(|&m| Rational::from_count(extremal_ap_count(m, model.k)) >= need)
        .ok_or_else(|| Error::Infeasible(format!("no interval in [{}] carries enough progressions", model.n)))?;
    let set = IntegerSet::interval(model.n, m);
    let e = conditional_expectation_ap(model, &set)?;
    let target = (Rational::one() + delta.clone()) * model.mean();
    Ok(Witness {
        kind: WitnessKind::Subset,
        fixed_ones: m,
        fixed_zeros: 0,
        payload: Payload::Set(set),
        ones: if m < 128 { (1u128 << m) - 1 } else { 0 },
        zeros: 0,
        log_cost: m as f64 * (1.0 / model.p.as_f64()).ln(),
        feasible: e >= target,
        conditional_mean: e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;

    #[test]
    fn clique_example_size() {
        let m = SubgraphModel::new(Graph::complete(3), 100, parse_rational("0.3").unwrap()).unwrap();
        assert_eq!(clique_size(&m, &parse_rational("0.728").unwrap()), 36);
    }

    #[test]
    fn hub_pure_star_branch() {
        // ℓ = 1·10·(1/4)/3 = 5/6 < 1: no hub vertices, a star of ⌊√(5/6)·9⌋ = 8 edges.
        let m = SubgraphModel::new(Graph::complete(3), 10, Rational::new(1.into(), 2.into())).unwrap();
        let w = build_hub(&m, &Rational::one()).unwrap();
        match &w.payload {
            Payload::Graph(g) => {
                assert_eq!(g.edge_count(), 8);
                assert_eq!(g.degree(0), 8);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn interval_is_minimal() {
        let m = ApModel::new(100, 3, Rational::new(1.into(), 10.into())).unwrap();
        let w = build_interval(&m, &Rational::one()).unwrap();
        let pk = Rational::new(1.into(), 1000.into());
        let need = pk.clone() * Rational::from_count(extremal_ap_count(100, 3)) / (Rational::one() - pk);
        let size = w.fixed_ones;
        assert!(Rational::from_count(extremal_ap_count(size, 3)) >= need);
        assert!(Rational::from_count(extremal_ap_count(size - 1, 3)) < need);
    }

    #[test]
    fn infeasible_clique() {
        let m = SubgraphModel::new(Graph::complete(3), 5, Rational::new(9.into(), 10.into())).unwrap();
        assert!(matches!(build_clique(&m, &Rational::from_count(5)), Err(Error::Infeasible(_))));
    }
}
