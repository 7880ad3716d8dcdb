//! Counts written as sums of monomials on the p-biased cube `{0,1}^N`.
//!
//! Every model here is `X(y) = #{terms t : y ⊇ pos(t), y ∩ neg(t) = ∅}`, which
//! covers subgraph counts, induced counts and progression counts with
//! `N ≤ 128` coordinates.

use serde_json::{json, Value};

use crate::ap::{for_each_ap, ApModel, IntegerSet};
use crate::error::{Error, Result};
use crate::graph::{index_pair, list_copies, pair_index, Graph, InducedModel, SubgraphModel};
use crate::scalar::{check_probability, Scalar};

pub type Mask = u128;

pub const MAX_COORDS: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub pos: Mask,
    pub neg: Mask,
}

/// What the coordinates stand for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coords {
    /// Pairs of `K_n` in lexicographic order.
    Pairs { n: usize },
    /// Elements `1..=n` of `[n]`.
    Integers { n: usize },
}

impl Coords {
    pub fn len(&self) -> usize {
        match *self {
            Coords::Pairs { n } => n * n.saturating_sub(1) / 2,
            Coords::Integers { n } => n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug)]
pub struct CubeModel<F> {
    pub coords: Coords,
    pub p: F,
    pub terms: Vec<Term>,
    monotone: bool,
    degree: usize,
}

pub fn popcount(m: Mask) -> usize {
    m.count_ones() as usize
}

pub fn full_mask(n: usize) -> Mask {
    if n >= 128 {
        Mask::MAX
    } else {
        (1u128 << n) - 1
    }
}

pub fn mask_bits(m: Mask) -> impl Iterator<Item = usize> {
    let mut w = m;
    std::iter::from_fn(move || {
        if w == 0 {
            None
        } else {
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(b)
        }
    })
}

impl<F: Scalar> CubeModel<F> {
    pub fn new(coords: Coords, p: F, terms: Vec<Term>) -> Result<Self> {
        check_probability(&p)?;
        if coords.len() > MAX_COORDS {
            return Err(Error::budget(format!("{} coordinates exceed the {MAX_COORDS}-bit cube", coords.len())));
        }
        let monotone = terms.iter().all(|t| t.neg == 0);
        let degree = terms.iter().map(|t| popcount(t.pos) + popcount(t.neg)).max().unwrap_or(0);
        Ok(CubeModel { coords, p, terms, monotone, degree })
    }

    fn pairs_ok(n: usize) -> Result<()> {
        if n * n.saturating_sub(1) / 2 > MAX_COORDS {
            return Err(Error::budget(format!("K_{n} has more than {MAX_COORDS} pairs")));
        }
        Ok(())
    }

    pub fn from_subgraph(model: &SubgraphModel<F>) -> Result<Self> {
        Self::pairs_ok(model.n)?;
        let n = model.n;
        let h = &model.pattern;
        let he = h.edges();
        let terms = list_copies(h, &Graph::complete(n))
            .into_iter()
            .map(|phi| {
                let pos = he.iter().fold(0, |m, &(a, b)| m | 1u128 << pair_index(n, phi[a], phi[b]));
                Term { pos, neg: 0 }
            })
            .collect();
        Self::new(Coords::Pairs { n }, model.p.clone(), terms)
    }

    pub fn from_induced(model: &InducedModel<F>) -> Result<Self> {
        Self::pairs_ok(model.n)?;
        let n = model.n;
        let h = &model.pattern;
        let v = h.n();
        let terms = list_copies(h, &Graph::complete(n))
            .into_iter()
            .map(|phi| {
                let mut t = Term { pos: 0, neg: 0 };
                for a in 0..v {
                    for b in a + 1..v {
                        let bit = 1u128 << pair_index(n, phi[a], phi[b]);
                        if h.has_edge(a, b) {
                            t.pos |= bit;
                        } else {
                            t.neg |= bit;
                        }
                    }
                }
                t
            })
            .collect();
        Self::new(Coords::Pairs { n }, model.p.clone(), terms)
    }

    pub fn from_ap(model: &ApModel<F>) -> Result<Self> {
        if model.n > MAX_COORDS {
            return Err(Error::budget(format!("N={} exceeds {MAX_COORDS}", model.n)));
        }
        let mut terms = Vec::new();
        for_each_ap(model.n, model.k, |a, b| {
            let pos = (0..model.k).fold(0u128, |m, j| m | 1u128 << (a + j * b - 1));
            terms.push(Term { pos, neg: 0 });
        });
        Self::new(Coords::Integers { n: model.n }, model.p.clone(), terms)
    }

    pub fn n_coords(&self) -> usize {
        self.coords.len()
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    /// Largest monomial size (the polynomial degree).
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn full(&self) -> Mask {
        full_mask(self.n_coords())
    }

    pub fn value(&self, y: Mask) -> u64 {
        self.terms.iter().filter(|t| t.pos & !y == 0 && t.neg & y == 0).count() as u64
    }

    /// Maximum of `X` over the cube.
    pub fn max_value(&self) -> Result<u64> {
        if self.monotone {
            return Ok(self.value(self.full()));
        }
        if self.n_coords() > 24 {
            return Err(Error::budget("maximum of a non-monotone count needs 2^N evaluations"));
        }
        Ok((0..1u128 << self.n_coords()).map(|y| self.value(y)).max().unwrap_or(0))
    }

    pub fn mean(&self) -> F {
        self.conditional_mean(0, 0)
    }

    /// `E[X | y_i = 1 for i ∈ ones, y_i = 0 for i ∈ zeros]`.
    pub fn conditional_mean(&self, ones: Mask, zeros: Mask) -> F {
        let d = self.degree;
        let mut hist = vec![0u64; (d + 1) * (d + 1)];
        for t in &self.terms {
            if t.pos & zeros != 0 || t.neg & ones != 0 {
                continue;
            }
            let a = popcount(t.pos & !ones);
            let b = popcount(t.neg & !zeros);
            hist[a * (d + 1) + b] += 1;
        }
        let q = F::one() - self.p.clone();
        let mut acc = F::zero();
        for (idx, &c) in hist.iter().enumerate() {
            if c > 0 {
                let (a, b) = (idx / (d + 1), idx % (d + 1));
                acc = acc + F::from_count(c) * self.p.powi(a) * q.powi(b);
            }
        }
        acc
    }

    /// `-log Pr(y_ones = 1, y_zeros = 0)`.
    pub fn log_cost(&self, ones: Mask, zeros: Mask) -> f64 {
        let p = self.p.as_f64();
        popcount(ones) as f64 * (1.0 / p).ln() + popcount(zeros) as f64 * (1.0 / (1.0 - p)).ln()
    }

    pub fn label(&self, i: usize) -> Value {
        match self.coords {
            Coords::Pairs { n } => {
                let (u, v) = index_pair(n, i);
                json!([u, v])
            }
            Coords::Integers { .. } => json!(i + 1),
        }
    }

    /// JSON payload for a set of coordinates: a graph or an integer list.
    pub fn payload(&self, ones: Mask) -> Value {
        match self.coords {
            Coords::Pairs { n } => {
                let edges: Vec<Value> = mask_bits(ones).map(|i| self.label(i)).collect();
                json!({ "n": n, "edges": edges })
            }
            Coords::Integers { .. } => json!(mask_bits(ones).map(|i| i + 1).collect::<Vec<_>>()),
        }
    }

    pub fn mask_to_graph(&self, ones: Mask) -> Option<Graph> {
        match self.coords {
            Coords::Pairs { n } => {
                let mut g = Graph::empty(n);
                for i in mask_bits(ones) {
                    let (u, v) = index_pair(n, i);
                    g.add_edge(u, v);
                }
                Some(g)
            }
            Coords::Integers { .. } => None,
        }
    }

    pub fn graph_to_mask(&self, g: &Graph) -> Result<Mask> {
        match self.coords {
            Coords::Pairs { n } if g.n() == n => {
                Ok(g.edges().into_iter().fold(0, |m, (u, v)| m | 1u128 << pair_index(n, u, v)))
            }
            _ => Err(Error::Domain("graph does not match the model's coordinates".into())),
        }
    }

    pub fn set_to_mask(&self, s: &IntegerSet) -> Result<Mask> {
        match self.coords {
            Coords::Integers { n } if s.universe() == n => Ok(s.members().iter().fold(0, |m, &i| m | 1u128 << (i - 1))),
            _ => Err(Error::Domain("set does not match the model's coordinates".into())),
        }
    }

    pub fn mask_to_set(&self, ones: Mask) -> Option<IntegerSet> {
        match self.coords {
            Coords::Integers { n } => Some(IntegerSet::from_mask(n, ones)),
            Coords::Pairs { .. } => None,
        }
    }

    /// Same terms, different scalar.
    pub fn map_scalar<G: Scalar>(&self, p: G) -> Result<CubeModel<G>> {
        CubeModel::new(self.coords, p, self.terms.clone())
    }
}
