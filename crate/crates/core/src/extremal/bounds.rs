//! Upper bounds on embedding counts, each checked against brute force.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::frac::fractional_independence;
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{automorphisms, enumerate_embeddings, EmbedOptions, Graph};
use crate::scalar::ratio_to_f64;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Cycle,
    Jor,
    EdgeRegular,
    EdgeBipartite,
    BadEdges,
    Stars,
}

impl BoundKind {
    pub const ALL: [BoundKind; 6] = [
        BoundKind::Cycle,
        BoundKind::Jor,
        BoundKind::EdgeRegular,
        BoundKind::EdgeBipartite,
        BoundKind::BadEdges,
        BoundKind::Stars,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "cycle" => BoundKind::Cycle,
            "jor" => BoundKind::Jor,
            "edge_regular" | "edge-regular" => BoundKind::EdgeRegular,
            "edge_bipartite" | "edge-bipartite" => BoundKind::EdgeBipartite,
            "bad_edges" | "bad-edges" => BoundKind::BadEdges,
            "stars" => BoundKind::Stars,
            _ => return Err(Error::Domain(format!("unknown bound kind `{s}`"))),
        })
    }
}

/// Extra input some bound kinds need.
#[derive(Clone, Debug, Default)]
pub enum BoundExtra {
    #[default]
    None,
    /// A host edge `uv`.
    Edge(usize, usize),
    /// A subgraph `G' ⊆ G` on the same vertex set.
    Subgraph(Graph),
    /// Star parameters; `u` defaults to the side of vertex 0's colour class.
    Stars { q: Rational, s: usize, u: Option<Vec<usize>> },
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub bound: f64,
    /// Exact value when the bound is rational.
    pub bound_exact: Option<String>,
    pub actual: u64,
    pub holds: bool,
}

/// `coef · Π base_i^{exp_i}` with rational exponents.
struct PowerProduct {
    coef: Rational,
    factors: Vec<(Rational, Rational)>,
}

impl PowerProduct {
    fn new(coef: Rational) -> Self {
        PowerProduct { coef, factors: Vec::new() }
    }

    fn times(mut self, base: Rational, exp: Rational) -> Self {
        if !exp.is_zero() {
            self.factors.push((base, exp));
        }
        self
    }

    fn denom_lcm(&self) -> i64 {
        let mut l = 1i64;
        for (_, e) in &self.factors {
            let d = e.denom().to_i64().unwrap();
            l = num_integer::lcm(l, d);
        }
        l
    }

    fn has_zero_base(&self) -> bool {
        self.coef.is_zero() || self.factors.iter().any(|(b, _)| b.is_zero())
    }

    /// `self^D` for the common denominator `D` of the exponents.
    fn raised(&self, d: i64) -> Rational {
        let mut acc = pow_rat(&self.coef, d);
        for (b, e) in &self.factors {
            let k = (e * Rational::from_integer(d.into())).to_integer().to_i64().unwrap();
            acc *= pow_rat(b, k);
        }
        acc
    }

    fn exact(&self) -> Option<Rational> {
        (self.denom_lcm() == 1).then(|| self.raised(1))
    }

    fn value(&self) -> f64 {
        if self.has_zero_base() {
            return if self.factors.iter().any(|(b, e)| b.is_zero() && e.is_negative()) { f64::INFINITY } else { 0.0 };
        }
        let mut log = ratio_to_f64(&self.coef).ln();
        for (b, e) in &self.factors {
            log += ratio_to_f64(e) * ratio_to_f64(b).ln();
        }
        log.exp()
    }

    /// Decides `actual ≤ self` exactly by raising both sides to the power `D`.
    fn dominates(&self, actual: u64) -> bool {
        if self.has_zero_base() {
            return actual == 0 || self.value().is_infinite();
        }
        let d = self.denom_lcm();
        pow_rat(&Rational::from_integer(actual.into()), d) <= self.raised(d)
    }

    fn report(&self, kind: BoundKind, actual: u64) -> BoundReport {
        BoundReport {
            kind,
            bound: self.value(),
            bound_exact: self.exact().map(|q| crate::Scalar::render(&q)),
            actual,
            holds: self.dominates(actual),
        }
    }
}

fn pow_rat(b: &Rational, k: i64) -> Rational {
    if k >= 0 {
        num_traits::pow(b.clone(), k as usize)
    } else {
        num_traits::pow(b.recip(), (-k) as usize)
    }
}

/// `(d)_s` in integers.
pub fn falling_u64(d: u64, s: usize) -> u64 {
    (0..s as u64).map(|i| d.saturating_sub(i)).product()
}

fn int(x: u64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

fn ratio(a: i64, b: i64) -> Rational {
    BigRational::new(a.into(), b.into())
}

fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

fn is_cycle(j: &Graph) -> bool {
    j.n() >= 3 && j.regular_degree() == Some(2) && j.is_connected()
}

fn host_edge(g: &Graph, extra: &BoundExtra) -> Result<(usize, usize)> {
    match *extra {
        BoundExtra::Edge(u, v) if u < g.n() && v < g.n() && g.has_edge(u, v) => Ok((u, v)),
        BoundExtra::Edge(u, v) => Err(precondition(format!("uv = ({u},{v}) is not an edge of G"))),
        _ => Err(precondition("this bound needs a host edge uv")),
    }
}

fn emb_through(j: &Graph, g: &Graph, e: (usize, usize)) -> u64 {
    enumerate_embeddings(j, g, &EmbedOptions { restrict_edge: Some(e), per_edge: false }).total
}

/// Returns `(A, B)` with `|A| < |B|` and every vertex of `A` of degree `Δ`,
/// if `j` admits such a bipartition.
pub fn small_full_side(j: &Graph) -> Option<(Vec<usize>, Vec<usize>)> {
    if !j.is_connected() || j.edge_count() == 0 {
        return None;
    }
    let side = j.bipartition()?;
    let delta = j.max_degree();
    let a: Vec<usize> = (0..j.n()).filter(|&v| !side[v]).collect();
    let b: Vec<usize> = (0..j.n()).filter(|&v| side[v]).collect();
    for (a, b) in [(a.clone(), b.clone()), (b, a)] {
        if a.len() < b.len() && a.iter().all(|&v| j.degree(v) == delta) {
            return Some((a, b));
        }
    }
    None
}

/// Resolves the part `U` for the star bound and checks it is one side of a
/// bipartition of `g`.
pub fn star_side(g: &Graph, u: Option<&[usize]>) -> Result<BitSet> {
    let set = match u {
        Some(u) => {
            if u.iter().any(|&x| x >= g.n()) {
                return Err(precondition("U contains a vertex outside G"));
            }
            BitSet::from_iter_len(g.n(), u.iter().copied())
        }
        None => {
            let side = g.bipartition().ok_or_else(|| precondition("G is not bipartite"))?;
            BitSet::from_iter_len(g.n(), (0..g.n()).filter(|&v| !side[v]))
        }
    };
    for (a, b) in g.edges() {
        if set.contains(a) == set.contains(b) {
            return Err(precondition(format!("edge ({a},{b}) does not cross the parts (U,V)")));
        }
    }
    Ok(set)
}

/// Evaluates the bound of the given kind and the brute-force count it bounds.
pub fn embedding_bound(kind: BoundKind, j: &Graph, g: &Graph, extra: &BoundExtra) -> Result<BoundReport> {
    let e_g = g.edge_count() as u64;
    let two_e = int(2 * e_g);
    let n_g = g.n() as u64;
    match kind {
        BoundKind::Cycle => {
            if !is_cycle(j) {
                return Err(precondition("J must be a cycle C_l with l >= 3"));
            }
            let actual = enumerate_embeddings(j, g, &EmbedOptions::default()).total;
            Ok(PowerProduct::new(Rational::one()).times(two_e, ratio(j.n() as i64, 2)).report(kind, actual))
        }
        BoundKind::Jor => {
            if j.edge_count() == 0 || !j.isolated_vertices().is_empty() {
                return Err(precondition("J must be nonempty without isolated vertices"));
            }
            let a = fractional_independence(j).alpha_star.0 as i64;
            let v = j.n() as i64;
            let actual = enumerate_embeddings(j, g, &EmbedOptions::default()).total;
            let m = int((2 * e_g).min(n_g));
            Ok(PowerProduct::new(Rational::one())
                .times(two_e, ratio(2 * v - a, 2))
                .times(m, Rational::from_integer((a - v).into()))
                .report(kind, actual))
        }
        BoundKind::EdgeRegular => {
            let delta = j.regular_degree().filter(|&d| d > 0).ok_or_else(|| precondition("H must be regular with positive degree"))?;
            let (u, v) = host_edge(g, extra)?;
            let actual = emb_through(j, g, (u, v));
            let d = delta as i64;
            let deg = int(4 * (g.degree(u) * g.degree(v)) as u64);
            Ok(PowerProduct::new(int(4 * j.edge_count() as u64))
                .times(two_e, ratio(j.n() as i64, 2) - ratio(2 * d - 1, d))
                .times(deg, ratio(d - 1, d))
                .report(kind, actual))
        }
        BoundKind::EdgeBipartite => {
            let (a, b) = small_full_side(j).ok_or_else(|| {
                precondition("J must be connected with a bipartition A ∪ B, |A| < |B|, deg a = Δ on A")
            })?;
            let (u, v) = host_edge(g, extra)?;
            let actual = emb_through(j, g, (u, v));
            let coef = int(j.edge_count() as u64 * (g.degree(u) + g.degree(v)) as u64);
            Ok(PowerProduct::new(coef)
                .times(two_e, Rational::from_integer((a.len() as i64 - 1).into()))
                .times(int(e_g.min(n_g)), Rational::from_integer((b.len() as i64 - a.len() as i64 - 1).into()))
                .report(kind, actual))
        }
        BoundKind::BadEdges => {
            let delta = j.regular_degree().filter(|&d| d > 0).ok_or_else(|| precondition("H must be regular with positive degree"))?;
            let sub = match extra {
                BoundExtra::Subgraph(s) if s.is_subgraph_of(g) => s,
                BoundExtra::Subgraph(_) => return Err(precondition("G' must be a subgraph of G on the same vertex set")),
                _ => return Err(precondition("this bound needs a subgraph G'")),
            };
            let per_edge = enumerate_embeddings(j, g, &EmbedOptions { restrict_edge: None, per_edge: true })
                .per_edge
                .unwrap_or_default();
            let aut = automorphisms(j).len() as u64;
            let actual: u64 = sub.edges().iter().map(|e| per_edge.get(e).copied().unwrap_or(0) * aut).sum();
            if e_g == 0 {
                return Ok(BoundReport { kind, bound: 0.0, bound_exact: Some("0".into()), actual, holds: actual == 0 });
            }
            Ok(PowerProduct::new(int(j.edge_count() as u64))
                .times(two_e, ratio(j.n() as i64, 2))
                .times(BigRational::new((sub.edge_count() as i64).into(), (e_g as i64).into()), ratio(1, delta as i64))
                .report(kind, actual))
        }
        BoundKind::Stars => {
            let (q, s, u) = match extra {
                BoundExtra::Stars { q, s, u } => (q, *s, u.as_deref()),
                _ => return Err(precondition("this bound needs (q, s)")),
            };
            if s < 2 {
                return Err(precondition("s must be at least 2"));
            }
            let uset = star_side(g, u)?;
            let nv = (g.n() - uset.count()) as u64;
            if !q.is_positive() || *q > int(uset.count() as u64) {
                return Err(precondition("q must lie in (0, |U|]"));
            }
            if int(e_g) > q * int(nv) {
                return Err(precondition("e_G must be at most q|V|"));
            }
            let actual: u64 = uset.iter().map(|x| falling_u64(g.degree(x) as u64, s)).sum();
            let fl = q.floor();
            let frac = q - &fl;
            let coef = fl + pow_rat(&frac, s as i64);
            Ok(PowerProduct::new(coef)
                .times(int(nv), Rational::from_integer((s as i64).into()))
                .report(kind, actual))
        }
    }
}
