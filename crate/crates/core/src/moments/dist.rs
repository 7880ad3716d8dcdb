use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cube::CubeModel;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest cube enumerated by default.
pub const MAX_EXACT_COORDS: usize = 22;

/// Exact law of an integer-valued count on the p-biased cube.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution<F> {
    pub pmf: BTreeMap<u64, F>,
    pub n_outcomes: u128,
}

impl<F: Scalar> Distribution<F> {
    pub fn total(&self) -> F {
        self.pmf.values().fold(F::zero(), |a, b| a + b.clone())
    }

    pub fn prob(&self, v: u64) -> F {
        self.pmf.get(&v).cloned().unwrap_or_else(F::zero)
    }

    /// `Pr(X ≥ threshold)`.
    pub fn tail_ge(&self, threshold: &F) -> F {
        self.pmf
            .iter()
            .filter(|(v, _)| F::from_count(**v) >= *threshold)
            .fold(F::zero(), |a, (_, p)| a + p.clone())
    }

    pub fn mean(&self) -> F {
        self.factorial_moment(1)
    }

    /// `M_t = E[(X)_t]`.
    pub fn factorial_moment(&self, t: usize) -> F {
        self.pmf
            .iter()
            .filter(|(&v, _)| v as usize >= t)
            .fold(F::zero(), |acc, (&v, p)| acc + crate::scalar::falling(&F::from_count(v), t) * p.clone())
    }

    pub fn max_value(&self) -> u64 {
        self.pmf.keys().next_back().copied().unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        let pmf: serde_json::Map<String, Value> =
            self.pmf.iter().map(|(v, p)| (v.to_string(), Value::String(p.render()))).collect();
        json!({ "n_outcomes": self.n_outcomes.to_string(), "pmf": pmf })
    }
}

/// Enumerates all `2^N` outcomes. Counts are histogrammed by
/// `(value, number of ones)` in integers and only then weighted, so the
/// result is exact and independent of how the work is split.
pub fn exact_distribution<F: Scalar>(cube: &CubeModel<F>) -> Result<Distribution<F>> {
    exact_distribution_with_limit(cube, MAX_EXACT_COORDS)
}

pub fn exact_distribution_with_limit<F: Scalar>(cube: &CubeModel<F>, limit: usize) -> Result<Distribution<F>> {
    let n = cube.n_coords();
    if n > limit || n > 40 {
        return Err(Error::budget(format!("2^{n} outcomes exceed the exact-enumeration limit 2^{limit}")));
    }
    let terms: Vec<(u64, u64)> = cube.terms.iter().map(|t| (t.pos as u64, t.neg as u64)).collect();
    let low = n.min(12);
    let chunks = 1u64 << (n - low);
    let hist = (0..chunks)
        .into_par_iter()
        .map(|hi| {
            let mut h: HashMap<(u64, u32), u64> = HashMap::new();
            for lo in 0..(1u64 << low) {
                let y = hi << low | lo;
                let v = terms.iter().filter(|&&(p, q)| p & !y == 0 && q & y == 0).count() as u64;
                *h.entry((v, y.count_ones())).or_insert(0) += 1;
            }
            h
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_insert(0) += c;
            }
            a
        });
    let p = cube.p.clone();
    let q = F::one() - p.clone();
    let ppow: Vec<F> = (0..=n).map(|i| p.powi(i)).collect();
    let qpow: Vec<F> = (0..=n).map(|i| q.powi(i)).collect();
    let mut pmf: BTreeMap<u64, F> = BTreeMap::new();
    let mut keys: Vec<_> = hist.into_iter().collect();
    keys.sort_unstable();
    for ((v, ones), c) in keys {
        let w = F::from_count(c) * ppow[ones as usize].clone() * qpow[n - ones as usize].clone();
        let e = pmf.entry(v).or_insert_with(F::zero);
        *e = e.clone() + w;
    }
    Ok(Distribution { pmf, n_outcomes: 1u128 << n })
}
