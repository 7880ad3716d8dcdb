use serde::Serialize;

use super::dist::{exact_distribution, Distribution};
use crate::cube::{popcount, CubeModel, Mask};
use crate::error::{Error, Result};
use crate::scalar::{falling, Scalar};

/// Work cap for the ordered-tuple sum.
pub const TUPLE_BUDGET: f64 = 5e7;

#[derive(Clone, Debug)]
pub struct FactorialMoments<F> {
    /// `M_0..=M_{t_max}` from the exact distribution, when it was enumerable.
    pub from_dist: Option<Vec<F>>,
    /// `M_0..=M_{t_max}` as sums over ordered tuples of distinct terms.
    pub from_tuples: Option<Vec<F>>,
}

impl<F: Scalar> FactorialMoments<F> {
    pub fn best(&self) -> &[F] {
        self.from_dist.as_deref().or(self.from_tuples.as_deref()).unwrap_or(&[])
    }
}

/// `Σ` over ordered `t`-tuples of distinct terms of `Pr(all present)`.
pub fn tuple_moment<F: Scalar>(cube: &CubeModel<F>, t: usize) -> Result<F> {
    let nt = cube.terms.len() as f64;
    if nt.powi(t as i32) > TUPLE_BUDGET {
        return Err(Error::budget(format!("{} ordered {t}-tuples", nt.powi(t as i32))));
    }
    let n = cube.n_coords();
    let mut hist = vec![0u64; (n + 1) * (n + 1)];
    fn rec(terms: &[crate::cube::Term], used: &mut Vec<bool>, left: usize, pos: Mask, neg: Mask, n: usize, hist: &mut [u64]) {
        if pos & neg != 0 {
            return;
        }
        if left == 0 {
            hist[popcount(pos) * (n + 1) + popcount(neg)] += 1;
            return;
        }
        for i in 0..terms.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            rec(terms, used, left - 1, pos | terms[i].pos, neg | terms[i].neg, n, hist);
            used[i] = false;
        }
    }
    let mut used = vec![false; cube.terms.len()];
    rec(&cube.terms, &mut used, t, 0, 0, n, &mut hist);
    let q = F::one() - cube.p.clone();
    let mut acc = F::zero();
    for (idx, &c) in hist.iter().enumerate() {
        if c > 0 {
            let (a, b) = (idx / (n + 1), idx % (n + 1));
            acc = acc + F::from_count(c) * cube.p.powi(a) * q.powi(b);
        }
    }
    Ok(acc)
}

/// Factorial moments computed both from the distribution and by tuple sums,
/// whichever is within budget.
pub fn factorial_moments<F: Scalar>(cube: &CubeModel<F>, t_max: usize) -> Result<FactorialMoments<F>> {
    let from_dist = exact_distribution(cube)
        .ok()
        .map(|d| (0..=t_max).map(|t| d.factorial_moment(t)).collect::<Vec<_>>());
    let from_tuples = (0..=t_max).map(|t| tuple_moment(cube, t)).collect::<Result<Vec<_>>>().ok();
    if from_dist.is_none() && from_tuples.is_none() {
        return Err(Error::budget("neither the distribution nor the tuple sums are enumerable"));
    }
    Ok(FactorialMoments { from_dist, from_tuples })
}

#[derive(Clone, Debug, Serialize)]
pub struct MarkovBound {
    pub t: usize,
    /// `log ((1+δ)μ)_t - log M_t`.
    pub bound: f64,
    /// `M_t` rendered exactly where possible.
    pub moment: String,
}

/// Lower bound on `-log Pr(X ≥ (1+δ)μ)` from the `t`-th factorial moment.
pub fn poisson_markov_bound<F: Scalar>(cube: &CubeModel<F>, delta: &F, t: usize) -> Result<MarkovBound> {
    let mu = cube.mean();
    let x = (F::one() + delta.clone()) * mu;
    if t == 0 || F::from_count(t as u64) > x {
        return Err(Error::Domain(format!("need 1 ≤ t ≤ (1+δ)μ = {}, got t={t}", x.as_f64())));
    }
    let mt = match exact_distribution(cube) {
        Ok(d) => d.factorial_moment(t),
        Err(_) => tuple_moment(cube, t)?,
    };
    Ok(markov_from_moment(&x, t, &mt))
}

pub(crate) fn markov_from_moment<F: Scalar>(x: &F, t: usize, mt: &F) -> MarkovBound {
    let ff = falling(x, t);
    MarkovBound { t, bound: ff.ln() - mt.ln(), moment: mt.render() }
}

#[derive(Clone, Debug, Serialize)]
pub struct MarkovCheck {
    pub delta: String,
    pub t: usize,
    pub bound: f64,
    pub neg_log_tail: f64,
    /// `Pr(X ≥ (1+δ)μ) · ((1+δ)μ)_t ≤ M_t`, decided in the model's scalar.
    pub holds: bool,
}

/// Checks the factorial-moment Markov bound for every valid `t` against
/// the exact tail.
pub fn check_markov<F: Scalar>(dist: &Distribution<F>, mu: &F, delta: &F) -> Vec<MarkovCheck> {
    let x = (F::one() + delta.clone()) * mu.clone();
    let tail = dist.tail_ge(&x);
    let mut out = Vec::new();
    let mut t = 1;
    while F::from_count(t as u64) <= x {
        let mt = dist.factorial_moment(t);
        let b = markov_from_moment(&x, t, &mt);
        out.push(MarkovCheck {
            delta: delta.render(),
            t,
            bound: b.bound,
            neg_log_tail: -tail.ln(),
            holds: tail.clone() * falling(&x, t) <= mt,
        });
        t += 1;
    }
    out
}

/// `log (x+t)_t = I(t/x) x + t log x + λ` with `I(z) = (1+z)log(1+z) - z`.
/// Returns `(I(t/x) x + t log x, λ)`.
pub fn falling_factorial_log(x: f64, t: u64) -> Result<(f64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x = {x} must be positive")));
    }
    if t == 0 {
        return Ok((0.0, 0.0));
    }
    let tf = t as f64;
    let ix = (x + tf) * (tf / x).ln_1p() - tf;
    let main = ix + tf * x.ln();
    // log (x+t)_t - t log x = Σ_{i=1}^t log(1 + i/x), summed small-first.
    let mut s = 0.0;
    let mut comp = 0.0;
    for i in 1..=t {
        let y = (i as f64 / x).ln_1p() - comp;
        let nxt = s + y;
        comp = (nxt - s) - y;
        s = nxt;
    }
    Ok((main, s - ix))
}
