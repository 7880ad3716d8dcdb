use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct JansonReport<F> {
    pub mu: F,
    pub delta: F,
    /// `Pr(Z ≤ (1-ε)μ)` by enumerating all `s`-subsets.
    pub exact_prob: F,
    /// `2 exp(-ε²μ²/(2(μ+Δ)))`.
    pub bound: f64,
    pub holds: bool,
}

#[derive(Serialize)]
pub struct JansonJson {
    pub mu: String,
    pub delta: String,
    pub exact_prob: String,
    pub bound: f64,
    pub holds: bool,
}

impl<F: Scalar> JansonReport<F> {
    pub fn to_json(&self) -> JansonJson {
        JansonJson {
            mu: self.mu.render(),
            delta: self.delta.render(),
            exact_prob: self.exact_prob.render(),
            bound: self.bound,
            holds: self.holds,
        }
    }
}

/// Lower-tail inequality for the number of family members inside a uniform
/// random `s`-subset of `{0, ..., t-1}`.
pub fn hypergeometric_janson_check<F: Scalar>(family: &[Vec<usize>], t: usize, s: usize, eps: &F) -> Result<JansonReport<F>> {
    if t > 24 {
        return Err(Error::budget(format!("C({t}, {s}) subsets is beyond the exhaustive range")));
    }
    if s > t {
        return Err(Error::Domain(format!("s={s} exceeds t={t}")));
    }
    if !(*eps > F::zero() && *eps <= F::one()) {
        return Err(Error::Domain(format!("ε = {} must lie in (0, 1]", eps.render())));
    }
    let masks: Vec<u32> = family
        .iter()
        .map(|b| {
            b.iter().try_fold(0u32, |m, &i| {
                if i < t {
                    Ok(m | 1 << i)
                } else {
                    Err(Error::Domain(format!("element {i} outside 0..{t}")))
                }
            })
        })
        .collect::<Result<_>>()?;
    let ratio = F::from_count(s as u64) / F::from_count(t.max(1) as u64);
    let mu = masks.iter().fold(F::zero(), |a, m| a + ratio.powi(m.count_ones() as usize));
    let mut delta = F::zero();
    for (i, a) in masks.iter().enumerate() {
        for (j, b) in masks.iter().enumerate() {
            if i != j && a & b != 0 {
                delta = delta + ratio.powi((a | b).count_ones() as usize);
            }
        }
    }
    let thr = (F::one() - eps.clone()) * mu.clone();
    let mut hits = 0u64;
    let mut total = 0u64;
    for sub in 0u32..(1u32 << t) {
        if sub.count_ones() as usize != s {
            continue;
        }
        total += 1;
        let z = masks.iter().filter(|&&m| m & !sub == 0).count() as u64;
        if F::from_count(z) <= thr {
            hits += 1;
        }
    }
    let exact_prob = F::from_count(hits) / F::from_count(total);
    let (m, d, e) = (mu.as_f64(), delta.as_f64(), eps.as_f64());
    let expo = if m == 0.0 { 0.0 } else { e * e * m * m / (2.0 * (m + d)) };
    let bound = 2.0 * (-expo).exp();
    let holds = exact_prob.as_f64() <= bound * (1.0 + 1e-12);
    Ok(JansonReport { mu, delta, exact_prob, bound, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn pairs_of_four() {
        let fam: Vec<Vec<usize>> = (0..4).flat_map(|a| (a + 1..4).map(move |b| vec![a, b])).collect();
        let rep = hypergeometric_janson_check(&fam, 4, 2, &Rational::new(1.into(), 2.into())).unwrap();
        // Every 2-subset contains exactly one pair: Z = 1 > (1-ε)μ = 3/4.
        assert_eq!(rep.mu, Rational::new(3.into(), 2.into()));
        assert_eq!(rep.exact_prob, Rational::from_count(0));
        assert!(rep.holds);
        let star: Vec<Vec<usize>> = (1..4).map(|b| vec![0, b]).collect();
        let rep = hypergeometric_janson_check(&star, 4, 2, &Rational::new(1.into(), 2.into())).unwrap();
        // Z = 1 iff 0 ∈ S, so Pr(Z ≤ 3/8) = 1/2.
        assert_eq!(rep.exact_prob, Rational::new(1.into(), 2.into()));
        assert!(rep.holds);
        let rep = hypergeometric_janson_check(&fam, 4, 2, &Rational::from_count(1)).unwrap();
        assert_eq!(rep.exact_prob, Rational::from_count(0));
    }

    #[test]
    fn empty_family() {
        let rep = hypergeometric_janson_check::<Rational>(&[], 5, 2, &Rational::new(1.into(), 3.into())).unwrap();
        assert_eq!(rep.mu, Rational::from_count(0));
        assert_eq!(rep.bound, 2.0);
        assert!(rep.holds);
    }
}
