use serde::Serialize;

use crate::cube::{popcount, CubeModel};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct StabilityReport<F> {
    pub ell: usize,
    /// `Pr(X ≥ (1+δ)E[X] and no member of 𝓘 fully present)`.
    pub lhs: F,
    /// `((1+δ-ε)/(1+δ))^ℓ`.
    pub rhs: F,
    /// `|𝓘|`.
    pub family_size: usize,
    pub holds: bool,
}

#[derive(Serialize)]
pub struct StabilityJson {
    pub ell: usize,
    pub lhs: String,
    pub rhs: String,
    pub family_size: usize,
    pub holds: bool,
}

impl<F: Scalar> StabilityReport<F> {
    pub fn to_json(&self) -> StabilityJson {
        StabilityJson {
            ell: self.ell,
            lhs: self.lhs.render(),
            rhs: self.rhs.render(),
            family_size: self.family_size,
            holds: self.holds,
        }
    }
}

/// Exact check of the moment-based covering inequality: with
/// `𝓘 = {I : |I| ≤ dℓ, E_I[X] ≥ (1+δ-ε)E[X]}`, the tail event minus the
/// union of the subcubes `{Y_I = 1}` has probability at most
/// `((1+δ-ε)/(1+δ))^ℓ`.
pub fn stability_check<F: Scalar>(cube: &CubeModel<F>, delta: &F, eps: &F, ell: usize) -> Result<StabilityReport<F>> {
    if !cube.is_monotone() {
        return Err(Error::Unsupported("the inequality needs nonnegative coefficients".into()));
    }
    let n = cube.n_coords();
    if n > 20 {
        return Err(Error::budget(format!("2^{n} subsets")));
    }
    if ell == 0 || *eps <= F::zero() || *delta <= F::zero() {
        return Err(Error::Domain("need ℓ ≥ 1 and ε, δ > 0".into()));
    }
    let d = cube.degree();
    let mean = cube.mean();
    let one = F::one();
    let fam_thr = (one.clone() + delta.clone() - eps.clone()) * mean.clone();
    let tail_thr = (one.clone() + delta.clone()) * mean;
    let size = 1usize << n;
    let mut covered = vec![false; size];
    let mut family_size = 0;
    for y in 0..size {
        if popcount(y as u128) <= d * ell && cube.conditional_mean(y as u128, 0) >= fam_thr {
            covered[y] = true;
            family_size += 1;
        }
    }
    // Superset closure: y is covered if some subset of it is in 𝓘.
    for bit in 0..n {
        for y in 0..size {
            if y >> bit & 1 == 1 && covered[y ^ (1 << bit)] {
                covered[y] = true;
            }
        }
    }
    let mut by_ones = vec![0u64; n + 1];
    for y in 0..size {
        if !covered[y] && F::from_count(cube.value(y as u128)) >= tail_thr {
            by_ones[popcount(y as u128)] += 1;
        }
    }
    let q = one.clone() - cube.p.clone();
    let lhs = by_ones.iter().enumerate().fold(F::zero(), |a, (k, &c)| {
        a + F::from_count(c) * cube.p.powi(k) * q.powi(n - k)
    });
    let rhs = ((one.clone() + delta.clone() - eps.clone()) / (one + delta.clone())).powi(ell);
    let holds = lhs <= rhs;
    Ok(StabilityReport { ell, lhs, rhs, family_size, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Graph, SubgraphModel};
    use crate::Rational;

    #[test]
    fn triangles_k4() {
        let r = |a: i64, b: i64| Rational::new(a.into(), b.into());
        let cube = CubeModel::from_subgraph(&SubgraphModel::new(Graph::complete(3), 4, r(1, 2)).unwrap()).unwrap();
        for ell in 1..=3 {
            let rep = stability_check(&cube, &r(1, 1), &r(1, 2), ell).unwrap();
            assert!(rep.holds, "ℓ={ell}: {:?}", rep);
        }
    }
}
