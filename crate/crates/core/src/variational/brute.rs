use serde_json::json;

use super::witness::{Witness, WitnessKind};
use crate::cube::{CubeModel, Mask};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn subset_kind<F: Scalar>(cube: &CubeModel<F>) -> WitnessKind {
    if cube.mask_to_graph(0).is_some() {
        WitnessKind::Graph
    } else {
        WitnessKind::Subset
    }
}

/// Advances `idx` to the next `m`-combination of `0..n` in lexicographic
/// order; false when exhausted.
pub fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let m = idx.len();
    let mut i = m;
    while i > 0 {
        i -= 1;
        if idx[i] < n - m + i {
            idx[i] += 1;
            for j in i + 1..m {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `Φ_X(δ) = min{|I| log(1/p) : E_I[X] ≥ (1+δ)E[X]}` by scanning subsets in
/// order of size, then lexicographically. The first feasible set is optimal.
pub fn phi_bruteforce<F: Scalar>(cube: &CubeModel<F>, delta: &F, budget: u64) -> Result<Witness<F>> {
    let kind = subset_kind(cube);
    let target = (F::one() + delta.clone()) * cube.mean();
    let n = cube.n_coords();
    if cube.is_monotone() {
        let top = cube.conditional_mean(cube.full(), 0);
        if top < target {
            return Ok(Witness::infeasible(kind, top));
        }
    }
    let mut evaluated = 0u64;
    for m in 0..=n {
        let mut idx: Vec<usize> = (0..m).collect();
        loop {
            evaluated += 1;
            if evaluated > budget {
                return Err(Error::Budget {
                    msg: format!("{budget} subsets evaluated without reaching a feasible set"),
                    partial: Some(json!({ "sizes_completed": m as i64 - 1, "evaluated": evaluated - 1 })),
                });
            }
            let mask: Mask = idx.iter().fold(0, |a, &i| a | 1u128 << i);
            let e = cube.conditional_mean(mask, 0);
            if e >= target {
                return Ok(Witness::from_cube(cube, kind, mask, 0, e, true));
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    Ok(Witness::infeasible(kind, cube.mean()))
}

struct SubcubeSearch<'a, F> {
    cube: &'a CubeModel<F>,
    target: F,
    l1: f64,
    l0: f64,
    best: Option<(f64, usize, usize, Mask, Mask, F)>,
    evaluated: u64,
}

impl<F: Scalar> SubcubeSearch<'_, F> {
    fn better(&self, cost: f64, ones: Mask, zeros: Mask) -> bool {
        match &self.best {
            None => true,
            Some((bc, bf, bz, bo, bzm, _)) => {
                let slack = 1e-12 * bc.abs().max(1.0);
                if cost < bc - slack {
                    return true;
                }
                if cost > bc + slack {
                    return false;
                }
                let fixed = (ones | zeros).count_ones() as usize;
                let nz = zeros.count_ones() as usize;
                (fixed, nz, ones, zeros) < (*bf, *bz, *bo, *bzm)
            }
        }
    }

    fn run(&mut self, i: usize, ones: Mask, zeros: Mask, cost: f64) {
        if let Some((bc, ..)) = &self.best {
            if cost > bc + 1e-12 * bc.abs().max(1.0) {
                return;
            }
        }
        if i == self.cube.n_coords() {
            self.evaluated += 1;
            if !self.better(cost, ones, zeros) {
                return;
            }
            let e = self.cube.conditional_mean(ones, zeros);
            if e >= self.target {
                let fixed = (ones | zeros).count_ones() as usize;
                self.best = Some((cost, fixed, zeros.count_ones() as usize, ones, zeros, e));
            }
            return;
        }
        let bit = 1u128 << i;
        self.run(i + 1, ones, zeros, cost);
        self.run(i + 1, ones | bit, zeros, cost + self.l1);
        self.run(i + 1, ones, zeros | bit, cost + self.l0);
    }
}

/// Minimum of `-log Pr(Y ∈ F)` over subcubes `F` with `E[X | Y ∈ F] ≥ (1+δ)E[X]`.
pub fn phi_subcube_bruteforce<F: Scalar>(cube: &CubeModel<F>, delta: &F, budget: u64) -> Result<Witness<F>> {
    let n = cube.n_coords();
    let work = 3f64.powi(n as i32);
    if work > budget as f64 {
        return Err(Error::Budget {
            msg: format!("3^{n} subcubes exceed the budget {budget}"),
            partial: None,
        });
    }
    let p = cube.p.as_f64();
    let mut s = SubcubeSearch {
        cube,
        target: (F::one() + delta.clone()) * cube.mean(),
        l1: (1.0 / p).ln(),
        l0: (1.0 / (1.0 - p)).ln(),
        best: None,
        evaluated: 0,
    };
    s.run(0, 0, 0, 0.0);
    Ok(match s.best {
        Some((_, _, _, ones, zeros, e)) => Witness::from_cube(cube, WitnessKind::Subcube, ones, zeros, e, true),
        None => Witness::infeasible(WitnessKind::Subcube, cube.mean()),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct UtBound {
    /// `Φ(δ+ε) + log(M/(εE[X]))`.
    pub value: f64,
    /// `εE[X] ≥ M`: the correction term is not positive.
    pub degenerate: bool,
}

/// Upper bound on `-log Pr(X ≥ (1+δ)E[X])` from a value of `Φ_X(δ+ε)`.
pub fn ut_upper_bound<F: Scalar>(cube: &CubeModel<F>, eps: f64, phi_value: f64) -> Result<UtBound> {
    let mean = cube.mean().as_f64();
    if !(mean > 0.0) {
        return Err(Error::Precondition("E[X] must be positive".into()));
    }
    if !(eps > 0.0) {
        return Err(Error::Domain("ε must be positive".into()));
    }
    let m = cube.max_value()? as f64;
    let degenerate = eps * mean >= m;
    Ok(UtBound { value: phi_value + (m / (eps * mean)).ln(), degenerate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ap::ApModel;
    use crate::graph::{Graph, InducedModel, SubgraphModel};
    use crate::Rational;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    fn tri(n: usize, p: Rational) -> CubeModel<Rational> {
        CubeModel::from_subgraph(&SubgraphModel::new(Graph::complete(3), n, p).unwrap()).unwrap()
    }

    #[test]
    fn triangle_examples() {
        let cube = tri(4, r(1, 2));
        let w = phi_bruteforce(&cube, &r(9, 10), 1 << 20).unwrap();
        assert_eq!(w.fixed_ones, 2);
        assert!((w.log_cost - 2.0 * 2f64.ln()).abs() < 1e-12);
        assert!(w.feasible && w.conditional_mean >= r(19, 20));
        let w0 = phi_bruteforce(&cube, &r(0, 1), 10).unwrap();
        assert_eq!((w0.fixed_ones, w0.log_cost), (0, 0.0));
        let inf = phi_bruteforce(&cube, &r(8, 1), 10).unwrap();
        assert!(!inf.feasible && inf.log_cost.is_infinite());
        assert!(matches!(phi_bruteforce(&cube, &r(9, 10), 3), Err(Error::Budget { .. })));
    }

    #[test]
    fn ap_example() {
        let cube = CubeModel::from_ap(&ApModel::new(5, 3, r(1, 2)).unwrap()).unwrap();
        let w = phi_bruteforce(&cube, &r(3, 1), 1 << 10).unwrap();
        // E[X] = 1/2, target 2; {1,2,3} reaches 9/4 and no pair does.
        assert_eq!(w.fixed_ones, 3);
        assert!(w.conditional_mean >= r(2, 1));
    }

    #[test]
    fn subcube_on_monotone_equals_subset() {
        let cube = tri(4, r(1, 3));
        for d in [r(1, 2), r(2, 1), r(5, 1)] {
            let a = phi_bruteforce(&cube, &d, 1 << 20).unwrap();
            let b = phi_subcube_bruteforce(&cube, &d, 1 << 20).unwrap();
            assert_eq!(a.log_cost, b.log_cost);
            assert_eq!(b.fixed_zeros, 0);
            assert_eq!(a.ones, b.ones);
        }
    }

    #[test]
    fn induced_path_uses_a_zero() {
        let cube = CubeModel::from_induced(&InducedModel::new(Graph::path(3), 4, r(2, 3)).unwrap()).unwrap();
        let d = r(1, 20);
        let sub = phi_subcube_bruteforce(&cube, &d, 1 << 20).unwrap();
        assert_eq!((sub.fixed_ones, sub.fixed_zeros), (1, 1));
        assert!(sub.feasible);
        let set = phi_bruteforce(&cube, &d, 1 << 20).unwrap();
        assert!(!set.feasible || sub.log_cost < set.log_cost);
    }

    #[test]
    fn ut_bound_example() {
        let cube = tri(4, r(1, 2));
        let phi = phi_bruteforce(&cube, &r(19, 10), 1 << 20).unwrap().log_cost;
        let b = ut_upper_bound(&cube, 0.9, phi).unwrap();
        assert!(!b.degenerate);
        assert!(b.value >= -(23.0f64 / 64.0).ln());
    }
}
