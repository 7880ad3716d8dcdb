//! Closed-form rate functions for clique and hub localisation.

use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Absolute tolerance for deciding which candidates attain the minimum.
pub const ARGMIN_TOL: f64 = 1e-9;

fn cst<T: Float>(x: f64) -> T {
    T::from(x).unwrap()
}

fn frac<T: Float>(a: T) -> T {
    a - a.floor()
}

/// `ψ_r(δ, c, x) = (δ(1-x))^{2/r}/2 + (⌊xδc/r⌋ + {xδc/r}^{1/(r-1)})/c` for finite `c > 0`.
pub fn psi<T: Float>(r: u32, delta: T, c: T, x: T) -> Result<T> {
    if r < 3 {
        return Err(Error::Domain(format!("r={r} must be at least 3")));
    }
    if !(c > T::zero()) || !c.is_finite() {
        return Err(Error::Domain("ψ needs 0 < c < ∞; use the limit evaluators".into()));
    }
    if !(delta > T::zero()) || x < T::zero() || x > T::one() {
        return Err(Error::Domain("need δ > 0 and x ∈ [0, 1]".into()));
    }
    Ok(psi_unchecked(r, delta, c, x))
}

/// `y^{num/den}` with root shortcuts for the exponents that occur for small `r`.
fn rpow<T: Float>(y: T, num: u32, den: u32) -> T {
    match (num, den) {
        (1, 2) | (2, 4) => y.sqrt(),
        (1, 3) => y.cbrt(),
        (2, 3) => {
            let t = y.cbrt();
            t * t
        }
        (1, 4) => y.sqrt().sqrt(),
        _ => y.powf(cst::<T>(num as f64) / cst(den as f64)),
    }
}

pub(crate) fn psi_unchecked<T: Float>(r: u32, delta: T, c: T, x: T) -> T {
    let rf: T = cst(r as f64);
    let two: T = cst(2.0);
    let a = x * delta * c / rf;
    let first = rpow(delta * (T::one() - x), 2, r) / two;
    let fr = frac(a);
    let tail = if fr == T::zero() { T::zero() } else { rpow(fr, 1, r - 1) };
    first + (a.floor() + tail) / c
}

/// Uniform limit of `ψ_r` as `c → ∞`: `(δ(1-x))^{2/r}/2 + xδ/r`.
pub fn psi_infinite<T: Float>(r: u32, delta: T, x: T) -> T {
    let rf: T = cst(r as f64);
    let two: T = cst(2.0);
    (delta * (T::one() - x)).powf(two / rf) / two + x * delta / rf
}

/// Minimum of `ψ_r(δ, c, ·)` and the points of `{0, x*, 1}` attaining it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimiserSet<T> {
    pub phi: T,
    pub argmins: Vec<T>,
    /// `x* = r⌊δc/r⌋/(δc)` when `c` is finite and positive.
    pub x_star: Option<T>,
}

impl<T: Float + std::fmt::Display> MinimiserSet<T> {
    /// `clique`, `hub`, `mixed:<x*>` or `tie`.
    pub fn label(&self) -> String {
        match self.argmins.as_slice() {
            [x] if *x == T::zero() => "clique".into(),
            [x] if *x == T::one() => "hub".into(),
            [x] => format!("mixed:{:.6}", x.to_f64().unwrap()),
            _ => "tie".into(),
        }
    }
}

/// `φ_r(δ, c)` via the three-candidate formula; `c` may be `0` or `+∞`.
pub fn phi_clique_hub<T: Float>(r: u32, delta: T, c: T) -> Result<MinimiserSet<T>> {
    if r < 3 {
        return Err(Error::Domain(format!("r={r} must be at least 3")));
    }
    if !(delta > T::zero()) || c < T::zero() || c.is_nan() {
        return Err(Error::Domain("need δ > 0 and c ∈ [0, ∞]".into()));
    }
    let rf: T = cst(r as f64);
    let two: T = cst(2.0);
    let clique = delta.powf(two / rf) / two;
    let mut cands: Vec<(T, T)> = Vec::new();
    let mut x_star = None;
    if c == T::zero() {
        cands.push((T::zero(), clique));
    } else if c.is_infinite() {
        cands.push((T::zero(), clique));
        cands.push((T::one(), delta / rf));
    } else {
        let a = delta * c / rf;
        let (fl, fr) = (a.floor(), frac(a));
        cands.push((T::zero(), clique));
        cands.push((T::one(), (fl + fr.powf(T::one() / (rf - T::one()))) / c));
        let xs = if fr == T::zero() { T::one() } else { fl / a };
        x_star = Some(xs);
        cands.push((xs, fl / c + (rf * fr / c).powf(two / rf) / two));
    }
    let phi = cands.iter().map(|&(_, v)| v).fold(T::infinity(), T::min);
    let tol: T = cst(ARGMIN_TOL);
    let mut argmins: Vec<T> = Vec::new();
    for &(x, v) in &cands {
        if v - phi <= tol && !argmins.contains(&x) {
            argmins.push(x);
        }
    }
    argmins.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(MinimiserSet { phi, argmins, x_star })
}

/// Grid minimum of `ψ_r(δ, c, ·)` over `points` uniformly spaced `x ∈ [0,1]`.
pub fn psi_grid_min<T: Float>(r: u32, delta: T, c: T, points: usize) -> T {
    let last: T = cst((points - 1) as f64);
    (0..points)
        .map(|i| psi_unchecked(r, delta, c, cst::<T>(i as f64) / last))
        .fold(T::infinity(), T::min)
}

/// Poisson rate `Ψ = ((1+δ)log(1+δ) - δ)·mean`.
pub fn poisson_rate(delta: f64, mean: f64) -> Result<f64> {
    if delta < 0.0 || mean < 0.0 {
        return Err(Error::Domain("need δ ≥ 0 and mean ≥ 0".into()));
    }
    Ok(((1.0 + delta) * delta.ln_1p() - delta) * mean)
}

/// Root of `δ^{2/r}/2 = δ/r` found by bisection on `[1, 10^6]`.
pub fn crossover_bisection(r: u32) -> Result<f64> {
    if r < 3 {
        return Err(Error::Domain(format!("r={r} must be at least 3")));
    }
    let rf = r as f64;
    let f = |d: f64| d.powf(2.0 / rf) / 2.0 - d / rf;
    let (mut lo, mut hi) = (1.0f64, 1e6f64);
    // f > 0 just above 1 for r ≥ 3, f < 0 for large δ.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `(r/2)^{r/(r-2)}`.
pub fn crossover_closed_form(r: u32) -> f64 {
    let rf = r as f64;
    (rf / 2.0).powf(rf / (rf - 2.0))
}

/// Coefficients `i_k(H)` of the independence polynomial.
pub fn independence_polynomial(h: &Graph) -> Result<Vec<u64>> {
    let n = h.n();
    if n > 24 {
        return Err(Error::budget(format!("2^{n} vertex subsets")));
    }
    let nb: Vec<u32> = (0..n).map(|u| h.neighbors(u).iter().fold(0u32, |m, v| m | 1 << v)).collect();
    let mut coef = vec![0u64; n + 1];
    for s in 0u32..(1u32 << n) {
        if (0..n).all(|u| s >> u & 1 == 0 || nb[u] & s == 0) {
            coef[s.count_ones() as usize] += 1;
        }
    }
    while coef.len() > 1 && *coef.last().unwrap() == 0 {
        coef.pop();
    }
    Ok(coef)
}

/// The positive `θ` with `P_H(θ) = 1 + δ`.
pub fn theta_root(h: &Graph, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::Domain("δ must be positive".into()));
    }
    let coef = independence_polynomial(h)?;
    let eval = |x: f64| coef.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64);
    let mut hi = 1.0;
    while eval(hi) < 1.0 + delta {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if eval(mid) < 1.0 + delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Rate for a connected regular pattern at `c = np^Δ ∈ {0, ∞}`:
/// `δ^{2/v_H}/2`, or `min{δ^{2/v_H}/2, θ}` at `∞`.
pub fn rate_regular(h: &Graph, delta: f64, c: f64) -> Result<MinimiserSet<f64>> {
    if h.regular_degree().map_or(true, |d| d < 2) || !h.is_connected() {
        return Err(Error::Precondition("pattern must be connected and Δ-regular with Δ ≥ 2".into()));
    }
    let clique = delta.powf(2.0 / h.n() as f64) / 2.0;
    if c == 0.0 {
        return Ok(MinimiserSet { phi: clique, argmins: vec![0.0], x_star: None });
    }
    if !c.is_infinite() {
        return Err(Error::Unsupported("finite positive c is only solved for cliques".into()));
    }
    let theta = theta_root(h, delta)?;
    let phi = clique.min(theta);
    let mut argmins = Vec::new();
    if clique - phi <= ARGMIN_TOL {
        argmins.push(0.0);
    }
    if theta - phi <= ARGMIN_TOL {
        argmins.push(1.0);
    }
    Ok(MinimiserSet { phi, argmins, x_star: None })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseRow {
    pub delta: f64,
    pub c: f64,
    pub phi: f64,
    pub argmin_label: String,
}

/// One row per `(δ, c)` pair, `δ` outermost.
pub fn phase_diagram(r: u32, deltas: &[f64], cs: &[f64]) -> Result<Vec<PhaseRow>> {
    let mut out = Vec::with_capacity(deltas.len() * cs.len());
    for &delta in deltas {
        for &c in cs {
            let m = phi_clique_hub(r, delta, c)?;
            out.push(PhaseRow { delta, c, phi: m.phi, argmin_label: m.label() });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_examples() {
        assert!((psi(3, 1.0, 1.5, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((psi(3, 1.0, 1.5, 1.0).unwrap() - 0.5f64.sqrt() / 1.5).abs() < 1e-15);
        // xδc/r = 2 exactly: second term is xδ/r.
        let v = psi(3, 2.0, 3.0, 1.0).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
        assert!(psi(3, 1.0, 0.0, 0.5).is_err());
        assert!(psi(3, 1.0, f64::INFINITY, 0.5).is_err());
    }

    #[test]
    fn phi_examples() {
        let m = phi_clique_hub(3, 1.0, f64::INFINITY).unwrap();
        assert!((m.phi - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(m.argmins, vec![1.0]);
        let m = phi_clique_hub(3, 1.0, 3.0).unwrap();
        assert!((m.phi - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(m.argmins, vec![1.0]);
        let m = phi_clique_hub(3, 3.375, f64::INFINITY).unwrap();
        assert!((m.phi - 1.125).abs() < 1e-12);
        assert_eq!(m.argmins, vec![0.0, 1.0]);
        assert_eq!(m.label(), "tie");
        let m = phi_clique_hub(3, 2.0, 0.0).unwrap();
        assert_eq!(m.argmins, vec![0.0]);
        assert_eq!(m.label(), "clique");
    }

    #[test]
    fn poisson_examples() {
        assert_eq!(poisson_rate(0.0, 3.0).unwrap(), 0.0);
        assert!((poisson_rate(1.0, 1.0).unwrap() - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-15);
        assert!((poisson_rate(std::f64::consts::E - 1.0, 1.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn crossover() {
        assert!((crossover_bisection(3).unwrap() - 3.375).abs() < 1e-9);
        assert!((crossover_closed_form(3) - 3.375).abs() < 1e-12);
        for r in 4..8 {
            assert!((crossover_bisection(r).unwrap() - crossover_closed_form(r)).abs() < 1e-8);
        }
    }

    #[test]
    fn theta_for_cliques_is_delta_over_r() {
        for r in 3..6 {
            let t = theta_root(&Graph::complete(r), 2.0).unwrap();
            assert!((t - 2.0 / r as f64).abs() < 1e-12);
        }
        assert_eq!(independence_polynomial(&Graph::cycle(4)).unwrap(), vec![1, 4, 2]);
    }

    #[test]
    fn f32_instance() {
        let m = phi_clique_hub(3, 1.0f32, f32::INFINITY).unwrap();
        assert!((m.phi - 1.0 / 3.0).abs() < 1e-6);
    }
}
