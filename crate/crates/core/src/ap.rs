//! Arithmetic progressions in `[N] = {1, ..., N}`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::scalar::{check_probability, Scalar};

/// Subset of `[N]`; element `i` lives in bit `i - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerSet {
    n: usize,
    bits: BitSet,
}

impl IntegerSet {
    pub fn empty(n: usize) -> Self {
        IntegerSet { n, bits: BitSet::new(n) }
    }

    /// `{1, ..., m}` inside `[n]`.
    pub fn interval(n: usize, m: usize) -> Self {
        assert!(m <= n);
        let mut s = Self::empty(n);
        for i in 1..=m {
            s.insert(i);
        }
        s
    }

    pub fn from_members(n: usize, members: &[usize]) -> Result<Self> {
        let mut s = Self::empty(n);
        for &i in members {
            if i == 0 || i > n {
                return Err(Error::Domain(format!("{i} is not in [1, {n}]")));
            }
            s.insert(i);
        }
        Ok(s)
    }

    pub fn from_mask(n: usize, mask: u128) -> Self {
        let mut s = Self::empty(n);
        for i in 0..n.min(128) {
            if mask >> i & 1 == 1 {
                s.insert(i + 1);
            }
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= 1 && self.bits.contains(i - 1)
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i >= 1 && i <= self.n, "{i} outside [1, {}]", self.n);
        self.bits.insert(i - 1);
    }

    pub fn remove(&mut self, i: usize) {
        if i >= 1 {
            self.bits.remove(i - 1);
        }
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn members(&self) -> Vec<usize> {
        self.bits.iter().map(|b| b + 1).collect()
    }

    pub fn is_subset(&self, other: &IntegerSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    /// Hex bitmask, least significant bit = element 1.
    pub fn to_hex(&self) -> String {
        let mut digits = Vec::new();
        let nd = self.n.div_ceil(4).max(1);
        for d in 0..nd {
            let mut v = 0u8;
            for b in 0..4 {
                if self.bits.contains(d * 4 + b) {
                    v |= 1 << b;
                }
            }
            digits.push(char::from_digit(v as u32, 16).unwrap());
        }
        digits.reverse();
        format!("0x{}", digits.into_iter().collect::<String>())
    }

    pub fn from_hex(n: usize, text: &str) -> Result<Self> {
        let t = text.trim().trim_start_matches("0x");
        let mut s = Self::empty(n);
        for (d, c) in t.chars().rev().enumerate() {
            let v = c.to_digit(16).ok_or_else(|| Error::Parse {
                offset: text.len() - 1 - d,
                msg: format!("{c:?} is not a hex digit"),
            })?;
            for b in 0..4 {
                if v >> b & 1 == 1 {
                    let idx = d * 4 + b;
                    if idx >= n {
                        return Err(Error::Domain(format!("bit {} exceeds N={n}", idx + 1)));
                    }
                    s.bits.insert(idx);
                }
            }
        }
        Ok(s)
    }
}

impl Serialize for IntegerSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.members().serialize(s)
    }
}

/// Number of `k`-term progressions in a random subset `[N]_p`.
#[derive(Clone, Debug)]
pub struct ApModel<F> {
    pub n: usize,
    pub k: usize,
    pub p: F,
}

impl<F: Scalar> ApModel<F> {
    pub fn new(n: usize, k: usize, p: F) -> Result<Self> {
        if k < 2 {
            return Err(Error::Domain(format!("progression length k={k} must be at least 2")));
        }
        check_probability(&p)?;
        Ok(ApModel { n, k, p })
    }

    pub fn mean(&self) -> F {
        F::from_count(extremal_ap_count(self.n, self.k)) * self.p.powi(self.k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApProfile {
    /// `a[j]` = number of progressions in `[N]` meeting `I` in exactly `j` points.
    pub a: Vec<u64>,
    /// `i -> A_k(I ∪ {i}; i)` for every `i` in `[N]`.
    pub per_element: BTreeMap<usize, u64>,
}

/// Calls `f(first, step)` for every `k`-term progression inside `[n]`.
pub fn for_each_ap(n: usize, k: usize, mut f: impl FnMut(usize, usize)) {
    if k < 2 || n < k {
        return;
    }
    for b in 1..=(n - 1) / (k - 1) {
        for a in 1..=n - (k - 1) * b {
            f(a, b);
        }
    }
}

pub fn count_aps(set: &IntegerSet, k: usize) -> u64 {
    assert!(k >= 2);
    let n = set.universe();
    let mut c = 0;
    for a in set.members() {
        let mut b = 1;
        while a + (k - 1) * b <= n {
            if (1..k).all(|j| set.contains(a + j * b)) {
                c += 1;
            }
            b += 1;
        }
    }
    c
}

/// [`count_aps`] for sets packed into a `u64` (element `i` at bit `i-1`).
pub fn count_aps_mask(mask: u64, n: usize, k: usize) -> u64 {
    let mut c = 0;
    let mut rest = mask;
    while rest != 0 {
        let a = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let mut b = 1;
        while a + (k - 1) * b < n {
            if (1..k).all(|j| mask >> (a + j * b) & 1 == 1) {
                c += 1;
            }
            b += 1;
        }
    }
    c
}

/// `A_k([m]) = Σ_{i=1}^m ⌊(i-1)/(k-1)⌋`, in closed form.
pub fn extremal_ap_count(m: usize, k: usize) -> u64 {
    assert!(k >= 2);
    let l = (k - 1) as u64;
    let m = m as u64;
    let t = m / l;
    let rem = m - t * l;
    l * t * t.saturating_sub(1) / 2 + rem * t
}

/// The floor sum evaluated term by term.
pub fn extremal_ap_count_sum(m: usize, k: usize) -> u64 {
    (1..=m as u64).map(|i| (i - 1) / (k as u64 - 1)).sum()
}

pub fn ap_profile<F: Scalar>(model: &ApModel<F>, set: &IntegerSet) -> Result<ApProfile> {
    if set.universe() != model.n {
        return Err(Error::Domain(format!("set lives in [{}], model has N={}", set.universe(), model.n)));
    }
    let k = model.k;
    let mut a = vec![0u64; k + 1];
    let mut per_element: BTreeMap<usize, u64> = (1..=model.n).map(|i| (i, 0)).collect();
    for_each_ap(model.n, k, |first, step| {
        let mut outside = Vec::new();
        for j in 0..k {
            let x = first + j * step;
            if !set.contains(x) {
                outside.push(x);
            }
        }
        a[k - outside.len()] += 1;
        match outside.len() {
            0 => (0..k).for_each(|j| *per_element.get_mut(&(first + j * step)).unwrap() += 1),
            1 => *per_element.get_mut(&outside[0]).unwrap() += 1,
            _ => {}
        }
    });
    Ok(ApProfile { a, per_element })
}

/// `E_I[X] = Σ_j a_j(I) p^{k-j}`.
pub fn conditional_expectation_ap<F: Scalar>(model: &ApModel<F>, set: &IntegerSet) -> Result<F> {
    check_probability(&model.p)?;
    let prof = ap_profile(model, set)?;
    let mut acc = F::zero();
    for (j, &c) in prof.a.iter().enumerate() {
        if c > 0 {
            acc = acc + F::from_count(c) * model.p.powi(model.k - j);
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalReport {
    pub n: usize,
    pub k: usize,
    pub checked: u64,
    pub violations: u64,
    /// Smallest violating set, if any.
    pub first_violation: Option<Vec<usize>>,
    /// Whether every initial interval attains the bound.
    pub intervals_tight: bool,
}

/// Checks `A_k(I) ≤ A_k([|I|])` over all `2^n` subsets of `[n]`.
pub fn check_extremal_ap(n: usize, k: usize) -> Result<ExtremalReport> {
    if n > 30 {
        return Err(Error::budget(format!("2^{n} subsets is beyond the exhaustive range")));
    }
    let total = 1u64 << n;
    let table: Vec<u64> = (0..=n).map(|m| extremal_ap_count(m, k)).collect();
    let chunk = 1u64 << n.min(12);
    let (violations, first) = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut v = 0u64;
            let mut first: Option<u64> = None;
            for mask in c * chunk..((c + 1) * chunk).min(total) {
                if count_aps_mask(mask, n, k) > table[mask.count_ones() as usize] {
                    v += 1;
                    first.get_or_insert(mask);
                }
            }
            (v, first)
        })
        .reduce(|| (0, None), |a, b| (a.0 + b.0, a.1.or(b.1)));
    let intervals_tight = (0..=n).all(|m| count_aps(&IntegerSet::interval(n, m), k) == table[m]);
    Ok(ExtremalReport {
        n,
        k,
        checked: total,
        violations,
        first_violation: first.map(|m| IntegerSet::from_mask(n, m as u128).members()),
        intervals_tight,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn set(n: usize, xs: &[usize]) -> IntegerSet {
        IntegerSet::from_members(n, xs).unwrap()
    }

    #[test]
    fn counting_examples() {
        assert_eq!(count_aps(&set(5, &[1, 2, 3, 4, 5]), 3), 4);
        assert_eq!(count_aps(&set(8, &[1, 2, 4, 8]), 3), 0);
        assert_eq!(count_aps(&IntegerSet::empty(9), 4), 0);
        assert_eq!(extremal_ap_count(5, 3), 4);
        assert_eq!(extremal_ap_count(8, 4), 7);
        for m in 0..40 {
            assert_eq!(extremal_ap_count(m, 2), (m * m.saturating_sub(1) / 2) as u64);
            for k in 2..7 {
                assert_eq!(extremal_ap_count(m, k), extremal_ap_count_sum(m, k));
            }
        }
    }

    #[test]
    fn profile_examples() {
        let m = ApModel::new(5, 3, Rational::new(1.into(), 2.into())).unwrap();
        assert_eq!(ap_profile(&m, &IntegerSet::empty(5)).unwrap().a, vec![4, 0, 0, 0]);
        let p = ap_profile(&m, &set(5, &[1, 2, 3])).unwrap();
        assert_eq!(p.a[3], 1);
        let p = ap_profile(&m, &set(5, &[1, 2, 3, 5])).unwrap();
        assert_eq!(p.per_element[&3], 2);
        assert_eq!(
            conditional_expectation_ap(&m, &set(5, &[1, 2, 3])).unwrap(),
            Rational::new(9.into(), 4.into())
        );
        assert_eq!(conditional_expectation_ap(&m, &IntegerSet::empty(5)).unwrap(), m.mean());
        assert_eq!(conditional_expectation_ap(&m, &IntegerSet::interval(5, 5)).unwrap(), Rational::from_count(4));
    }

    #[test]
    fn hex_roundtrip() {
        let s = set(10, &[1, 4, 10]);
        let h = s.to_hex();
        assert_eq!(h, "0x209");
        assert_eq!(IntegerSet::from_hex(10, &h).unwrap(), s);
        assert!(IntegerSet::from_hex(3, "0xf").is_err());
        assert_eq!(serde_json::to_string(&s).unwrap(), "[1,4,10]");
    }

    #[test]
    fn mask_count_agrees() {
        for mask in 0u64..(1 << 10) {
            let s = IntegerSet::from_mask(10, mask as u128);
            assert_eq!(count_aps_mask(mask, 10, 3), count_aps(&s, 3));
        }
    }

    #[test]
    fn small_extremal_check() {
        let r = check_extremal_ap(10, 3).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.intervals_tight);
    }
}
