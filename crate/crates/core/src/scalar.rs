//! Scalar abstraction shared by the exact and floating-point engines.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Field-like scalar used for expectations and probabilities.
///
/// Implemented for `f32`, `f64` and `BigRational`. Exact work uses the
/// rational instance; the float instances exist for quick exploration.
pub trait Scalar: Clone + Debug + PartialOrd + Num + Send + Sync + 'static {
    fn from_count(n: u64) -> Self;
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self;
    fn as_f64(&self) -> f64;
    /// Natural log, accurate even when the value under- or overflows f64.
    fn ln(&self) -> f64;
    /// `"num/den"` for exact scalars, shortest decimal otherwise.
    fn render(&self) -> String;
    fn is_exact() -> bool;

    fn from_rational(q: &BigRational) -> Self {
        Self::from_ratio(q.numer(), q.denom())
    }

    fn powi(&self, e: usize) -> Self {
        num_traits::pow::pow(self.clone(), e)
    }
}

macro_rules! float_scalar {
    ($($t:ty)*) => {$(
        impl Scalar for $t {
            fn from_count(n: u64) -> Self {
                n as $t
            }
            fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
                let q = BigRational::new(num.clone(), den.clone());
                q.to_f64().unwrap_or(f64::NAN) as $t
            }
            fn as_f64(&self) -> f64 {
                *self as f64
            }
            fn ln(&self) -> f64 {
                (*self as f64).ln()
            }
            fn render(&self) -> String {
                format!("{}", self)
            }
            fn is_exact() -> bool {
                false
            }
        }
    )*};
}

float_scalar!(f32 f64);

impl Scalar for BigRational {
    fn from_count(n: u64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        BigRational::new(num.clone(), den.clone())
    }
    fn as_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
    fn ln(&self) -> f64 {
        ratio_ln(self)
    }
    fn render(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
    fn is_exact() -> bool {
        true
    }
}

/// Converts a rational to the nearest-ish f64, robust to huge numerators
/// and denominators.
pub fn ratio_to_f64(q: &BigRational) -> f64 {
    if let Some(x) = q.to_f64() {
        if x.is_finite() && (x != 0.0 || q.is_zero()) {
            return x;
        }
    }
    // Fall back to scaling by bit lengths.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = nb - db - 60;
    let scaled = if shift >= 0 {
        BigRational::new(q.numer().clone(), q.denom() << (shift as usize))
    } else {
        BigRational::new(q.numer() << ((-shift) as usize), q.denom().clone())
    };
    let m = scaled.to_integer().to_f64().unwrap_or(0.0);
    m * 2f64.powi(shift as i32)
}

/// Natural logarithm of a positive rational without overflowing f64.
pub fn ratio_ln(q: &BigRational) -> f64 {
    if !q.is_positive() {
        return f64::NEG_INFINITY;
    }
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = nb - db;
    let scaled = if shift >= 0 {
        BigRational::new(q.numer().clone(), q.denom() << (shift as usize))
    } else {
        BigRational::new(q.numer() << ((-shift) as usize), q.denom().clone())
    };
    scaled.to_f64().unwrap_or(1.0).ln() + (shift as f64) * std::f64::consts::LN_2
}

/// Exact conversion of a finite f64 into a rational.
pub fn f64_to_ratio(x: f64) -> Result<BigRational> {
    BigRational::from_f64(x).ok_or_else(|| Error::Domain(format!("{x} is not a finite number")))
}

/// Parses `"a/b"`, an integer, or a decimal such as `"0.3"` or `"1e-3"` into an
/// exact rational. Decimals are read as the decimal they spell, not as the
/// nearest binary float.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Parse { offset: 0, msg: format!("cannot read {t:?} as a rational") };
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((a, b)) = t.split_once('/') {
        let num = BigInt::from_str_radix(a.trim(), 10).map_err(|_| bad())?;
        let den = BigInt::from_str_radix(b.trim(), 10).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Domain(format!("zero denominator in {t:?}")));
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = t[pos + 1..].parse().map_err(|_| bad())?;
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all = format!("{int_part}{frac_part}");
    let mut num = BigInt::from_str_radix(if all.is_empty() { "0" } else { &all }, 10).map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let q = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(q)
}

/// Checks `0 < p < 1`.
pub fn check_probability<F: Scalar>(p: &F) -> Result<()> {
    if *p > F::zero() && *p < F::one() {
        Ok(())
    } else {
        Err(Error::Domain(format!("p = {} must lie strictly between 0 and 1", p.render())))
    }
}

/// `(x)_t = x (x-1) ... (x-t+1)` for scalars.
pub fn falling<F: Scalar>(x: &F, t: usize) -> F {
    let mut acc = F::one();
    let mut cur = x.clone();
    for _ in 0..t {
        acc = acc * cur.clone();
        cur = cur - F::one();
    }
    acc
}

pub fn rational_one() -> BigRational {
    BigRational::one()
}
