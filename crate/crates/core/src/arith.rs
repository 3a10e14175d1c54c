//! Exact integer/rational arithmetic and the few floating-point helpers the
//! rest of the crate leans on.
//!
//! Rationals are `num_rational::BigRational`, which keeps every value in
//! lowest terms with a positive denominator. Floating-point work is plain
//! `f64`; sums that feed verdicts go through [`CompensatedSum`].

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;
pub type Integer = BigInt;

/// Euler's constant, correctly rounded to the nearest `f64`.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Decimal expansion of Euler's constant used to audit [`EULER_GAMMA`].
pub const EULER_GAMMA_DIGITS: &str = "0.57721566490153286060651209008240243104215933593992";

pub fn euler_gamma() -> f64 {
    EULER_GAMMA
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` in lowest terms. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Binomial coefficient C(n, k) over the integers.
pub fn binomial(n: u64, k: u64) -> Integer {
    if k > n {
        return Integer::zero();
    }
    let k = k.min(n - k);
    let mut acc = Integer::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Generalized binomial n(n-1)...(n-k+1)/k! with a rational upper argument.
pub fn binomial_q(n: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc *= n - int(i64::from(i));
        acc /= int(i64::from(i) + 1);
    }
    acc
}

pub fn rational_pow(q: &Rational, e: i32) -> Result<Rational> {
    if e < 0 && q.is_zero() {
        return Err(Error::ZeroToNegativePower);
    }
    Ok(num_traits::Pow::pow(q, e))
}

pub fn floor_q(q: &Rational) -> Integer {
    q.numer().div_floor(q.denom())
}

/// Fractional part `q - floor(q)`, always in [0, 1).
pub fn frac_q(q: &Rational) -> Rational {
    Rational::new(q.numer().mod_floor(q.denom()), q.denom().clone())
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact rational value of a finite float.
pub fn from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::InvalidArgument(format!("non-finite value {x}")))
}

/// `floor(q)` as a `u64`, for arguments that index tables.
pub fn floor_u64(q: &Rational) -> Result<u64> {
    let f = floor_q(q);
    if f.is_negative() {
        return Ok(0);
    }
    f.to_u64()
        .ok_or_else(|| Error::Overflow(format!("floor({q}) does not fit in 64 bits")))
}

/// Parses `p/q`, an integer, or a decimal literal such as `2.5` or `1e5`
/// into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("cannot parse {s:?} as a rational"));
    if s.contains('/') {
        return Rational::from_str(s).map_err(|_| bad());
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, fractional) = match digits.split_once('.') {
        Some((w, f)) => (w, f),
        None => (digits, ""),
    };
    if whole.is_empty() && fractional.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(fractional.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = format!("{whole}{fractional}");
    let numer = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| bad())?;
    let scale = exp - fractional.len() as i32;
    let ten = int(10);
    let mut q = Rational::from_integer(numer) * rational_pow(&ten, scale)?;
    if neg {
        q = -q;
    }
    Ok(q)
}

/// Renders a rational as `p/q`, or `p` when the denominator is 1.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Rounds to 12 significant decimal digits, the precision used in reports.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn format_f64(x: f64) -> String {
    format!("{}", round12(x))
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// `log(x / n)` for `x` close to the integer `n`, without cancellation.
pub fn log_ratio(x: f64, n: f64) -> f64 {
    ((x - n) / n).ln_1p()
}
