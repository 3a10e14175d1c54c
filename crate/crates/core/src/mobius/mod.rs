//! Sieved Möbius values and the summatory functions built on them:
//! M(x), m(x) = Σ μ(n)/n, m₁(x) = m(x) - M(x)/x, the harmonic sum H(x),
//! and exact piecewise integrals of |M(t)| t^w.

mod cache;

use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::{self, CompensatedSum, Rational};
use crate::error::{Error, Result};

pub use cache::{load_table, save_table, CACHE_MAGIC, CACHE_VERSION};

/// Largest `floor(x)` for which exact rational summatory values are produced.
pub const EXACT_CAP: u64 = 10_000;

const BLOCK: usize = 1 << 20;

/// μ(n) and M(n) for 1 ≤ n ≤ limit. Index 0 holds μ = 0, M = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuTable {
    mu: Vec<i8>,
    mertens: Vec<i64>,
}

impl MuTable {
    pub fn limit(&self) -> u64 {
        (self.mu.len() - 1) as u64
    }

    /// μ(n); zero for n = 0. Panics if `n > limit`.
    #[inline]
    pub fn mu(&self, n: u64) -> i8 {
        self.mu[n as usize]
    }

    /// M(n) at an integer; zero for n = 0. Panics if `n > limit`.
    #[inline]
    pub fn mertens_at(&self, n: u64) -> i64 {
        self.mertens[n as usize]
    }

    pub fn mu_values(&self) -> &[i8] {
        &self.mu
    }

    pub fn mertens_values(&self) -> &[i64] {
        &self.mertens
    }

    pub(crate) fn from_parts(mu: Vec<i8>, mertens: Vec<i64>) -> Self {
        debug_assert_eq!(mu.len(), mertens.len());
        Self { mu, mertens }
    }

    pub fn check_range(&self, x: f64) -> Result<u64> {
        if !x.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite argument {x}")));
        }
        if x.floor() > self.limit() as f64 {
            return Err(Error::OutOfRange {
                x,
                limit: self.limit() as f64,
            });
        }
        Ok(if x < 1.0 { 0 } else { x.floor() as u64 })
    }
}

fn small_primes(upto: u64) -> Vec<u64> {
    let n = upto as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Segmented sieve for μ on 1..=n, with blocks processed in parallel on the
/// current rayon pool.
pub fn build_mu_sieve(n: u64) -> Result<MuTable> {
    if n == 0 {
        return Err(Error::ZeroSieveLimit);
    }
    let len = usize::try_from(n)
        .ok()
        .and_then(|v| v.checked_add(1))
        .ok_or(Error::Resource(usize::MAX))?;
    let mut mu: Vec<i8> = Vec::new();
    mu.try_reserve_exact(len).map_err(|_| Error::Resource(len))?;
    mu.resize(len, 1);
    let mut mertens: Vec<i64> = Vec::new();
    mertens.try_reserve_exact(len).map_err(|_| Error::Resource(len))?;

    mu[0] = 0;
    let primes = small_primes(n.isqrt());
    mu[1..].par_chunks_mut(BLOCK).enumerate().for_each(|(b, block)| {
        let lo = 1 + (b * BLOCK) as u64;
        sieve_block(lo, block, &primes);
    });

    let mut acc = 0i64;
    mertens.push(0);
    for &m in &mu[1..] {
        acc += i64::from(m);
        mertens.push(acc);
    }
    Ok(MuTable { mu, mertens })
}

fn sieve_block(lo: u64, block: &mut [i8], primes: &[u64]) {
    let hi = lo + block.len() as u64;
    let mut prod = vec![1u64; block.len()];
    for &p in primes {
        if p * p >= hi {
            break;
        }
        let mut m = lo.div_ceil(p) * p;
        while m < hi {
            let i = (m - lo) as usize;
            block[i] = -block[i];
            prod[i] *= p;
            m += p;
        }
        let sq = p * p;
        let mut m = lo.div_ceil(sq) * sq;
        while m < hi {
            block[(m - lo) as usize] = 0;
            m += sq;
        }
    }
    for (i, v) in block.iter_mut().enumerate() {
        let n = lo + i as u64;
        if *v != 0 && prod[i] != n {
            *v = -*v;
        }
    }
}

/// μ(n) by trial division. Used as an independent check on the sieve.
pub fn trial_mu(mut n: u64) -> i8 {
    if n == 0 {
        return 0;
    }
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// M(x) = Σ_{n ≤ x} μ(n); zero for x < 1.
pub fn mertens(t: &MuTable, x: f64) -> Result<i64> {
    let n = t.check_range(x)?;
    Ok(t.mertens_at(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

/// A summatory function value: always a float, plus the exact rational when
/// it was requested and within the cap.
#[derive(Debug, Clone, PartialEq)]
pub struct SummatoryValue {
    pub x: f64,
    pub exact: Option<Rational>,
    pub approx: f64,
}

impl SummatoryValue {
    fn from_exact(x: f64, q: Rational) -> Self {
        let approx = arith::to_f64(&q);
        Self {
            x,
            exact: Some(q),
            approx,
        }
    }

    fn from_float(x: f64, approx: f64) -> Self {
        Self { x, exact: None, approx }
    }
}

/// Sums rationals pairwise so denominators grow in balanced steps.
pub fn sum_rationals(mut terms: Vec<Rational>) -> Rational {
    if terms.is_empty() {
        return Rational::zero();
    }
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len().div_ceil(2));
        let mut it = terms.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a + b),
                None => next.push(a),
            }
        }
        terms = next;
    }
    terms.pop().unwrap_or_else(Rational::zero)
}

fn exact_floor(t: &MuTable, x: &Rational) -> Result<u64> {
    let n = arith::floor_u64(x)?;
    if n > t.limit() {
        return Err(Error::OutOfRange {
            x: arith::to_f64(x),
            limit: t.limit() as f64,
        });
    }
    if n > EXACT_CAP {
        return Err(Error::ExactCapExceeded { x: n, cap: EXACT_CAP });
    }
    Ok(n)
}

/// m(x) as an exact rational; requires floor(x) ≤ [`EXACT_CAP`].
pub fn m_log_exact(t: &MuTable, x: &Rational) -> Result<Rational> {
    let n = exact_floor(t, x)?;
    let terms = (1..=n)
        .filter(|&k| t.mu(k) != 0)
        .map(|k| arith::rat(i64::from(t.mu(k)), k as i64))
        .collect();
    Ok(sum_rationals(terms))
}

/// m(x) with compensated summation.
pub fn m_log_f64(t: &MuTable, x: f64) -> Result<f64> {
    let n = t.check_range(x)?;
    Ok((1..=n)
        .filter(|&k| t.mu(k) != 0)
        .map(|k| f64::from(t.mu(k)) / k as f64)
        .collect::<CompensatedSum>()
        .value())
}

pub fn m_log(t: &MuTable, x: f64, mode: Mode) -> Result<SummatoryValue> {
    match mode {
        Mode::Exact => {
            let q = arith::from_f64(x)?;
            Ok(SummatoryValue::from_exact(x, m_log_exact(t, &q)?))
        }
        Mode::Float => Ok(SummatoryValue::from_float(x, m_log_f64(t, x)?)),
    }
}

/// The four algebraically equal expressions for m₁(x).
#[derive(Debug, Clone, PartialEq)]
pub struct M1Routes {
    /// Σ μ(n)(1/n - 1/x)
    pub sum_form: Rational,
    /// m(x) - M(x)/x
    pub difference_form: Rational,
    /// ∫_1^x M(t) dt/t², integrated piecewise
    pub integral_form: Rational,
    /// (1/x) ∫_1^x m(t) dt, integrated piecewise
    pub mean_form: Rational,
}

impl M1Routes {
    pub fn agree(&self) -> bool {
        self.sum_form == self.difference_form
            && self.sum_form == self.integral_form
            && self.sum_form == self.mean_form
    }
}

pub fn m1_exact_routes(t: &MuTable, x: &Rational) -> Result<M1Routes> {
    let n = exact_floor(t, x)?;
    if n == 0 {
        let z = Rational::zero();
        return Ok(M1Routes {
            sum_form: z.clone(),
            difference_form: z.clone(),
            integral_form: z.clone(),
            mean_form: z,
        });
    }
    let inv_x = x.recip();
    let sum_form = sum_rationals(
        (1..=n)
            .filter(|&k| t.mu(k) != 0)
            .map(|k| arith::int(i64::from(t.mu(k))) * (arith::rat(1, k as i64) - &inv_x))
            .collect(),
    );
    let m = m_log_exact(t, x)?;
    let difference_form = &m - arith::int(t.mertens_at(n)) * &inv_x;

    let upper = |k: u64| -> Rational {
        let next = arith::int(k as i64 + 1);
        if &next < x {
            next
        } else {
            x.clone()
        }
    };
    let integral_form = sum_rationals(
        (1..=n)
            .filter(|&k| t.mertens_at(k) != 0)
            .map(|k| arith::int(t.mertens_at(k)) * (arith::rat(1, k as i64) - upper(k).recip()))
            .collect(),
    );
    let mut m_at = Vec::with_capacity(n as usize);
    let mut running = Rational::zero();
    for k in 1..=n {
        if t.mu(k) != 0 {
            running += arith::rat(i64::from(t.mu(k)), k as i64);
        }
        m_at.push(running.clone());
    }
    let mean_form = sum_rationals(
        (1..=n)
            .map(|k| &m_at[(k - 1) as usize] * (upper(k) - arith::int(k as i64)))
            .collect(),
    ) * &inv_x;
    Ok(M1Routes {
        sum_form,
        difference_form,
        integral_form,
        mean_form,
    })
}

/// m₁(x) by the sum Σ μ(n)(1/n - 1/x), compensated.
pub fn m1_f64(t: &MuTable, x: f64) -> Result<f64> {
    let n = t.check_range(x)?;
    Ok((1..=n)
        .filter(|&k| t.mu(k) != 0)
        .map(|k| f64::from(t.mu(k)) * (1.0 / k as f64 - 1.0 / x))
        .collect::<CompensatedSum>()
        .value())
}

/// m₁(x) as ∫_1^x M(t) dt/t², float route used to cross-check [`m1_f64`].
pub fn m1_integral_f64(t: &MuTable, x: f64) -> Result<f64> {
    let n = t.check_range(x)?;
    Ok((1..=n)
        .map(|k| {
            let hi = ((k + 1) as f64).min(x);
            t.mertens_at(k) as f64 * (1.0 / k as f64 - 1.0 / hi)
        })
        .collect::<CompensatedSum>()
        .value())
}

pub fn m1(t: &MuTable, x: f64, mode: Mode) -> Result<SummatoryValue> {
    match mode {
        Mode::Exact => {
            let q = arith::from_f64(x)?;
            let routes = m1_exact_routes(t, &q)?;
            if !routes.agree() {
                return Err(Error::InvalidArgument(format!("m1 routes disagree at x = {x}")));
            }
            Ok(SummatoryValue::from_exact(x, routes.sum_form))
        }
        Mode::Float => Ok(SummatoryValue::from_float(x, m1_f64(t, x)?)),
    }
}

/// H(x) = Σ_{n ≤ x} 1/n; exact when floor(x) ≤ [`EXACT_CAP`].
pub fn harmonic(x: f64) -> Result<SummatoryValue> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("harmonic needs x >= 1, got {x}")));
    }
    let n = x.floor() as u64;
    let approx = harmonic_f64(n);
    if n <= EXACT_CAP {
        let q = sum_rationals((1..=n).map(|k| arith::rat(1, k as i64)).collect());
        Ok(SummatoryValue {
            x,
            exact: Some(q),
            approx,
        })
    } else {
        Ok(SummatoryValue::from_float(x, approx))
    }
}

/// H(n) in floating point, compensated.
pub fn harmonic_f64(n: u64) -> f64 {
    (1..=n)
        .rev()
        .map(|k| 1.0 / k as f64)
        .collect::<CompensatedSum>()
        .value()
}

/// ∫_n^x t^w dt for n ≤ x, evaluated without cancellation when x ≈ n.
pub fn power_piece(n: f64, x: f64, w: i32) -> f64 {
    if x <= n {
        return 0.0;
    }
    let r = arith::log_ratio(x, n);
    if w == -1 {
        return r;
    }
    let e = f64::from(w + 1);
    n.powf(e) * (e * r).exp_m1() / e
}

/// Prefix values of ∫_1^n |M(t)| t^w dt at the integers 0..=upto.
#[derive(Debug, Clone)]
pub struct AbsMertensIntegral {
    weight: i32,
    at_int: Vec<f64>,
}

impl AbsMertensIntegral {
    pub fn new(t: &MuTable, upto: u64, weight: i32) -> Result<Self> {
        if upto > t.limit() {
            return Err(Error::OutOfRange {
                x: upto as f64,
                limit: t.limit() as f64,
            });
        }
        let mut at_int = Vec::with_capacity(upto as usize + 1);
        at_int.push(0.0);
        if upto >= 1 {
            at_int.push(0.0);
        }
        let mut acc = CompensatedSum::new();
        for n in 1..upto {
            let m = t.mertens_at(n).unsigned_abs();
            if m != 0 {
                acc.add(m as f64 * power_piece(n as f64, (n + 1) as f64, weight));
            }
            at_int.push(acc.value());
        }
        Ok(Self { weight, at_int })
    }

    pub fn weight(&self) -> i32 {
        self.weight
    }

    pub fn upto(&self) -> u64 {
        (self.at_int.len() - 1) as u64
    }

    /// ∫_1^x |M(t)| t^w dt for 1 ≤ x ≤ upto (zero for x < 1).
    pub fn eval(&self, t: &MuTable, x: f64) -> f64 {
        if x < 1.0 {
            return 0.0;
        }
        let n = x.floor() as u64;
        let base = self.at_int[n as usize];
        let m = t.mertens_at(n).unsigned_abs();
        if m == 0 || x == n as f64 {
            base
        } else {
            base + m as f64 * power_piece(n as f64, x, self.weight)
        }
    }
}

/// ∫_1^x |M(t)| t^w dt, evaluated exactly piece by piece since M is
/// constant on each [n, n+1).
pub fn abs_mertens_integral(t: &MuTable, x: f64, weight: i32) -> Result<f64> {
    let n = t.check_range(x)?;
    if x < 1.0 {
        return Err(Error::InvalidArgument(format!("integral needs x >= 1, got {x}")));
    }
    let table = AbsMertensIntegral::new(t, n, weight)?;
    Ok(table.eval(t, x))
}

/// m(n) at every integer 0..=upto, compensated.
pub fn m_prefix(t: &MuTable, upto: u64) -> Vec<f64> {
    let mut out = Vec::with_capacity(upto as usize + 1);
    out.push(0.0);
    let mut acc = CompensatedSum::new();
    for n in 1..=upto {
        let m = t.mu(n);
        if m != 0 {
            acc.add(f64::from(m) / n as f64);
        }
        out.push(acc.value());
    }
    out
}

/// Prefix values of ∫_1^n m(t) dt/t at the integers 0..=upto, with the
/// matching point evaluator. m is constant on each [n, n+1).
#[derive(Debug, Clone)]
pub struct MLogIntegral {
    m: Vec<f64>,
    at_int: Vec<f64>,
}

impl MLogIntegral {
    pub fn new(t: &MuTable, upto: u64) -> Result<Self> {
        if upto > t.limit() {
            return Err(Error::OutOfRange {
                x: upto as f64,
                limit: t.limit() as f64,
            });
        }
        let m = m_prefix(t, upto);
        let mut at_int = Vec::with_capacity(upto as usize + 1);
        at_int.push(0.0);
        if upto >= 1 {
            at_int.push(0.0);
        }
        let mut acc = CompensatedSum::new();
        for n in 1..upto {
            acc.add(m[n as usize] * arith::log_ratio((n + 1) as f64, n as f64));
            at_int.push(acc.value());
        }
        Ok(Self { m, at_int })
    }

    pub fn m_at(&self, n: u64) -> f64 {
        self.m[n as usize]
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x < 1.0 {
            return 0.0;
        }
        let n = x.floor() as u64;
        let base = self.at_int[n as usize];
        if x == n as f64 {
            base
        } else {
            base + self.m[n as usize] * arith::log_ratio(x, n as f64)
        }
    }
}

/// Largest |M(n)| / n over n in [from, upto], for finite-range diagnostics.
pub fn max_abs_mertens_ratio(t: &MuTable, from: u64, upto: u64) -> f64 {
    (from.max(1)..=upto)
        .map(|n| t.mertens_at(n).unsigned_abs() as f64 / n as f64)
        .fold(0.0, f64::max)
}
