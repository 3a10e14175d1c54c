//! Bernoulli numbers, Bernoulli polynomials b_k(X) and the periodic
//! functions B_k(x) = b_k({x}). Convention: B_1 = -1/2.

use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::arith::{self, binomial, Rational};
use crate::error::{Error, Result};

/// Order of the shared table returned by [`shared`].
pub const SHARED_KMAX: usize = 64;

#[derive(Debug, Clone)]
pub struct BernoulliTable {
    numbers: Vec<Rational>,
    /// coefficients of b_k, highest degree first
    polys: Vec<Vec<Rational>>,
    polys_f64: Vec<Vec<f64>>,
}

/// Exact table up to order `kmax`, from Σ_{j<k+1} C(k+1, j) B_j = 0.
pub fn build_bernoulli(kmax: usize) -> BernoulliTable {
    let mut numbers: Vec<Rational> = Vec::with_capacity(kmax + 1);
    numbers.push(Rational::one());
    for k in 1..=kmax {
        let mut acc = Rational::zero();
        for (j, b) in numbers.iter().enumerate() {
            if !b.is_zero() {
                acc += Rational::from_integer(binomial(k as u64 + 1, j as u64)) * b;
            }
        }
        numbers.push(-acc / arith::int(k as i64 + 1));
    }
    let polys: Vec<Vec<Rational>> = (0..=kmax)
        .map(|k| {
            (0..=k)
                .map(|j| Rational::from_integer(binomial(k as u64, j as u64)) * &numbers[j])
                .collect()
        })
        .collect();
    let polys_f64 = polys
        .iter()
        .map(|c| c.iter().map(arith::to_f64).collect())
        .collect();
    BernoulliTable {
        numbers,
        polys,
        polys_f64,
    }
}

/// A process-wide table of order [`SHARED_KMAX`].
pub fn shared() -> &'static BernoulliTable {
    static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
    TABLE.get_or_init(|| build_bernoulli(SHARED_KMAX))
}

impl BernoulliTable {
    pub fn kmax(&self) -> usize {
        self.numbers.len() - 1
    }

    fn check(&self, k: usize) -> Result<()> {
        if k > self.kmax() {
            return Err(Error::KOutOfRange { k, kmax: self.kmax() });
        }
        Ok(())
    }

    /// B_j
    pub fn number(&self, j: usize) -> Result<&Rational> {
        self.check(j)?;
        Ok(&self.numbers[j])
    }

    pub fn numbers(&self) -> &[Rational] {
        &self.numbers
    }

    /// Coefficients of b_k in descending degree; entry j is B_j·C(k, j).
    pub fn poly(&self, k: usize) -> Result<&[Rational]> {
        self.check(k)?;
        Ok(&self.polys[k])
    }

    /// b_k(q) by Horner's rule.
    pub fn eval(&self, k: usize, q: &Rational) -> Result<Rational> {
        self.check(k)?;
        let mut acc = Rational::zero();
        for c in &self.polys[k] {
            acc = acc * q + c;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, k: usize, u: f64) -> Result<f64> {
        self.check(k)?;
        Ok(self.polys_f64[k].iter().fold(0.0, |acc, c| acc * u + c))
    }

    /// B_k(x) = b_k({x}).
    pub fn periodic(&self, k: usize, x: &Rational) -> Result<Rational> {
        self.eval(k, &arith::frac_q(x))
    }

    /// Largest |b_k(u)| on [0, 1], located on a fine grid and at the endpoints.
    pub fn sup_on_unit(&self, k: usize) -> Result<f64> {
        self.check(k)?;
        let mut best: f64 = 0.0;
        for i in 0..=4096 {
            best = best.max(self.eval_f64(k, i as f64 / 4096.0)?.abs());
        }
        Ok(best)
    }
}

pub fn bernoulli_poly_eval(t: &BernoulliTable, k: usize, q: &Rational) -> Result<Rational> {
    t.eval(k, q)
}

pub fn periodic_b(t: &BernoulliTable, k: usize, x: &Rational) -> Result<Rational> {
    t.periodic(k, x)
}
