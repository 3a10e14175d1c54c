//! The summatory transforms S_f φ(x) = Σ_{n ≤ x} f(n) φ(x/n), the Möbius
//! inversion pair, the integral form ∫_1^x F(x/t) φ'(t) dt and the bound
//! α ∫_1^∞ φ(t) dt/t².
//!
//! Functions carry a capability: rational-exact evaluators give exact
//! transforms, float evaluators give compensated float sums.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::arith::{self, int, CompensatedSum, Rational};
use crate::error::{Error, Result};
use crate::mobius::{self, MuTable};
use crate::quad::{self, GaussLegendre};
use crate::report::{json_f64, ResidualTracker, VerificationReport};

pub type ExactFn = Arc<dyn Fn(&Rational) -> Rational + Send + Sync>;
pub type FloatFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Evaluator {
    Exact(ExactFn),
    Float(FloatFn),
}

/// A function on (0, ∞) that vanishes on (0, 1).
#[derive(Clone)]
pub struct StepFunctionF {
    pub name: String,
    eval: Evaluator,
}

impl std::fmt::Debug for StepFunctionF {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let cap = if self.is_exact() { "exact" } else { "float" };
        write!(f, "StepFunctionF({}, {cap})", self.name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(Rational),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(q) => arith::to_f64(q),
            Value::Float(v) => *v,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Value::Exact(q) => Some(q),
            Value::Float(_) => None,
        }
    }
}

impl StepFunctionF {
    pub fn exact<F: Fn(&Rational) -> Rational + Send + Sync + 'static>(name: &str, f: F) -> Self {
        Self {
            name: name.to_string(),
            eval: Evaluator::Exact(Arc::new(f)),
        }
    }

    pub fn float<F: Fn(f64) -> f64 + Send + Sync + 'static>(name: &str, f: F) -> Self {
        Self {
            name: name.to_string(),
            eval: Evaluator::Float(Arc::new(f)),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.eval, Evaluator::Exact(_))
    }

    /// φ(x), forced to zero on (0, 1).
    pub fn at(&self, x: &Rational) -> Value {
        let below = x < &Rational::one();
        match &self.eval {
            Evaluator::Exact(f) => Value::Exact(if below { Rational::zero() } else { f(x) }),
            Evaluator::Float(f) => Value::Float(if below { 0.0 } else { f(arith::to_f64(x)) }),
        }
    }

    pub fn at_f64(&self, x: f64) -> f64 {
        if x < 1.0 {
            return 0.0;
        }
        match &self.eval {
            Evaluator::Exact(f) => arith::from_f64(x).map(|q| arith::to_f64(&f(&q))).unwrap_or(f64::NAN),
            Evaluator::Float(f) => f(x),
        }
    }

    /// [x ≥ 1]
    pub fn indicator() -> Self {
        Self::exact("indicator", |_| Rational::one())
    }

    /// x·[x ≥ 1]
    pub fn identity() -> Self {
        Self::exact("x", |x| x.clone())
    }

    /// x^e·[x ≥ 1]
    pub fn power(e: i32) -> Self {
        Self::exact(&format!("x^{e}"), move |x| arith::rational_pow(x, e).unwrap_or_else(|_| Rational::zero()))
    }

    /// ⌊x⌋
    pub fn floor() -> Self {
        Self::exact("floor", |x| Rational::from_integer(arith::floor_q(x)))
    }

    /// x·H(x)
    pub fn x_harmonic() -> Self {
        Self::exact("x*H(x)", |x| {
            let n = arith::floor_u64(x).unwrap_or(0);
            let h = mobius::sum_rationals((1..=n).map(|k| arith::rat(1, k as i64)).collect());
            x * h
        })
    }

    /// The polynomial Σ c_j x^j on [1, ∞).
    pub fn polynomial(coeffs: Vec<Rational>) -> Self {
        Self::exact("polynomial", move |x| {
            coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
        })
    }
}

/// The weights f(n) of S_f.
#[derive(Clone)]
pub enum Weights<'a> {
    One,
    Mobius(&'a MuTable),
    Custom(Arc<dyn Fn(u64) -> Rational + Send + Sync + 'a>),
}

impl Weights<'_> {
    pub fn at(&self, n: u64) -> Rational {
        match self {
            Weights::One => Rational::one(),
            Weights::Mobius(t) => int(i64::from(t.mu(n))),
            Weights::Custom(f) => f(n),
        }
    }

    fn at_f64(&self, n: u64) -> f64 {
        match self {
            Weights::One => 1.0,
            Weights::Mobius(t) => f64::from(t.mu(n)),
            Weights::Custom(f) => arith::to_f64(&f(n)),
        }
    }

    fn is_zero_at(&self, n: u64) -> bool {
        match self {
            Weights::One => false,
            Weights::Mobius(t) => t.mu(n) == 0,
            Weights::Custom(_) => false,
        }
    }

    fn check(&self, n: u64) -> Result<()> {
        if let Weights::Mobius(t) = self {
            if n > t.limit() {
                return Err(Error::OutOfRange {
                    x: n as f64,
                    limit: t.limit() as f64,
                });
            }
        }
        Ok(())
    }
}

fn positive(x: &Rational) -> Result<()> {
    if x <= &Rational::zero() {
        return Err(Error::InvalidArgument("transforms need x > 0".into()));
    }
    Ok(())
}

/// S_f φ(x) = Σ_{n ≤ x} f(n) φ(x/n); f ≡ 1 when `weights` is `None`.
pub fn riemann_transform(phi: &StepFunctionF, x: &Rational, weights: Option<&Weights>) -> Result<Value> {
    positive(x)?;
    let w = weights.cloned().unwrap_or(Weights::One);
    let n_max = arith::floor_u64(x)?;
    w.check(n_max)?;
    if phi.is_exact() {
        let terms = (1..=n_max)
            .filter(|&n| !w.is_zero_at(n))
            .filter_map(|n| {
                let v = phi.at(&(x / int(n as i64)));
                v.exact().map(|q| w.at(n) * q)
            })
            .collect();
        Ok(Value::Exact(mobius::sum_rationals(terms)))
    } else {
        let s: CompensatedSum = (1..=n_max)
            .filter(|&n| !w.is_zero_at(n))
            .map(|n| w.at_f64(n) * phi.at(&(x / int(n as i64))).to_f64())
            .collect();
        Ok(Value::Float(s.value()))
    }
}

/// S_μ φ(x) = Σ_{n ≤ x} μ(n) φ(x/n).
pub fn mobius_transform(phi: &StepFunctionF, x: &Rational, mu: &MuTable) -> Result<Value> {
    riemann_transform(phi, x, Some(&Weights::Mobius(mu)))
}

/// Σ_{n ≤ x} outer(n) Σ_{m ≤ x/n} inner(m) φ(x/(nm)).
fn double_sum(phi: &StepFunctionF, x: &Rational, outer: &Weights, inner: &Weights) -> Result<Value> {
    positive(x)?;
    let n_max = arith::floor_u64(x)?;
    outer.check(n_max)?;
    inner.check(n_max)?;
    if phi.is_exact() {
        let mut terms = Vec::new();
        for n in (1..=n_max).filter(|&n| !outer.is_zero_at(n)) {
            let y = x / int(n as i64);
            let fo = outer.at(n);
            for m in (1..=n_max / n).filter(|&m| !inner.is_zero_at(m)) {
                if let Value::Exact(v) = phi.at(&(&y / int(m as i64))) {
                    terms.push(&fo * inner.at(m) * v);
                }
            }
        }
        Ok(Value::Exact(mobius::sum_rationals(terms)))
    } else {
        let mut acc = CompensatedSum::new();
        for n in (1..=n_max).filter(|&n| !outer.is_zero_at(n)) {
            let y = x / int(n as i64);
            let fo = outer.at_f64(n);
            for m in (1..=n_max / n).filter(|&m| !inner.is_zero_at(m)) {
                acc.add(fo * inner.at_f64(m) * phi.at(&(&y / int(m as i64))).to_f64());
            }
        }
        Ok(Value::Float(acc.value()))
    }
}

/// (S_μ(S₁ φ)(x), S₁(S_μ φ)(x)).
pub fn inversion_pair(phi: &StepFunctionF, x: &Rational, mu: &MuTable) -> Result<(Value, Value)> {
    let a = double_sum(phi, x, &Weights::Mobius(mu), &Weights::One)?;
    let b = double_sum(phi, x, &Weights::One, &Weights::Mobius(mu))?;
    Ok((a, b))
}

/// Checks S_μ(S₁ φ) = φ and S₁(S_μ φ) = φ on every grid point; exact for
/// rational-exact φ, otherwise to `tol` relative to max(1, |φ(x)|).
pub fn inversion_roundtrip(phi: &StepFunctionF, grid: &[Rational], mu: &MuTable, tol: f64) -> Result<VerificationReport> {
    let name = format!("inversion:{}", phi.name);
    let mut tr = if phi.is_exact() {
        ResidualTracker::exact(&name)
    } else {
        ResidualTracker::float(&name, tol)
    };
    for x in grid {
        let target = phi.at(x);
        let (a, b) = inversion_pair(phi, x, mu)?;
        let xf = arith::to_f64(x);
        match (&target, a, b) {
            (Value::Exact(t), Value::Exact(a), Value::Exact(b)) => {
                let ra = t - a;
                let rb = t - b;
                tr.observe_exact(xf, if ra.is_zero() { rb } else { ra });
            }
            (t, a, b) => {
                let t = t.to_f64();
                let scale = t.abs().max(1.0);
                let r = (t - a.to_f64()).abs().max((t - b.to_f64()).abs()) / scale;
                tr.observe_float(xf, r);
            }
        }
    }
    Ok(tr.finish())
}

/// An absolutely continuous φ with φ(1) = 0 and its derivative.
#[derive(Clone)]
pub struct AbsContinuous {
    pub phi: StepFunctionF,
    pub derivative: FloatFn,
    /// points in (1, ∞) where φ' may jump
    pub kinks_at_integers: bool,
}

impl AbsContinuous {
    pub fn new<D: Fn(f64) -> f64 + Send + Sync + 'static>(phi: StepFunctionF, derivative: D, kinks_at_integers: bool) -> Self {
        Self {
            phi,
            derivative: Arc::new(derivative),
            kinks_at_integers,
        }
    }

    /// t - 1
    pub fn t_minus_one() -> Self {
        Self::new(StepFunctionF::exact("t-1", |t| t - int(1)), |_| 1.0, false)
    }

    /// (t - 1)²
    pub fn t_minus_one_squared() -> Self {
        Self::new(
            StepFunctionF::exact("(t-1)^2", |t| {
                let d = t - int(1);
                &d * &d
            }),
            |t| 2.0 * (t - 1.0),
            false,
        )
    }
}

/// The three evaluations of S_f φ(x) for φ(1) = 0.
#[derive(Debug, Clone)]
pub struct IntegralRoutes {
    /// Σ f(n) φ(x/n)
    pub direct: Value,
    /// Σ F(n)(φ(x/n) - φ(max(x/(n+1), 1))), the integral taken piecewise
    pub piecewise: Value,
    /// adaptive quadrature of F(x/t) φ'(t) over [1, x]
    pub quadrature: f64,
}

impl IntegralRoutes {
    pub fn exact_agree(&self) -> Option<bool> {
        match (&self.direct, &self.piecewise) {
            (Value::Exact(a), Value::Exact(b)) => Some(a == b),
            _ => None,
        }
    }

    pub fn max_float_gap(&self) -> f64 {
        let d = self.direct.to_f64();
        (d - self.piecewise.to_f64()).abs().max((d - self.quadrature).abs())
    }
}

pub const QUAD_TOL: f64 = 1e-10;

/// ∫_1^x F(x/t) φ'(t) dt with F the summatory function of f, evaluated
/// exactly on the steps of F and by quadrature, next to the direct sum.
pub fn transform_via_integral(f: &Weights, phi: &AbsContinuous, x: &Rational) -> Result<IntegralRoutes> {
    positive(x)?;
    if let Value::Exact(v) = phi.phi.at(&Rational::one()) {
        if !v.is_zero() {
            return Err(Error::InvalidArgument("transform_via_integral needs phi(1) = 0".into()));
        }
    }
    let direct = riemann_transform(&phi.phi, x, Some(f))?;
    let n_max = arith::floor_u64(x)?;
    f.check(n_max)?;
    let mut prefix = Vec::with_capacity(n_max as usize + 1);
    prefix.push(Rational::zero());
    for n in 1..=n_max {
        let next = prefix[n as usize - 1].clone() + f.at(n);
        prefix.push(next);
    }
    let one = Rational::one();
    let lower = |n: u64| -> Rational {
        let y = x / int(n as i64 + 1);
        if y < one {
            one.clone()
        } else {
            y
        }
    };
    let piecewise = if phi.phi.is_exact() {
        let terms = (1..=n_max)
            .filter(|&n| !prefix[n as usize].is_zero())
            .filter_map(|n| {
                let hi = phi.phi.at(&(x / int(n as i64)));
                let lo = phi.phi.at(&lower(n));
                match (hi, lo) {
                    (Value::Exact(h), Value::Exact(l)) => Some(&prefix[n as usize] * (h - l)),
                    _ => None,
                }
            })
            .collect();
        Value::Exact(mobius::sum_rationals(terms))
    } else {
        let s: CompensatedSum = (1..=n_max)
            .map(|n| {
                let h = phi.phi.at(&(x / int(n as i64))).to_f64();
                let l = phi.phi.at(&lower(n)).to_f64();
                arith::to_f64(&prefix[n as usize]) * (h - l)
            })
            .collect();
        Value::Float(s.value())
    };

    let xf = arith::to_f64(x);
    let prefix_f: Vec<f64> = prefix.iter().map(arith::to_f64).collect();
    let mut breaks: Vec<f64> = (1..=n_max).map(|n| xf / n as f64).collect();
    if phi.kinks_at_integers {
        breaks.extend((2..=n_max).map(|n| n as f64));
    }
    let deriv = phi.derivative.clone();
    let integrand = |t: f64| {
        let idx = ((xf / t).floor() as usize).min(n_max as usize);
        prefix_f[idx] * deriv(t)
    };
    let scale = direct.to_f64().abs().max(1.0);
    let quadrature = if xf > 1.0 {
        quad::adaptive(&integrand, 1.0, xf, &breaks, QUAD_TOL * scale)?
    } else {
        0.0
    };
    Ok(IntegralRoutes {
        direct,
        piecewise,
        quadrature,
    })
}

/// α ∫_1^∞ φ(t) dt/t² with its truncation data.
#[derive(Debug, Clone)]
pub struct LimsupEstimate {
    pub alpha: f64,
    /// α times the estimated integral
    pub value: f64,
    /// ∫_1^T φ(t) dt/t²
    pub truncated: f64,
    /// extrapolated ∫_T^∞
    pub tail: f64,
    pub error_bound: f64,
    pub t_max: u64,
    /// successive increment ratios over doublings of T
    pub ratios: Vec<f64>,
}

pub const LIMSUP_T_MAX: u64 = 1 << 20;

/// Integrates φ(t)/t² over unit intervals up to T = 2^20, recording the
/// partial integral at each power of two. The increments over doublings
/// decay geometrically for convergent integrals; when the last three ratios
/// all exceed 3/4 the integral is reported divergent.
pub fn limsup_bound_estimate<F: Fn(f64) -> f64>(phi: F, alpha: f64) -> Result<LimsupEstimate> {
    let g = GaussLegendre::new(20);
    let mut acc = CompensatedSum::new();
    let mut marks = Vec::new();
    let mut next_mark = 2u64;
    for n in 1..LIMSUP_T_MAX {
        let nf = n as f64;
        acc.add(g.integrate(nf, nf + 1.0, |t| phi(t) / (t * t)));
        if n + 1 == next_mark {
            marks.push(acc.value());
            next_mark *= 2;
        }
    }
    let truncated = acc.value();
    let mut incs = Vec::with_capacity(marks.len());
    for w in marks.windows(2) {
        incs.push(w[1] - w[0]);
    }
    let tiny = 1e-300;
    let mut ratios = Vec::new();
    for w in incs.windows(2) {
        ratios.push(if w[0].abs() <= tiny { 0.0 } else { w[1] / w[0] });
    }
    let last3 = &ratios[ratios.len().saturating_sub(3)..];
    if last3.len() == 3 && last3.iter().all(|&r| r > 0.75) {
        return Err(Error::Divergent {
            ratio: *last3.last().unwrap_or(&1.0),
        });
    }
    let d = *incs.last().unwrap_or(&0.0);
    let r = *ratios.last().unwrap_or(&0.0);
    let r_prev = ratios.len().checked_sub(2).map(|i| ratios[i]).unwrap_or(r);
    let geometric = |r: f64| if d.abs() <= tiny || !(r.abs() < 1.0) { 0.0 } else { d * r / (1.0 - r) };
    let tail = geometric(r);
    let error_bound = (tail - geometric(r_prev)).abs() + 1e-15 * truncated.abs();
    Ok(LimsupEstimate {
        alpha,
        value: alpha * (truncated + tail),
        truncated,
        tail,
        error_bound: alpha.abs() * error_bound,
        t_max: LIMSUP_T_MAX,
        ratios,
    })
}

/// Detail map for a [`LimsupEstimate`], for reports.
pub fn limsup_details(e: &LimsupEstimate) -> serde_json::Value {
    serde_json::json!({
        "alpha": json_f64(e.alpha),
        "value": json_f64(e.value),
        "truncated": json_f64(e.truncated),
        "tail": json_f64(e.tail),
        "error_bound": json_f64(e.error_bound),
        "t_max": e.t_max,
    })
}
