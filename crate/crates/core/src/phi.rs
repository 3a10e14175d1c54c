//! The normalized Bernoulli differences φ_k, the correction terms ε₁, ε₂,
//! ε₃, β₂ and their derivatives, and the tail integrals of B_k(t)/t^{k+1}.
//!
//! Inside identity checks fractional parts are taken on exact rationals.
//! Float evaluators split x into (floor, fractional part) once, and the
//! derivative evaluators refuse integer points unless a side is given,
//! since φ₂' jumps at every integer.

use num_traits::{One, Zero};

use crate::arith::{self, int, CompensatedSum, Rational, EULER_GAMMA};
use crate::bernoulli::{self, BernoulliTable};
use crate::error::{Error, Result};
use crate::mobius;
use crate::quad::GaussLegendre;

/// One-sided limit selector for evaluations at integer points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// φ_k(x) = (b_k(x) - B_k(x)) / x^{k-1}, in the expanded form
/// Σ_{j<k} B_j C(k,j) x^{1-j} - Σ_{j<k} B_j C(k,j) {x}^{k-j} / x^{k-1}.
/// Zero for x < 1.
pub fn phi(k: usize, x: &Rational) -> Result<Rational> {
    if k > bernoulli::SHARED_KMAX {
        return phi_with(&bernoulli::build_bernoulli(k), k, x);
    }
    phi_with(bernoulli::shared(), k, x)
}

pub fn phi_with(t: &BernoulliTable, k: usize, x: &Rational) -> Result<Rational> {
    if k == 0 {
        return Err(Error::InvalidArgument("phi_k needs k >= 1".into()));
    }
    if x < &Rational::one() {
        return Ok(Rational::zero());
    }
    let coeffs = t.poly(k)?;
    let f = arith::frac_q(x);
    let inv = x.recip();
    let mut main = Rational::zero();
    let mut x_pow = x.clone(); // x^{1-j}
    let mut rem = Rational::zero();
    for (j, c) in coeffs.iter().take(k).enumerate() {
        if !c.is_zero() {
            main += c * &x_pow;
            rem += c * arith::rational_pow(&f, (k - j) as i32)?;
        }
        x_pow *= &inv;
    }
    Ok(main - rem * arith::rational_pow(&inv, k as i32 - 1)?)
}

/// φ_k(x) = k x^{1-k} Σ_{n ≤ x} (x - n)^{k-1}.
pub fn phi_telescope(k: usize, x: &Rational) -> Result<Rational> {
    if k == 0 {
        return Err(Error::InvalidArgument("phi_k needs k >= 1".into()));
    }
    if x < &Rational::one() {
        return Ok(Rational::zero());
    }
    let n = arith::floor_u64(x)?;
    let mut acc = Rational::zero();
    for m in 1..=n {
        acc += arith::rational_pow(&(x - int(m as i64)), k as i32 - 1)?;
    }
    Ok(int(k as i64) * acc * arith::rational_pow(x, 1 - k as i32)?)
}

fn split_q(x: &Rational, side: Option<Side>) -> Result<Rational> {
    if arith::is_integer(x) {
        match side {
            Some(Side::Left) => Ok(Rational::one()),
            Some(Side::Right) => Ok(Rational::zero()),
            None => Err(Error::IntegerPoint(arith::to_f64(x))),
        }
    } else {
        Ok(arith::frac_q(x))
    }
}

/// (floor, fractional part) of x, with the one-sided convention at integers.
fn split_f64(x: f64, side: Option<Side>) -> Result<(f64, f64)> {
    let n = x.floor();
    if x == n {
        match side {
            Some(Side::Left) => Ok((n - 1.0, 1.0)),
            Some(Side::Right) => Ok((n, 0.0)),
            None => Err(Error::IntegerPoint(x)),
        }
    } else {
        Ok((n, x - n))
    }
}

fn need_at_least_one(x: f64) -> Result<()> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("argument must be >= 1, got {x}")));
    }
    Ok(())
}

fn p3(f: &Rational) -> Rational {
    // f³ - (3/2) f² + f/2
    f * f * f - arith::rat(3, 2) * f * f + f / int(2)
}

fn p4(f: &Rational) -> Rational {
    // f⁴ - 2 f³ + f²
    let f2 = f * f;
    &f2 * &f2 - int(2) * &f2 * f + f2
}

fn p3_f(f: f64) -> f64 {
    f * f * f - 1.5 * f * f + 0.5 * f
}

fn p4_f(f: f64) -> f64 {
    let f2 = f * f;
    f2 * f2 - 2.0 * f2 * f + f2
}

/// ε₁(x) = 1/3 - 1/(3x) + (4/3) P₃({x})/x² - (1/3) P₄({x})/x³, the
/// remainder in (4/3)φ₃ - (1/3)φ₄ = x - 1 - ε₁.
pub fn epsilon1(x: &Rational) -> Result<Rational> {
    if x < &Rational::one() {
        return Err(Error::InvalidArgument("epsilon1 needs x >= 1".into()));
    }
    let f = arith::frac_q(x);
    let x2 = x * x;
    Ok(arith::rat(1, 3) - (int(3) * x).recip() + arith::rat(4, 3) * p3(&f) / &x2
        - arith::rat(1, 3) * p4(&f) / (x2 * x))
}

pub fn epsilon1_f64(x: f64) -> f64 {
    let f = x - x.floor();
    epsilon1_parts(x, f)
}

/// ε₁ at `x` whose fractional part is `f`, for callers that already know it.
pub fn epsilon1_parts(x: f64, f: f64) -> f64 {
    1.0 / 3.0 - 1.0 / (3.0 * x) + (4.0 / 3.0) * p3_f(f) / (x * x) - p4_f(f) / (3.0 * x * x * x)
}

/// ε₁'(x), differentiated term by term from the definition of ε₁.
pub fn epsilon1_prime(x: &Rational, side: Option<Side>) -> Result<Rational> {
    let f = split_q(x, side)?;
    let x2 = x * x;
    let x3 = &x2 * x;
    let x4 = &x3 * x;
    let p3v = p3(&f);
    Ok((int(3) * &x2).recip()
        + int(4) * (&f * &f - &f + arith::rat(1, 6)) / &x2
        - arith::rat(8, 3) * &p3v / &x3
        - arith::rat(4, 3) * &p3v / &x3
        + p4(&f) / x4)
}

pub fn epsilon1_prime_f64(x: f64, side: Option<Side>) -> Result<f64> {
    let (_, f) = split_f64(x, side)?;
    let (x2, x3, x4) = (x * x, x * x * x, x * x * x * x);
    let p3v = p3_f(f);
    Ok(1.0 / (3.0 * x2) + 4.0 * (f * f - f + 1.0 / 6.0) / x2 - (8.0 / 3.0) * p3v / x3
        - (4.0 / 3.0) * p3v / x3
        + p4_f(f) / x4)
}

/// φ₂'(x) = 1 - ((2{x} - 1)x - {x}² + {x}) / x².
pub fn phi2_prime(x: &Rational, side: Option<Side>) -> Result<Rational> {
    let f = split_q(x, side)?;
    let num = (int(2) * &f - int(1)) * x - &f * &f + &f;
    Ok(Rational::one() - num / (x * x))
}

pub fn phi2_prime_f64(x: f64, side: Option<Side>) -> Result<f64> {
    let (_, f) = split_f64(x, side)?;
    Ok(1.0 - ((2.0 * f - 1.0) * x - f * f + f) / (x * x))
}

/// ε₂ at an integer m ≥ 1: H(m) - log m - γ - 1/(2m).
fn epsilon2_integer(m: u64) -> f64 {
    if m < 64 {
        let mf = m as f64;
        let mut s = CompensatedSum::new();
        s.add(mobius::harmonic_f64(m));
        s.add(-mf.ln());
        s.add(-EULER_GAMMA);
        s.add(-0.5 / mf);
        return s.value();
    }
    // Euler–Maclaurin remainder: -Σ B_{2j} / (2j m^{2j})
    let inv2 = 1.0 / (m as f64 * m as f64);
    let coeffs = [-1.0 / 12.0, 1.0 / 120.0, -1.0 / 252.0, 1.0 / 240.0, -1.0 / 132.0, 691.0 / 32760.0];
    let mut acc = 0.0;
    for c in coeffs.iter().rev() {
        acc = (acc + c) * inv2;
    }
    acc
}

/// log(1 + s) - s without cancellation.
fn log1p_minus(s: f64) -> f64 {
    if s.abs() < 1e-2 {
        let mut term = s;
        let mut acc = 0.0;
        for j in 2..=14 {
            term *= -s;
            acc += term / j as f64;
        }
        acc
    } else {
        s.ln_1p() - s
    }
}

/// ε₂(x) = ∫_x^∞ ({t} - 1/2) dt/t², integrated exactly from x up to the next
/// integer and continued with the Euler–Maclaurin value there.
pub fn epsilon2(x: f64) -> Result<f64> {
    need_at_least_one(x)?;
    let n = x.floor();
    let f = x - n;
    if f == 0.0 {
        return Ok(epsilon2_integer(n as u64));
    }
    let next = n + 1.0;
    let s = (1.0 - f) / x;
    // ∫_x^{n+1} (t - n - 1/2)/t² dt = log(1+s) - s + s/(2(n+1))
    let piece = log1p_minus(s) + 0.5 * s / next;
    Ok(piece + epsilon2_integer(next as u64))
}

/// ε₂ by the rearranged expansion H(x) - log x - γ - (1/2 - {x})/x.
pub fn epsilon2_via_harmonic(x: f64) -> Result<f64> {
    need_at_least_one(x)?;
    let n = x.floor();
    let f = x - n;
    let mut s = CompensatedSum::new();
    s.add(mobius::harmonic_f64(n as u64));
    s.add(-x.ln());
    s.add(-EULER_GAMMA);
    s.add(-(0.5 - f) / x);
    Ok(s.value())
}

/// ε₃(x) = γ - 1/2 + x ε₂(x) + (γ - 1)({x}² - {x})/x.
pub fn epsilon3(x: f64) -> Result<f64> {
    need_at_least_one(x)?;
    let f = x - x.floor();
    Ok(EULER_GAMMA - 0.5 + x * epsilon2(x)? + (EULER_GAMMA - 1.0) * (f * f - f) / x)
}

/// ε₃'(x) = H(x) - log x - γ + (γ - 1)((2{x} - 1)x - {x}² + {x})/x², away
/// from integers. H(x) - log x - γ is taken as (1/2 - {x})/x + ε₂(x).
pub fn epsilon3_prime(x: f64, side: Option<Side>) -> Result<f64> {
    need_at_least_one(x)?;
    let (_, f) = split_f64(x, side)?;
    let h_minus_log = (0.5 - f) / x + epsilon2(x)?;
    Ok(h_minus_log + (EULER_GAMMA - 1.0) * ((2.0 * f - 1.0) * x - f * f + f) / (x * x))
}

/// ε₃' with H(x) summed directly, for cross-checking [`epsilon3_prime`].
pub fn epsilon3_prime_direct(x: f64, side: Option<Side>) -> Result<f64> {
    need_at_least_one(x)?;
    let (n, f) = split_f64(x, side)?;
    let mut s = CompensatedSum::new();
    s.add(mobius::harmonic_f64(n as u64));
    s.add(-x.ln());
    s.add(-EULER_GAMMA);
    s.add((EULER_GAMMA - 1.0) * ((2.0 * f - 1.0) * x - f * f + f) / (x * x));
    Ok(s.value())
}

/// β₂(x) = Σ_{n ≤ x} (x/n - n/x), exact.
pub fn beta2(x: &Rational) -> Result<Rational> {
    if x < &Rational::one() {
        return Err(Error::InvalidArgument("beta2 needs x >= 1".into()));
    }
    let n = arith::floor_u64(x)?;
    let inv = x.recip();
    let terms = (1..=n)
        .map(|k| x / int(k as i64) - int(k as i64) * &inv)
        .collect();
    Ok(mobius::sum_rationals(terms))
}

/// β₂(x) = x(log x + γ - 1/2) + x ε₂(x) - ({x}² - {x})/(2x).
pub fn beta2_analytic(x: f64) -> Result<f64> {
    need_at_least_one(x)?;
    let f = x - x.floor();
    Ok(x * (x.ln() + EULER_GAMMA - 0.5) + x * epsilon2(x)? - (f * f - f) / (2.0 * x))
}

/// Both sides of ∫_1^∞ B_k(t) dt/t^{k+1} = 1 + Σ_{j=1}^k B_j/j - γ.
#[derive(Debug, Clone)]
pub struct TailIntegral {
    pub k: usize,
    /// 1 + Σ B_j/j
    pub rational_part: Rational,
    pub closed_form: f64,
    /// Σ over [n, n+1] for n < cutoff
    pub truncated: f64,
    /// bound on the omitted ∫_cutoff^∞
    pub tail_bound: f64,
    pub cutoff: u64,
}

impl TailIntegral {
    pub fn residual(&self) -> f64 {
        (self.closed_form - self.truncated).abs()
    }

    pub fn agrees(&self) -> bool {
        self.residual() <= self.tail_bound + 1e-9
    }
}

pub const DEFAULT_TAIL_CUTOFF: u64 = 1_000_000;

/// Evaluates both sides of the tail identity for B_k. Each unit interval is
/// integrated with a 20-point Gauss rule, which is exact to rounding there
/// since the integrand is smooth on [n, n+1].
pub fn bernoulli_tail_integral(k: usize, cutoff: u64) -> Result<TailIntegral> {
    if k == 0 {
        return Err(Error::InvalidArgument("tail integral needs k >= 1".into()));
    }
    if cutoff < 2 {
        return Err(Error::InvalidArgument("cutoff must be at least 2".into()));
    }
    let t = bernoulli::shared();
    let mut rational_part = Rational::one();
    for j in 1..=k {
        rational_part += t.number(j)? / int(j as i64);
    }
    let closed_form = arith::to_f64(&rational_part) - EULER_GAMMA;
    let g = GaussLegendre::new(20);
    let power = -(k as i32 + 1);
    let mut acc = CompensatedSum::new();
    for n in 1..cutoff {
        let nf = n as f64;
        acc.add(g.integrate_unit(|u| {
            t.eval_f64(k, u).unwrap_or(f64::NAN) * (nf + u).powi(power)
        }));
    }
    let tail_bound = t.sup_on_unit(k)? / (k as f64 * (cutoff as f64).powi(k as i32));
    Ok(TailIntegral {
        k,
        rational_part,
        closed_form,
        truncated: acc.value(),
        tail_bound,
        cutoff,
    })
}

/// The weighted integral ∫_1^∞ ε₁(t) dt/t² together with the value 271/360 - γ
/// obtained by writing the {t}⁴ polynomial in ε₁ as the periodic B₄(t). That
/// polynomial is B₄(t) + 1/30, so the two differ by ∫_1^∞ dt/(90 t⁵) = 1/360.
#[derive(Debug, Clone)]
pub struct Epsilon1Integral {
    /// 271/360
    pub stated_rational: Rational,
    pub stated: f64,
    /// quadrature of 1/(3t²) - 1/(3t³) + (4/3)B₃(t)/t⁴ - (1/3)B₄(t)/t⁵
    pub b_form_numeric: f64,
    /// rational part of ∫ ε₁ dt/t², from the k = 3, 4 tail identities and the B₄ shift
    pub rational_part: Rational,
    pub closed_form: f64,
    /// direct quadrature of ε₁(t)/t² up to the cutoff plus the analytic main tail
    pub numeric: f64,
    pub tail_bound: f64,
    pub cutoff: u64,
}

impl Epsilon1Integral {
    pub fn residual(&self) -> f64 {
        (self.numeric - self.closed_form).abs()
    }

    pub fn stated_residual(&self) -> f64 {
        (self.numeric - self.stated).abs()
    }

    pub fn b_form_residual(&self) -> f64 {
        (self.b_form_numeric - self.stated).abs()
    }
}

pub fn epsilon1_weighted_integral(cutoff: u64) -> Result<Epsilon1Integral> {
    if cutoff < 2 {
        return Err(Error::InvalidArgument("cutoff must be at least 2".into()));
    }
    let t = bernoulli::shared();
    let tail = |k: usize| -> Result<Rational> {
        let mut r = Rational::one();
        for j in 1..=k {
            r += t.number(j)? / int(j as i64);
        }
        Ok(r)
    };
    // ∫ (1/(3t²) - 1/(3t³)) = 1/6 over [1, ∞); the gammas combine to -γ.
    let stated_rational = arith::rat(1, 6) + arith::rat(4, 3) * tail(3)? - arith::rat(1, 3) * tail(4)?;
    let b4_shift = arith::rat(1, 3) * (-t.number(4)?) / int(4);
    let rational_part = &stated_rational - b4_shift;

    let g = GaussLegendre::new(20);
    let mut direct = CompensatedSum::new();
    let mut b_form = CompensatedSum::new();
    for n in 1..cutoff {
        let nf = n as f64;
        direct.add(g.integrate_unit(|u| {
            let x = nf + u;
            epsilon1_parts(x, u) / (x * x)
        }));
        b_form.add(g.integrate_unit(|u| {
            let x = nf + u;
            let x2 = x * x;
            1.0 / (3.0 * x2) - 1.0 / (3.0 * x2 * x) + (4.0 / 3.0) * p3_f(u) / (x2 * x2)
                - (p4_f(u) - 1.0 / 30.0) / (3.0 * x2 * x2 * x)
        }));
    }
    let c = cutoff as f64;
    // ∫_c^∞ (1/3 - 1/(3t)) dt/t²
    let main_tail = 1.0 / (3.0 * c) - 1.0 / (6.0 * c * c);
    direct.add(main_tail);
    b_form.add(main_tail);
    // |P₃| ≤ √3/36 and |P₄|, |B₄| ≤ 1/16 bound the rest
    let tail_bound = (4.0 / 3.0) * (3f64.sqrt() / 36.0) / (3.0 * c.powi(3)) + (1.0 / 48.0) / (4.0 * c.powi(4));
    Ok(Epsilon1Integral {
        stated: arith::to_f64(&stated_rational) - EULER_GAMMA,
        stated_rational,
        b_form_numeric: b_form.value(),
        closed_form: arith::to_f64(&rational_part) - EULER_GAMMA,
        rational_part,
        numeric: direct.value(),
        tail_bound,
        cutoff,
    })
}

/// Largest |φ_k(x) - (x - k/2)|·x over a grid of `samples` rationals in
/// [lo, hi]; the fitted constant for φ_k = x - k/2 + O(1/x).
pub fn phi_asymptotic_constant(k: usize, lo: u64, hi: u64, samples: u64) -> Result<f64> {
    let mut best: f64 = 0.0;
    let half_k = arith::rat(k as i64, 2);
    for i in 0..=samples {
        let x = int(lo as i64) + arith::rat(((hi - lo) * i) as i64, samples as i64) + arith::rat(1, 7);
        let d = phi(k, &x)? - (&x - &half_k);
        best = best.max((arith::to_f64(&d) * arith::to_f64(&x)).abs());
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    #[test]
    fn phi_examples() {
        assert_eq!(phi(1, &rat(5, 2)).unwrap(), int(2));
        assert_eq!(phi(1, &int(1)).unwrap(), int(1));
        for k in 2..=10 {
            assert_eq!(phi(k, &int(1)).unwrap(), int(0), "k = {k}");
        }
        assert_eq!(phi(2, &rat(3, 2)).unwrap(), rat(2, 3));
        assert_eq!(phi(3, &rat(1, 2)).unwrap(), int(0));
        assert!(phi(0, &int(2)).is_err());
    }

    #[test]
    fn phi_explicit_forms() {
        // φ₂ = x - 1 - ({x}² - {x})/x and φ₄ = x - 2 + 1/x - ({x}⁴ - 2{x}³ + {x}²)/x³
        for x in [rat(7, 3), rat(11, 2), rat(101, 9), int(4)] {
            let f = arith::frac_q(&x);
            let phi2 = &x - int(1) - (&f * &f - &f) / &x;
            assert_eq!(phi(2, &x).unwrap(), phi2);
            let phi4 = &x - int(2) + x.recip() - p4(&f) / (&x * &x * &x);
            assert_eq!(phi(4, &x).unwrap(), phi4);
        }
    }

    #[test]
    fn telescope_examples() {
        assert_eq!(phi_telescope(2, &int(2)).unwrap(), int(1));
        assert_eq!(phi_telescope(1, &rat(5, 2)).unwrap(), int(2));
        assert_eq!(phi_telescope(3, &int(2)).unwrap(), rat(3, 4));
        assert_eq!(phi(3, &int(2)).unwrap(), rat(3, 4));
        assert_eq!(phi_telescope(4, &rat(1, 3)).unwrap(), int(0));
    }

    #[test]
    fn routes_agree_on_grid() {
        for k in 1..=10 {
            for n in 1..=40i64 {
                for d in [1, 2, 3, 7] {
                    let x = rat(n * 5 + 1, d).max(int(1));
                    assert_eq!(phi(k, &x).unwrap(), phi_telescope(k, &x).unwrap(), "k={k} x={x}");
                }
            }
        }
    }

    /// ∫_a^b p(t) dt for p known only through evaluations, exact for
    /// polynomials of degree ≤ `degree` via interpolation at equispaced nodes.
    fn integrate_poly_piece<F: Fn(&Rational) -> Rational>(p: F, a: &Rational, b: &Rational, degree: usize) -> Rational {
        let m = degree + 1;
        let h = (b - a) / int(degree.max(1) as i64);
        let nodes: Vec<Rational> = (0..m).map(|i| a + &h * int(i as i64)).collect();
        let values: Vec<Rational> = nodes.iter().map(&p).collect();
        // Newton divided differences -> monomial coefficients
        let mut dd = values.clone();
        for j in 1..m {
            for i in (j..m).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&nodes[i] - &nodes[i - j]);
            }
        }
        let mut coeffs = vec![Rational::zero(); m];
        for i in (0..m).rev() {
            // coeffs = coeffs * (t - nodes[i]) + dd[i]
            let mut next = vec![Rational::zero(); m];
            for (d, c) in coeffs.iter().enumerate() {
                if d + 1 < m {
                    next[d + 1] += c;
                }
                next[d] -= c * &nodes[i];
            }
            next[0] += &dd[i];
            coeffs = next;
        }
        let mut acc = Rational::zero();
        for (d, c) in coeffs.iter().enumerate() {
            let e = d as i32 + 1;
            acc += c * (arith::rational_pow(b, e).unwrap() - arith::rational_pow(a, e).unwrap()) / int(e as i64);
        }
        acc
    }

    #[test]
    fn cesaro_recursion_exact() {
        for k in 1..=4usize {
            for x in [int(1), rat(5, 2), int(7), rat(59, 3), int(20)] {
                let mut integral = Rational::zero();
                let mut lo = int(1);
                while lo < x {
                    let hi = (&lo + int(1)).min(x.clone());
                    let base = lo.clone();
                    let integrand =
                        |t: &Rational| arith::rational_pow(t, k as i32 - 1).unwrap() * phi_piece(k, t, &base);
                    integral += integrate_poly_piece(integrand, &lo, &hi, 2 * k + 1);
                    lo = hi;
                }
                let rhs = int(k as i64 + 1) * arith::rational_pow(&x, -(k as i32)).unwrap() * integral;
                assert_eq!(phi(k + 1, &x).unwrap(), rhs, "k={k} x={x}");
            }
        }
    }

    /// φ_k(t) using the floor `base` of the piece, so the right endpoint of
    /// [base, base+1] sees the left-continuous branch.
    fn phi_piece(k: usize, t: &Rational, base: &Rational) -> Rational {
        let f = t - base;
        let b = bernoulli::shared();
        (b.eval(k, t).unwrap() - b.eval(k, &f).unwrap()) * arith::rational_pow(t, 1 - k as i32).unwrap()
    }

    #[test]
    fn asymptotic_constant_is_bounded() {
        for k in 2..=6 {
            let c = phi_asymptotic_constant(k, 1_000, 10_000, 200).unwrap();
            assert!(c.is_finite() && c < 10.0, "k = {k}, C = {c}");
        }
    }

    #[test]
    fn fractional_linear_form_bounded_by_t() {
        for n in 0..=100i64 {
            for i in 0..=101i64 {
                let t = int(n) + rat(i.min(100), 101);
                let f = if i == 101 { Rational::zero() } else { arith::frac_q(&t) };
                let t = if i == 101 { int(n + 1) } else { t };
                let v = (int(2) * &f - int(1)) * &t + &f - &f * &f;
                assert!(v.clone() <= t && -v <= t, "t = {t}");
            }
        }
    }

    #[test]
    fn epsilon1_examples() {
        assert_eq!(epsilon1(&int(1)).unwrap(), int(0));
        assert_eq!(epsilon1_prime(&rat(3, 2), None).unwrap(), rat(1, 81));
        assert!(epsilon1_prime(&int(3), None).is_err());
        assert!(epsilon1_prime_f64(3.0, None).is_err());
        assert_eq!(
            epsilon1_prime(&int(3), Some(Side::Left)).unwrap(),
            epsilon1_prime(&int(3), Some(Side::Right)).unwrap()
        );
        assert!((epsilon1_f64(2.5) - arith::to_f64(&epsilon1(&rat(5, 2)).unwrap())).abs() < 1e-15);
    }

    #[test]
    fn epsilon1_is_the_phi_combination_remainder() {
        for x in [int(1), rat(3, 2), rat(17, 5), int(9), rat(1001, 13)] {
            let lhs = arith::rat(4, 3) * phi(3, &x).unwrap() - arith::rat(1, 3) * phi(4, &x).unwrap();
            assert_eq!(lhs, &x - int(1) - epsilon1(&x).unwrap(), "x = {x}");
        }
    }

    #[test]
    fn epsilon1_prime_square_identity_exact() {
        for n in 1..60i64 {
            for d in [2, 3, 5, 7, 11] {
                let x = rat(n * d + 1, d);
                let lhs = epsilon1_prime(&x, None).unwrap();
                let g = Rational::one() - phi2_prime(&x, None).unwrap();
                assert_eq!(lhs, &g * &g, "x = {x}");
                assert!(lhs >= Rational::zero());
                assert!(lhs <= (&x * &x).recip());
            }
        }
    }

    #[test]
    fn phi2_prime_jumps_at_integers() {
        let l = phi2_prime_f64(3.0, Some(Side::Left)).unwrap();
        let r = phi2_prime_f64(3.0, Some(Side::Right)).unwrap();
        assert!((l - r).abs() > 0.1);
        let gl = 1.0 - l;
        let gr = 1.0 - r;
        assert!((gl * gl - gr * gr).abs() < 1e-15);
    }

    #[test]
    fn epsilon2_examples() {
        let e1 = epsilon2(1.0).unwrap();
        assert!((e1 - (0.5 - EULER_GAMMA)).abs() < 1e-15);
        for i in 0..=20_000u64 {
            let x = 1.0 + i as f64 * 0.05;
            let e = epsilon2(x).unwrap();
            assert!(e.abs() <= 1.0 / (2.0 * x), "x = {x}");
        }
        for n in 1..=1000u64 {
            let nf = n as f64;
            assert!(epsilon2(nf).unwrap() > -1.0 / (12.0 * nf * nf), "n = {n}");
        }
    }

    #[test]
    fn epsilon2_routes_agree() {
        for i in 0..5000u64 {
            let x = 1.0 + i as f64 * 1.9993;
            let a = epsilon2(x).unwrap();
            let b = epsilon2_via_harmonic(x).unwrap();
            assert!((a - b).abs() <= 1e-12, "x = {x}: {a} vs {b}");
        }
        // integer crossover of the two branches in epsilon2_integer
        for m in 60..70u64 {
            let mf = m as f64;
            assert!((epsilon2(mf).unwrap() - epsilon2_via_harmonic(mf).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn epsilon2_matches_quadrature_of_definition() {
        // ∫_x^N ({t}-1/2)/t² by Gauss per unit piece, plus ε₂(N) tail
        let g = GaussLegendre::new(20);
        for x in [1.0, 1.5, 2.25, 10.7] {
            let n_end = 200.0;
            let mut acc = 0.0;
            let mut lo: f64 = x;
            while lo < n_end {
                let hi = (lo.floor() + 1.0).min(n_end);
                let base = lo.floor();
                acc += g.integrate(lo, hi, |t| (t - base - 0.5) / (t * t));
                lo = hi;
            }
            acc += epsilon2(n_end).unwrap();
            assert!((acc - epsilon2(x).unwrap()).abs() < 1e-14, "x = {x}");
        }
    }

    #[test]
    fn epsilon3_examples() {
        assert!(epsilon3(1.0).unwrap().abs() < 1e-15);
        let x: f64 = 1.5;
        let h = 1.0;
        let expected = h - x.ln() - EULER_GAMMA + (EULER_GAMMA - 1.0) * (0.0 * x - 0.25 + 0.5) / (x * x);
        assert!((epsilon3_prime(x, None).unwrap() - expected).abs() < 1e-14);
        assert!(epsilon3_prime(2.0, None).is_err());
    }

    #[test]
    fn epsilon3_prime_routes_and_bound() {
        for i in 0..20_000u64 {
            let x = 1.0 + (i as f64 + 0.5) * 0.049_97;
            if x == x.floor() {
                continue;
            }
            let a = epsilon3_prime(x, None).unwrap();
            let b = epsilon3_prime_direct(x, None).unwrap();
            assert!((a - b).abs() < 1e-13, "x = {x}");
            assert!((x * a).abs() <= 1.0 + 1e-12, "x = {x}");
        }
    }

    #[test]
    fn epsilon3_prime_matches_finite_difference() {
        for x in [1.3, 2.7, 15.5, 400.25] {
            let h = 1e-6;
            let fd = (epsilon3(x + h).unwrap() - epsilon3(x - h).unwrap()) / (2.0 * h);
            assert!((fd - epsilon3_prime(x, None).unwrap()).abs() < 1e-6, "x = {x}");
        }
    }

    #[test]
    fn beta2_examples() {
        assert_eq!(beta2(&int(1)).unwrap(), int(0));
        assert_eq!(beta2(&int(2)).unwrap(), rat(3, 2));
        assert_eq!(beta2(&rat(5, 2)).unwrap(), rat(51, 20));
        for x in [rat(5, 2), int(17), rat(1234, 7), int(1000)] {
            let exact = arith::to_f64(&beta2(&x).unwrap());
            let analytic = beta2_analytic(arith::to_f64(&x)).unwrap();
            assert!((exact - analytic).abs() <= 1e-10, "x = {x}");
        }
    }

    #[test]
    fn tail_integral_small_k() {
        let t = bernoulli_tail_integral(1, 20_000).unwrap();
        assert_eq!(t.rational_part, rat(1, 2));
        assert!((t.closed_form - (0.5 - EULER_GAMMA)).abs() < 1e-15);
        assert!(t.agrees(), "{t:?}");
        let t4 = bernoulli_tail_integral(4, 2000).unwrap();
        assert_eq!(t4.rational_part, rat(23, 40));
        assert!(t4.agrees(), "{t4:?}");
    }

    #[test]
    fn epsilon1_constant() {
        let e = epsilon1_weighted_integral(20_000).unwrap();
        assert_eq!(e.stated_rational, rat(271, 360));
        assert_eq!(e.rational_part, rat(3, 4));
        assert!((e.stated - 0.175_562_112_876_245).abs() < 1e-12);
        assert!(e.b_form_residual() < 1e-9, "{e:?}");
        assert!(e.residual() < 1e-9, "{e:?}");
        assert!((e.stated_residual() - 1.0 / 360.0).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn phi_routes_agree(k in 1usize..=10, n in 1i64..5000, d in 1i64..60) {
            let x = rat(n, d).max(int(1));
            prop_assert_eq!(phi(k, &x).unwrap(), phi_telescope(k, &x).unwrap());
        }

        #[test]
        fn phi_vanishes_below_one(k in 1usize..=10, n in 1i64..100) {
            let x = rat(n, 101);
            prop_assert_eq!(phi(k, &x).unwrap(), int(0));
        }
    }
}
