//! Finite-range scans of the bounds on m₁(x) and on ∫_1^x m(t) dt/t in
//! terms of |M|, the linear system for the λ_ℓ with its determinant Δ_k, the
//! remainder ψ, and the constant table for |m₁| ≤ C x^{1-k}∫|M|t^{k-3} + D/x.
//!
//! Scans sample each integer n and n ± 10⁻⁶: m₁, m and the integrals are
//! smooth between integers and change slope there, so the extremal margins
//! sit next to the integers.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::arith::{self, binomial, binomial_q, int, Rational};
use crate::bernoulli;
use crate::error::{Error, Result};
use crate::mobius::{self, AbsMertensIntegral, MLogIntegral, MuTable};
use crate::phi;
use crate::report::{json_f64, json_rational, ScanReport, ScanRow};

/// Offset of the breakpoint-adjacent samples.
pub const BREAK_EPS: f64 = 1e-6;
/// Float slack for theorem margins.
pub const MARGIN_SLACK: f64 = 1e-9;

/// Sample points: every integer in [1, x_max] and n ± 10⁻⁶ inside [1, x_max].
pub fn breakpoint_samples(x_max: u64) -> Vec<f64> {
    let mut xs = Vec::with_capacity(3 * x_max as usize);
    for n in 1..=x_max {
        let nf = n as f64;
        if n >= 2 {
            xs.push(nf - BREAK_EPS);
        }
        xs.push(nf);
        if n < x_max {
            xs.push(nf + BREAK_EPS);
        }
    }
    xs
}

/// Shared prefix data for the scans on [1, x_max].
pub struct ScanContext<'a> {
    t: &'a MuTable,
    x_max: u64,
    m: Vec<f64>,
}

impl<'a> ScanContext<'a> {
    pub fn new(t: &'a MuTable, x_max: u64) -> Result<Self> {
        if x_max < 1 {
            return Err(Error::InvalidArgument("x_max must be >= 1".into()));
        }
        if x_max > t.limit() {
            return Err(Error::OutOfRange {
                x: x_max as f64,
                limit: t.limit() as f64,
            });
        }
        Ok(Self {
            t,
            x_max,
            m: mobius::m_prefix(t, x_max),
        })
    }

    pub fn x_max(&self) -> u64 {
        self.x_max
    }

    /// m₁(x) = m(x) - M(x)/x.
    pub fn m1(&self, x: f64) -> f64 {
        if x < 1.0 {
            return 0.0;
        }
        let n = x.floor() as usize;
        self.m[n] - self.t.mertens_at(n as u64) as f64 / x
    }

    pub fn m(&self, x: f64) -> f64 {
        if x < 1.0 {
            return 0.0;
        }
        self.m[x.floor() as usize]
    }

    pub fn abs_integral(&self, weight: i32) -> Result<AbsMertensIntegral> {
        AbsMertensIntegral::new(self.t, self.x_max, weight)
    }

    fn scan<F: Fn(f64) -> (f64, f64) + Sync>(&self, name: &str, k: Option<usize>, f: F) -> ScanReport {
        let rows: Vec<ScanRow> = breakpoint_samples(self.x_max)
            .into_par_iter()
            .map(|x| {
                let (left, right) = f(x);
                ScanRow { x, left, right }
            })
            .collect();
        let mut r = ScanReport::from_rows(name, k, rows, MARGIN_SLACK);
        r.detail("x_max", json!(self.x_max));
        r
    }
}

/// |m₁(x)| ≤ (1/x)∫_1^x |M(t)| dt/t + 2/x - 2/x².
pub fn check_prop3(ctx: &ScanContext) -> Result<ScanReport> {
    let integral = ctx.abs_integral(-1)?;
    Ok(ctx.scan("prop3", None, |x| {
        let right = integral.eval(ctx.t, x) / x + 2.0 / x - 2.0 / (x * x);
        (ctx.m1(x).abs(), right)
    }))
}

/// |m₁(x)| ≤ (1/x²)∫_1^x |M(t)| dt + 8/(3x).
pub fn check_prop7(ctx: &ScanContext) -> Result<ScanReport> {
    let integral = ctx.abs_integral(0)?;
    Ok(ctx.scan("prop7", None, |x| {
        let right = integral.eval(ctx.t, x) / (x * x) + 8.0 / (3.0 * x);
        (ctx.m1(x).abs(), right)
    }))
}

/// |-1 + ∫_1^x m(t) dt/t| ≤ 1/x + (1/x)∫_1^x |M(t)| dt/t.
pub fn check_prop10(ctx: &ScanContext) -> Result<ScanReport> {
    let integral = ctx.abs_integral(-1)?;
    let mlog = MLogIntegral::new(ctx.t, ctx.x_max)?;
    Ok(ctx.scan("prop10", None, |x| {
        let right = 1.0 / x + integral.eval(ctx.t, x) / x;
        ((mlog.eval(x) - 1.0).abs(), right)
    }))
}

/// One (D, smallest admissible C) point of the Pareto sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParetoPoint {
    pub d: f64,
    pub c_needed: f64,
}

pub const PARETO_STEPS: usize = 40;

/// |m₁(x)| ≤ C x^{1-k} ∫_1^x |M(t)| t^{k-3} dt + D/x on the breakpoint samples.
///
/// Also reports the empirical constant: the supremum over x ≥ 2k of
/// (|m₁(x)| - D/x) / (x^{1-k}∫…), and a sweep over D in [0, 2D] (or [0, 4]
/// when D = 0) of the smallest C admissible at every sampled x.
pub fn scan_constants(ctx: &ScanContext, k: usize, c: f64, d: f64) -> Result<ScanReport> {
    if k < 1 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    let integral = ctx.abs_integral(k as i32 - 3)?;
    let xs = breakpoint_samples(ctx.x_max);
    // (x, |m₁|, x^{1-k}∫…)
    let pts: Vec<(f64, f64, f64)> = xs
        .par_iter()
        .map(|&x| (x, ctx.m1(x).abs(), x.powi(1 - k as i32) * integral.eval(ctx.t, x)))
        .collect();
    let rows: Vec<ScanRow> = pts
        .iter()
        .map(|&(x, left, g)| ScanRow {
            x,
            left,
            right: c * g + d / x,
        })
        .collect();
    let mut r = ScanReport::from_rows("scan-constants", Some(k), rows, MARGIN_SLACK);

    let threshold = 2.0 * k as f64;
    let mut c_emp = f64::NEG_INFINITY;
    let mut c_emp_x = f64::NAN;
    for &(x, left, g) in &pts {
        if x >= threshold && g > 0.0 {
            let v = (left - d / x) / g;
            if v > c_emp {
                c_emp = v;
                c_emp_x = x;
            }
        }
    }
    let d_hi = if d > 0.0 { 2.0 * d } else { 4.0 };
    let sweep: Vec<ParetoPoint> = (0..=PARETO_STEPS)
        .into_par_iter()
        .map(|i| {
            let dd = d_hi * i as f64 / PARETO_STEPS as f64;
            ParetoPoint {
                d: dd,
                c_needed: c_needed(&pts, dd),
            }
        })
        .collect();
    r.detail("C", json_f64(c));
    r.detail("D", json_f64(d));
    r.detail("x_max", json!(ctx.x_max));
    r.detail("empirical_C", json_f64(c_emp.max(0.0)));
    r.detail("empirical_C_argmax", json_f64(c_emp_x));
    r.detail("empirical_C_from_x", json_f64(threshold));
    r.detail(
        "pareto",
        serde_json::Value::Array(
            sweep
                .iter()
                .map(|p| json!({"D": json_f64(p.d), "C_needed": json_f64(p.c_needed)}))
                .collect(),
        ),
    );
    Ok(r)
}

/// Smallest C with |m₁| ≤ C g + D/x at every point; infinite when some point
/// with g = 0 already violates |m₁| ≤ D/x.
fn c_needed(pts: &[(f64, f64, f64)], d: f64) -> f64 {
    let mut need: f64 = 0.0;
    for &(x, left, g) in pts {
        let excess = left - d / x;
        if excess > 0.0 {
            if g > 0.0 {
                need = need.max(excess / g);
            } else {
                return f64::INFINITY;
            }
        }
    }
    need
}

/// The conjectured admissible (k, C_k, D_k).
pub const CONSTANT_TABLE: [(usize, f64, f64); 5] = [(4, 1.1, 2.1), (5, 1.5, 2.5), (6, 2.6, 2.8), (7, 6.3, 3.1), (8, 13.8, 3.2)];

/// The question whether C₄ = 1 is admissible with D₄ = 2.1.
pub const QUESTION2_PROBE: (usize, f64, f64) = (4, 1.0, 2.1);

/// Finite analogue of limsup |m(x)| ≤ 2 limsup |M(x)/x| on [from, x_max].
#[derive(Debug, Clone, Copy)]
pub struct LimsupDiagnostic {
    pub from: u64,
    pub to: u64,
    pub sup_left: f64,
    pub sup_mertens_ratio: f64,
    pub factor: f64,
    pub slack: f64,
}

impl LimsupDiagnostic {
    pub fn holds(&self) -> bool {
        self.sup_left <= self.factor * self.sup_mertens_ratio + self.slack
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "from": self.from,
            "to": self.to,
            "sup_left": json_f64(self.sup_left),
            "sup_abs_M_over_x": json_f64(self.sup_mertens_ratio),
            "factor": json_f64(self.factor),
            "slack": json_f64(self.slack),
            "holds": self.holds(),
        })
    }
}

/// sup |m(x)| against 2 sup |M(x)/x| over [from, to].
pub fn eq12_diagnostic(ctx: &ScanContext, from: u64, slack: f64) -> LimsupDiagnostic {
    let to = ctx.x_max;
    let sup_left = (from.max(1)..=to).map(|n| ctx.m[n as usize].abs()).fold(0.0, f64::max);
    LimsupDiagnostic {
        from,
        to,
        sup_left,
        sup_mertens_ratio: mobius::max_abs_mertens_ratio(ctx.t, from, to),
        factor: 2.0,
        slack,
    }
}

/// sup |m₁(x)| against (1/2) sup |M(x)/x| over [from, to].
pub fn eq14_diagnostic(ctx: &ScanContext, from: u64, slack: f64) -> LimsupDiagnostic {
    let to = ctx.x_max;
    let mut sup_left: f64 = 0.0;
    for n in from.max(1)..=to {
        let nf = n as f64;
        sup_left = sup_left.max(ctx.m1(nf).abs());
        if n < to {
            // m₁ is monotone between integers, so the left limit at n+1 covers the piece
            sup_left = sup_left.max((ctx.m[n as usize] - ctx.t.mertens_at(n) as f64 / (nf + 1.0)).abs());
        }
    }
    LimsupDiagnostic {
        from,
        to,
        sup_left,
        sup_mertens_ratio: mobius::max_abs_mertens_ratio(ctx.t, from, to),
        factor: 0.5,
        slack,
    }
}

/// λ_1..λ_k with Σ λ_ℓ = 1 and Σ C(2k+ℓ, 2i) λ_ℓ = 0 for 1 ≤ i < k, and
/// c_k = Σ (k + ℓ/2) λ_ℓ.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSolution {
    pub k: usize,
    pub lambdas: Vec<Rational>,
    pub c_k: Rational,
}

impl LambdaSolution {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "k": self.k,
            "lambdas": self.lambdas.iter().map(json_rational).collect::<Vec<_>>(),
            "c_k": json_rational(&self.c_k),
        })
    }
}

/// Row i (0-based) of the system: C(2k + ℓ, 2i) for ℓ = 1..k; row 0 is Σ λ = 1.
fn lambda_matrix(k: usize) -> Vec<Vec<Rational>> {
    (0..k)
        .map(|i| {
            (1..=k)
                .map(|l| Rational::from_integer(binomial((2 * k + l) as u64, 2 * i as u64)))
                .collect()
        })
        .collect()
}

/// Solves A v = b by Gaussian elimination over the rationals.
pub fn solve_exact(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Result<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::Singular(col))?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for c in col..n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
            let v = &f * &b[col];
            b[r] -= v;
        }
    }
    let mut x = vec![Rational::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc -= &a[r][c] * &x[c];
        }
        x[r] = acc / &a[r][r];
    }
    Ok(x)
}

/// Determinant over the rationals by elimination.
pub fn determinant(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        det *= &a[col][col];
        let inv = a[col][col].recip();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for c in col..n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    det
}

pub fn solve_lambda_system(k: usize) -> Result<LambdaSolution> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    let mut rhs = vec![Rational::zero(); k];
    rhs[0] = Rational::one();
    let lambdas = solve_exact(lambda_matrix(k), rhs)?;
    let c_k = lambdas
        .iter()
        .enumerate()
        .map(|(i, l)| (int(k as i64) + arith::rat(i as i64 + 1, 2)) * l)
        .fold(Rational::zero(), |a, b| a + b);
    Ok(LambdaSolution { k, lambdas, c_k })
}

/// Residuals of the normalisation row, then of the rows i = 1..k-1.
pub fn lambda_residuals(sol: &LambdaSolution) -> Vec<Rational> {
    lambda_matrix(sol.k)
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let s = row.iter().zip(&sol.lambdas).fold(Rational::zero(), |a, (c, l)| a + c * l);
            if i == 0 {
                s - Rational::one()
            } else {
                s
            }
        })
        .collect()
}

/// Δ_k(x) = det(C(x + j, 2(i - 1)))_{1 ≤ i, j ≤ k}, by elimination.
pub fn delta_k_direct(k: usize, x: &Rational) -> Rational {
    let a: Vec<Vec<Rational>> = (1..=k)
        .map(|i| (1..=k).map(|j| binomial_q(&(x + int(j as i64)), 2 * (i as u32 - 1))).collect())
        .collect();
    determinant(a)
}

/// Δ_k(x) = Π_{j=2}^k (x + j - 1) / Π_{i=2}^k (2i - 3) · Δ_{k-1}(x - 1), Δ_1 = 1.
pub fn delta_k_recurrence(k: usize, x: &Rational) -> Rational {
    let mut val = Rational::one();
    let mut y = x - int(k as i64 - 1);
    for kk in 2..=k {
        y += int(1);
        let mut num = Rational::one();
        for j in 2..=kk {
            num *= &y + int(j as i64 - 1);
        }
        let den: i64 = (2..=kk as i64).map(|i| 2 * i - 3).product();
        val = val * num / int(den);
    }
    val
}

fn bernoulli_for(m: usize) -> &'static bernoulli::BernoulliTable {
    assert!(m <= bernoulli::SHARED_KMAX, "order {m} beyond the shared table");
    bernoulli::shared()
}

/// ψ(x) = Σ_ℓ λ_ℓ Σ_{i=k}^{k+⌊(ℓ-1)/2⌋} B_{2i} C(2k+ℓ, 2i) x^{1-2i}
///        - Σ_ℓ λ_ℓ (B_{2k+ℓ}(x) - B_{2k+ℓ}) / x^{2k+ℓ-1}, exact.
pub fn psi_remainder(sol: &LambdaSolution, x: &Rational) -> Result<Rational> {
    let k = sol.k;
    let b = bernoulli_for(3 * k);
    let mut acc = Rational::zero();
    for (li, lam) in sol.lambdas.iter().enumerate() {
        let l = li + 1;
        let m = 2 * k + l;
        for i in k..=k + (l - 1) / 2 {
            let c = b.number(2 * i)? * Rational::from_integer(binomial(m as u64, 2 * i as u64));
            acc += lam * c * arith::rational_pow(x, 1 - 2 * i as i32)?;
        }
        let per = b.periodic(m, x)? - b.number(m)?;
        acc -= lam * per / arith::rational_pow(x, m as i32 - 1)?;
    }
    Ok(acc)
}

/// ψ'(x) away from integers, in floats; b_m' = m b_{m-1}.
pub fn psi_prime(sol: &LambdaSolution, x: f64) -> Result<f64> {
    if x == x.floor() {
        return Err(Error::IntegerPoint(x));
    }
    let k = sol.k;
    let b = bernoulli_for(3 * k);
    let f = x - x.floor();
    let mut acc = 0.0;
    for (li, lam) in sol.lambdas.iter().enumerate() {
        let l = li + 1;
        let m = 2 * k + l;
        let lam = arith::to_f64(lam);
        for i in k..=k + (l - 1) / 2 {
            let c = arith::to_f64(b.number(2 * i)?) * binomial(m as u64, 2 * i as u64).to_string().parse::<f64>().unwrap_or(f64::NAN);
            acc += lam * c * (1.0 - 2.0 * i as f64) * x.powi(-2 * i as i32);
        }
        let bm = b.eval_f64(m, f)? - arith::to_f64(b.number(m)?);
        let bm1 = b.eval_f64(m - 1, f)?;
        let mf = m as f64;
        acc -= lam * (mf * bm1 / x.powi(m as i32 - 1) - (mf - 1.0) * bm / x.powi(m as i32));
    }
    Ok(acc)
}

/// Σ λ_ℓ φ_{2k+ℓ}(x) - (x - c_k + ψ(x)), which must vanish.
pub fn psi_consistency(sol: &LambdaSolution, x: &Rational) -> Result<Rational> {
    let mut phi_sum = Rational::zero();
    for (li, lam) in sol.lambdas.iter().enumerate() {
        phi_sum += lam * phi::phi(2 * sol.k + li + 1, x)?;
    }
    Ok(phi_sum - (x - &sol.c_k + psi_remainder(sol, x)?))
}

/// Largest |ψ'(x)| x^{2k} over `samples` non-integer points of [1, hi].
pub fn psi_prime_constant(sol: &LambdaSolution, hi: f64, samples: usize) -> Result<(f64, f64)> {
    let mut best = (0.0, f64::NAN);
    for s in 0..samples {
        let x = 1.0 + (hi - 1.0) * (s as f64 + 0.5) / samples as f64;
        if x == x.floor() {
            continue;
        }
        let v = psi_prime(sol, x)?.abs() * x.powi(2 * sol.k as i32);
        if v > best.0 {
            best = (v, x);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::mobius::build_mu_sieve;

    fn ctx_table(n: u64) -> MuTable {
        build_mu_sieve(n).unwrap()
    }

    #[test]
    fn samples_layout() {
        assert_eq!(breakpoint_samples(1), vec![1.0]);
        assert_eq!(breakpoint_samples(2), vec![1.0, 1.0 + BREAK_EPS, 2.0 - BREAK_EPS, 2.0]);
    }

    #[test]
    fn prop_examples() {
        let t = ctx_table(100);
        let ctx = ScanContext::new(&t, 3).unwrap();
        let p3 = check_prop3(&ctx).unwrap();
        let at1 = p3.rows.iter().find(|r| r.x == 1.0).unwrap();
        assert_eq!(at1.margin(), 0.0);
        let at3 = p3.rows.iter().find(|r| r.x == 3.0).unwrap();
        assert!((at3.left - 0.5).abs() < 1e-15);
        let want = (2f64.ln() + 0.0) / 3.0 + 2.0 / 3.0 - 2.0 / 9.0;
        assert!((at3.right - want).abs() < 1e-15);
        assert!(p3.passed());

        let p7 = check_prop7(&ctx).unwrap();
        let at1 = p7.rows.iter().find(|r| r.x == 1.0).unwrap();
        assert!((at1.margin() - 8.0 / 3.0).abs() < 1e-15);
        let at3 = p7.rows.iter().find(|r| r.x == 3.0).unwrap();
        assert!((at3.margin() - 0.5).abs() < 1e-15);

        let ctx = ScanContext::new(&t, 2).unwrap();
        let p10 = check_prop10(&ctx).unwrap();
        let at1 = p10.rows.iter().find(|r| r.x == 1.0).unwrap();
        assert_eq!(at1.margin(), 0.0);
        let at2 = p10.rows.iter().find(|r| r.x == 2.0).unwrap();
        assert!((at2.left - (1.0 - 2f64.ln())).abs() < 1e-15);
        assert!((at2.right - (0.5 + 0.5 * 2f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn props_hold_to_ten_thousand() {
        let t = ctx_table(10_000);
        let ctx = ScanContext::new(&t, 10_000).unwrap();
        for r in [check_prop3(&ctx).unwrap(), check_prop7(&ctx).unwrap(), check_prop10(&ctx).unwrap()] {
            assert!(r.passed(), "{}: {} at {}", r.identity, r.min_margin, r.argmin_x);
        }
    }

    #[test]
    fn m1_matches_exact_routes() {
        let t = ctx_table(500);
        let ctx = ScanContext::new(&t, 500).unwrap();
        for x in [rat(1, 1), rat(7, 2), rat(1001, 3), rat(500, 1)] {
            let r = mobius::m1_exact_routes(&t, &x).unwrap();
            assert!((ctx.m1(arith::to_f64(&x)) - arith::to_f64(&r.sum_form)).abs() < 1e-14);
        }
    }

    #[test]
    fn constants_scan_and_sweep() {
        let t = ctx_table(5000);
        let ctx = ScanContext::new(&t, 5000).unwrap();
        let r = scan_constants(&ctx, 4, 1.1, 2.1).unwrap();
        assert!(r.passed());
        let c_emp = r.details["empirical_C"].as_f64().unwrap();
        assert!(c_emp <= 1.1 + 1e-9);
        let sweep = r.details["pareto"].as_array().unwrap();
        assert_eq!(sweep.len(), PARETO_STEPS + 1);
        // larger D never needs a larger C
        let cs: Vec<f64> = sweep.iter().map(|p| p["C_needed"].as_f64().unwrap_or(f64::INFINITY)).collect();
        assert!(cs.windows(2).all(|w| w[1] <= w[0]));
        let fail = scan_constants(&ctx, 4, 0.0, 0.0).unwrap();
        assert!(!fail.passed());
    }

    #[test]
    fn constants_scan_at_k3_matches_square_weight_bound() {
        // k = 3 with C = 1, D = 8/3 is exactly the bound of check_prop7
        let t = ctx_table(2000);
        let ctx = ScanContext::new(&t, 2000).unwrap();
        let a = scan_constants(&ctx, 3, 1.0, 8.0 / 3.0).unwrap();
        let b = check_prop7(&ctx).unwrap();
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert_eq!(ra.x, rb.x);
            assert!((ra.right - rb.right).abs() < 1e-12);
        }
    }

    #[test]
    fn lambda_examples() {
        let s1 = solve_lambda_system(1).unwrap();
        assert_eq!(s1.lambdas, vec![int(1)]);
        let s2 = solve_lambda_system(2).unwrap();
        assert_eq!(s2.lambdas, vec![int(3), int(-2)]);
        // c_2 = (2 + 1/2)·3 + (2 + 1)·(-2)
        assert_eq!(s2.c_k, rat(3, 2));
        for k in 1..=10 {
            let s = solve_lambda_system(k).unwrap();
            assert!(lambda_residuals(&s).iter().all(|r| r.is_zero()), "k = {k}");
        }
        assert!(solve_lambda_system(0).is_err());
    }

    #[test]
    fn singular_system_is_reported() {
        let a = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(matches!(solve_exact(a, vec![int(1), int(0)]), Err(Error::Singular(_))));
    }

    #[test]
    fn delta_examples() {
        for x in [int(1), int(7), rat(5, 3)] {
            assert_eq!(delta_k_direct(1, &x), int(1));
            assert_eq!(delta_k_recurrence(1, &x), int(1));
        }
        assert_eq!(delta_k_direct(2, &int(5)), int(6));
        assert_eq!(delta_k_recurrence(2, &int(5)), int(6));
        assert_eq!(delta_k_direct(3, &int(6)), delta_k_recurrence(3, &int(6)));
        for k in 1..=6 {
            for x in k..=3 * k {
                let x = int(x as i64);
                assert_eq!(delta_k_direct(k, &x), delta_k_recurrence(k, &x), "k={k} x={x}");
            }
        }
        for k in 1..=10 {
            let d = delta_k_direct(k, &int(2 * k as i64));
            assert!(!d.is_zero());
            let det = determinant(lambda_matrix(k));
            assert_eq!(det, d, "k = {k}");
        }
    }

    #[test]
    fn psi_examples() {
        let s = solve_lambda_system(2).unwrap();
        for x in [int(1), rat(3, 2), rat(17, 5), int(9), rat(1001, 7)] {
            assert!(psi_consistency(&s, &x).unwrap().is_zero(), "x = {x}");
        }
        let small = arith::to_f64(&psi_remainder(&s, &int(10)).unwrap()).abs();
        let large = arith::to_f64(&psi_remainder(&s, &int(1000)).unwrap()).abs();
        assert!(large < small);
        let (c, _) = psi_prime_constant(&s, 100.0, 20_000).unwrap();
        assert!(c.is_finite() && c > 0.0);
        for k in 3..=5 {
            let s = solve_lambda_system(k).unwrap();
            assert!(psi_consistency(&s, &rat(37, 3)).unwrap().is_zero());
        }
    }

    #[test]
    fn psi_prime_matches_difference_quotient() {
        for k in 2..=4 {
            let s = solve_lambda_system(k).unwrap();
            for (xn, xd) in [(3i64, 2i64), (23, 7), (401, 4)] {
                let x = rat(xn, xd);
                let h = rat(1, 1_000_000);
                let fd = (psi_remainder(&s, &(&x + &h)).unwrap() - psi_remainder(&s, &(&x - &h)).unwrap()) / (int(2) * &h);
                let fd = arith::to_f64(&fd);
                let an = psi_prime(&s, arith::to_f64(&x)).unwrap();
                let scale = an.abs().max(1e-300);
                assert!((fd - an).abs() / scale < 1e-6, "k={k} x={x}: {fd} vs {an}");
            }
        }
    }

    #[test]
    fn limsup_diagnostics() {
        let t = ctx_table(20_000);
        let ctx = ScanContext::new(&t, 20_000).unwrap();
        let d12 = eq12_diagnostic(&ctx, 1000, 0.05);
        assert!(d12.sup_left > 0.0 && d12.sup_mertens_ratio > 0.0);
        let d14 = eq14_diagnostic(&ctx, 1000, 0.0);
        assert!(d14.sup_left > 0.0);
        assert_eq!(d14.to_json()["from"], 1000);
    }
}
