//! The sparse arithmetic function f_α with α = 1/a:
//! f_α(n) = (-1)^h α⌊a^{4+2j}/k⌋ at n = ⌊a^{4+2j}/k⌋ + h, zero elsewhere,
//! together with F_α, G_α, H_α and the checks that go with them.
//!
//! Values are stored as the integer numerators m with f_α = m/a.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::arith::{self, Rational};
use crate::error::{Error, Result};
use crate::report::{json_f64, json_rational, ResidualTracker, VerificationReport};

/// Largest admissible a^{4+2J}.
pub const POWER_GUARD: u64 = 1 << 62;
/// Half-width, in units of α, of the accepted window for |H_α(N)/N|.
pub const PROP15_WINDOW: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SupportPoint {
    pub n: u64,
    pub j: u32,
    pub k: u64,
    pub h: u8,
    /// f_α(n) = m / a.
    pub m: i64,
}

#[derive(Debug, Clone)]
pub struct AxerInstance {
    alpha_inv: u64,
    j_max: u32,
    points: Vec<SupportPoint>,
    index: BTreeMap<u64, usize>,
    // prefix sums of m and |m| through points[i]
    f_prefix: Vec<i128>,
    g_prefix: Vec<i128>,
}

/// a^{4+2j}, or None past the guard.
pub fn level_power(alpha_inv: u64, j: u32) -> Option<u64> {
    let p = alpha_inv.checked_pow(4 + 2 * j)?;
    (p < POWER_GUARD).then_some(p)
}

pub fn build_axer(alpha_inv: u64, j_max: u32) -> Result<AxerInstance> {
    if alpha_inv < 2 {
        return Err(Error::InvalidArgument("alpha_inv must be >= 2".into()));
    }
    let mut points = Vec::new();
    let mut index = BTreeMap::new();
    for j in 0..=j_max {
        let p = level_power(alpha_inv, j)
            .ok_or_else(|| Error::Overflow(format!("{alpha_inv}^{} exceeds 2^62", 4 + 2 * j)))?;
        for k in (2..=alpha_inv).rev() {
            let base = p / k;
            for h in 0..2u8 {
                let n = base + h as u64;
                if index.insert(n, points.len()).is_some() {
                    return Err(Error::DuplicateKey(n));
                }
                let m = i64::try_from(base).map_err(|_| Error::Overflow(format!("value {base}")))?;
                points.push(SupportPoint {
                    n,
                    j,
                    k,
                    h,
                    m: if h == 0 { m } else { -m },
                });
            }
        }
    }
    let mut f_prefix = Vec::with_capacity(points.len());
    let mut g_prefix = Vec::with_capacity(points.len());
    let (mut f, mut g) = (0i128, 0i128);
    for pt in &points {
        f += pt.m as i128;
        g += (pt.m as i128).abs();
        f_prefix.push(f);
        g_prefix.push(g);
    }
    Ok(AxerInstance {
        alpha_inv,
        j_max,
        points,
        index,
        f_prefix,
        g_prefix,
    })
}

impl AxerInstance {
    pub fn alpha_inv(&self) -> u64 {
        self.alpha_inv
    }

    pub fn alpha(&self) -> f64 {
        1.0 / self.alpha_inv as f64
    }

    pub fn j_max(&self) -> u32 {
        self.j_max
    }

    pub fn support(&self) -> &[SupportPoint] {
        &self.points
    }

    /// Largest x the instance describes: a^{4+2J_max}, beyond which the next level would start.
    pub fn range(&self) -> u64 {
        level_power(self.alpha_inv, self.j_max).unwrap_or(u64::MAX)
    }

    /// f_α(n).
    pub fn value(&self, n: u64) -> Rational {
        match self.index.get(&n) {
            Some(&i) => arith::rat(self.points[i].m, self.alpha_inv as i64),
            None => Rational::zero(),
        }
    }

    fn check_x(&self, x: f64) -> Result<u64> {
        if !x.is_finite() || x > self.range() as f64 {
            return Err(Error::OutOfRange {
                x,
                limit: self.range() as f64,
            });
        }
        Ok(if x < 1.0 { 0 } else { x.floor() as u64 })
    }

    /// Number of support points n ≤ x.
    fn count_upto(&self, n: u64) -> usize {
        self.points.partition_point(|p| p.n <= n)
    }

    fn prefix(&self, prefix: &[i128], n: u64) -> Rational {
        match self.count_upto(n) {
            0 => Rational::zero(),
            c => Rational::new(BigInt::from(prefix[c - 1]), BigInt::from(self.alpha_inv)),
        }
    }

    pub fn f_alpha(&self, x: f64) -> Result<Rational> {
        let n = self.check_x(x)?;
        Ok(self.prefix(&self.f_prefix, n))
    }

    pub fn g_alpha(&self, x: f64) -> Result<Rational> {
        let n = self.check_x(x)?;
        Ok(self.prefix(&self.g_prefix, n))
    }

    /// F_α at the integer N, which must lie in range.
    pub fn f_alpha_at(&self, n: u64) -> Result<Rational> {
        self.f_alpha(n as f64).and(Ok(self.prefix(&self.f_prefix, n)))
    }

    /// H_α(x) = Σ_{n ≤ x} f_α(n){x/n}, exact for rational x.
    pub fn h_alpha_exact(&self, x: &Rational) -> Result<Rational> {
        let n_max = self.check_x(arith::to_f64(x))?;
        let mut acc = Rational::zero();
        for pt in &self.points[..self.count_upto(n_max)] {
            let ratio = x / Rational::from_integer(BigInt::from(pt.n));
            acc += arith::frac_q(&ratio) * Rational::from_integer(BigInt::from(pt.m));
        }
        Ok(acc / Rational::from_integer(BigInt::from(self.alpha_inv)))
    }

    /// H_α(N) at an integer, with {N/n} = (N mod n)/n.
    pub fn h_alpha_at(&self, n_big: u64) -> Result<Rational> {
        self.check_x(n_big as f64)?;
        let mut acc = Rational::zero();
        for pt in &self.points[..self.count_upto(n_big)] {
            let r = n_big % pt.n;
            if r != 0 {
                acc += Rational::new(BigInt::from(pt.m) * BigInt::from(r), BigInt::from(pt.n));
            }
        }
        Ok(acc / Rational::from_integer(BigInt::from(self.alpha_inv)))
    }

    pub fn h_alpha(&self, x: f64) -> Result<f64> {
        Ok(arith::to_f64(&self.h_alpha_exact(&arith::from_f64(x)?)?))
    }

    /// Σ_{αN ≤ n ≤ N} f_α(n)/n with N = a^{4+2J}.
    pub fn prop14_partial_sum(&self, j: u32) -> Result<Rational> {
        if j > self.j_max {
            return Err(Error::InvalidArgument(format!("J = {j} exceeds J_max = {}", self.j_max)));
        }
        let n_big = self.range_at(j)?;
        let lo = n_big / self.alpha_inv;
        let mut acc = Rational::zero();
        for pt in self.points.iter().filter(|p| p.n >= lo && p.n <= n_big) {
            acc += Rational::new(BigInt::from(pt.m), BigInt::from(pt.n));
        }
        Ok(acc / Rational::from_integer(BigInt::from(self.alpha_inv)))
    }

    fn range_at(&self, j: u32) -> Result<u64> {
        level_power(self.alpha_inv, j).ok_or_else(|| Error::Overflow(format!("level {j}")))
    }
}

/// The three inequalities behind injectivity, checked for every applicable (j, k, k').
pub fn check_prop11(a: &AxerInstance) -> Result<VerificationReport> {
    let ai = a.alpha_inv;
    let mut tr = ResidualTracker::exact("prop11");
    let mut all = true;
    let mut part3_cases = 0u64;
    for j in 0..=a.j_max {
        let p = a.range_at(j)?;
        // part 1: p > p/2 + 1, i.e. 2p > p + 2
        all &= p > 2;
        tr.observe_exact(p as f64, Rational::zero());
        if j < a.j_max {
            let q = a.range_at(j + 1)?;
            for k in 2..=ai {
                for kp in 2..=ai {
                    all &= q / k > p / kp + 1;
                }
            }
        }
        for k in 2..ai {
            part3_cases += 1;
            all &= p / k > p / (k + 1) + 1;
        }
    }
    let keys_increasing = a.points.windows(2).all(|w| w[0].n < w[1].n);
    let mut r = tr.finish();
    r.detail("part3_cases", json!(part3_cases));
    r.require("inequalities", all);
    r.require("keys_strictly_increasing", keys_increasing);
    Ok(r)
}

/// F_α against its closed form: αN at the h = 0 keys and 0 elsewhere. F_α only changes at
/// support keys, so each key together with its left neighbour covers every
/// integer in range.
pub fn check_eq24(a: &AxerInstance) -> Result<VerificationReport> {
    let mut tr = ResidualTracker::exact("eq24");
    let base_keys: std::collections::BTreeSet<u64> = a.points.iter().filter(|p| p.h == 0).map(|p| p.n).collect();
    let closed = |n: u64| {
        if base_keys.contains(&n) {
            arith::rat(n as i64, a.alpha_inv as i64)
        } else {
            Rational::zero()
        }
    };
    let mut probes: Vec<u64> = vec![1, a.range()];
    for p in &a.points {
        probes.push(p.n - 1);
        probes.push(p.n);
    }
    probes.sort_unstable();
    probes.dedup();
    let mut max_ratio = Rational::zero();
    for n in probes.into_iter().filter(|&n| n >= 1) {
        let f = a.f_alpha_at(n)?;
        let ratio = (&f / Rational::from_integer(BigInt::from(n))).abs();
        if ratio > max_ratio {
            max_ratio = ratio;
        }
        tr.observe_exact(n as f64, f - closed(n));
    }
    let alpha = arith::rat(1, a.alpha_inv as i64);
    let mut r = tr.finish();
    r.detail("max_abs_F_over_N", json_rational(&max_ratio));
    r.require("max_ratio_is_alpha", max_ratio == alpha);
    Ok(r)
}

/// G_α(x) ≤ (x + 1)(2/e + 3α) at every support key; both sides only need
/// checking there since G_α is a step function and the bound increases.
pub fn check_prop13(a: &AxerInstance) -> VerificationReport {
    let c = 2.0 / std::f64::consts::E + 3.0 * a.alpha();
    let mut min_margin = f64::INFINITY;
    let mut argmin = f64::NAN;
    for (i, p) in a.points.iter().enumerate() {
        let g = a.g_prefix[i] as f64 / a.alpha_inv as f64;
        let x = p.n as f64;
        let margin = (x + 1.0) * c - g;
        let rel = margin / ((x + 1.0) * c);
        if rel < min_margin {
            min_margin = rel;
            argmin = x;
        }
    }
    let mut tr = ResidualTracker::float("prop13", 0.0);
    tr.observe_float(argmin, 0.0);
    let mut r = tr.finish();
    r.detail("min_relative_margin", json_f64(min_margin));
    r.detail("argmin_x", json_f64(argmin));
    r.require("margin_nonnegative", min_margin >= 0.0);
    r
}

/// 0 < Σ_{αN≤n≤N} f_α(n)/n < 1/(Nα) for every J ≤ J_max, with the closed form
/// α Σ_{k=2}^{a} 1/(⌊N/k⌋ + 1) as a cross-check.
pub fn check_prop14(a: &AxerInstance) -> Result<VerificationReport> {
    let mut tr = ResidualTracker::exact("prop14");
    let mut ok = true;
    let mut sums = Vec::new();
    for j in 0..=a.j_max {
        let n_big = a.range_at(j)?;
        let s = a.prop14_partial_sum(j)?;
        let closed = (2..=a.alpha_inv)
            .map(|k| arith::rat(1, (n_big / k + 1) as i64))
            .fold(Rational::zero(), |acc, v| acc + v)
            / Rational::from_integer(BigInt::from(a.alpha_inv));
        let bound = arith::rat(a.alpha_inv as i64, n_big as i64);
        ok &= s.is_positive() && s < bound;
        tr.observe_exact(n_big as f64, &s - closed);
        sums.push(json!({"J": j, "sum": json_rational(&s), "sum_times_N_alpha": json_f64(arith::to_f64(&(&s / &bound)))}));
    }
    let mut r = tr.finish();
    r.detail("sums", serde_json::Value::Array(sums));
    r.require("strict_bounds", ok);
    Ok(r)
}

/// One row of the H_α diagnostic at N = a^{4+2J}.
#[derive(Debug, Clone, Serialize)]
pub struct AxerRow {
    pub alpha_inv: u64,
    #[serde(rename = "J")]
    pub j: u32,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "F_over_N")]
    pub f_over_n: f64,
    #[serde(rename = "G_over_N")]
    pub g_over_n: f64,
    #[serde(rename = "H_over_N")]
    pub h_over_n: f64,
    pub alpha_log_inv_alpha: f64,
    pub gap_over_alpha: f64,
}

impl AxerRow {
    /// |H_α(N)/N| within α log(1/α) ± 8α.
    pub fn in_window(&self) -> bool {
        self.gap_over_alpha.abs() <= PROP15_WINDOW
    }
}

pub fn prop15_row(a: &AxerInstance, j: u32) -> Result<AxerRow> {
    let n_big = a.range_at(j)?;
    if j > a.j_max {
        return Err(Error::InvalidArgument(format!("J = {j} exceeds J_max = {}", a.j_max)));
    }
    let nf = n_big as f64;
    let h = arith::to_f64(&a.h_alpha_at(n_big)?);
    let alpha = a.alpha();
    let reference = alpha * (a.alpha_inv as f64).ln();
    let h_over_n = h / nf;
    Ok(AxerRow {
        alpha_inv: a.alpha_inv,
        j,
        n: n_big,
        f_over_n: arith::to_f64(&a.f_alpha_at(n_big)?) / nf,
        g_over_n: arith::to_f64(&a.g_alpha(nf)?) / nf,
        h_over_n,
        alpha_log_inv_alpha: reference,
        gap_over_alpha: (h_over_n.abs() - reference) / alpha,
    })
}

/// Rows for J = 0..=J_max.
pub fn prop15_diagnostic(a: &AxerInstance) -> Result<Vec<AxerRow>> {
    (0..=a.j_max).into_par_iter().map(|j| prop15_row(a, j)).collect()
}

pub fn prop15_report(a: &AxerInstance) -> Result<VerificationReport> {
    let rows = prop15_diagnostic(a)?;
    let mut tr = ResidualTracker::float("prop15", PROP15_WINDOW);
    for row in &rows {
        tr.observe_float(row.n as f64, row.gap_over_alpha.abs());
    }
    let mut r = tr.finish();
    let worst = rows.iter().map(|r| r.gap_over_alpha.abs()).fold(0.0, f64::max);
    r.detail("measured_constant", json_f64(worst));
    r.detail("rows", serde_json::to_value(&rows)?);
    Ok(r)
}

/// All checks for one instance.
pub fn verify_axer(a: &AxerInstance) -> Result<Vec<VerificationReport>> {
    Ok(vec![
        check_prop11(a)?,
        check_eq24(a)?,
        check_prop13(a),
        check_prop14(a)?,
        prop15_report(a)?,
    ])
}

pub fn write_axer_csv<W: Write>(rows: &[AxerRow], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for r in rows {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}
