//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! The process exits 0 after printing every line. With `ACCEPTANCE_STRICT=1`
//! it exits 1 when any criterion fails.

use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use moebius::arith::{self, int, rat, Rational};
use moebius::axer;
use moebius::bernoulli;
use moebius::bounds::{self, ScanContext};
use moebius::identities;
use moebius::mobius::{self, MuTable};
use moebius::phi;
use moebius::transforms::{self, StepFunctionF};

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn crit1(t: &MuTable) -> Outcome {
    let start = Instant::now();
    let r = identities::verify_meissel(t, 100_000, 1000, SEED).unwrap();
    let secs = start.elapsed().as_secs_f64();
    outcome(
        r.passed() && secs <= 60.0,
        format!("{} points, max residual {:?}, {secs:.1}s", r.points, r.max_residual.to_f64()),
    )
}

fn crit2(t: &MuTable) -> Outcome {
    let r = identities::verify_macleod_range(t, 8, 2000, 200, 500, SEED).unwrap();
    outcome(
        r.passed(),
        format!("k <= 8, {} evaluations, max residual {}", r.points, r.max_residual.to_f64()),
    )
}

fn crit3(t: &MuTable) -> Outcome {
    let r = identities::verify_gram_bound(t, 10_000_000, 1e-9).unwrap();
    outcome(
        r.passed(),
        format!("x <= 1e7, max |m| = {} at x = {}", r.details["max_abs_m"], r.details["argmax"]),
    )
}

fn crit4(t: &MuTable) -> Outcome {
    let r = identities::verify_vonmangoldt_box(t, 100_000, Some(30.0)).unwrap();
    let d = |k: &str| r.details.get(k).map(|v| v.to_string()).unwrap_or_default();
    outcome(
        r.passed(),
        format!("min {} at {}, max {} at {}, L(30) = {}", d("min"), d("argmin"), d("max"), d("argmax"), d("L(30)")),
    )
}

fn crit5() -> Outcome {
    let r = identities::verify_epsilon1_constant(phi::DEFAULT_TAIL_CUTOFF, 1e-6).unwrap();
    outcome(
        r.passed(),
        format!(
            "integral {} vs stated {} (residual {:.3e}); the integrand's own closed form {} = {}",
            r.details["numeric"],
            r.details["stated_value"],
            r.max_residual.to_f64(),
            r.details["derived_closed_form"].as_str().unwrap_or(""),
            r.details["derived_value"],
        ),
    )
}

fn crit6(t: &MuTable) -> Outcome {
    let ctx = ScanContext::new(t, 100_000).unwrap();
    let reports = [
        bounds::check_prop3(&ctx).unwrap(),
        bounds::check_prop7(&ctx).unwrap(),
        bounds::check_prop10(&ctx).unwrap(),
    ];
    let detail = reports
        .iter()
        .map(|r| format!("{} min margin {:.3e} at {}", r.identity, r.min_margin, r.argmin_x))
        .collect::<Vec<_>>()
        .join("; ");
    outcome(reports.iter().all(|r| r.passed()), detail)
}

fn crit7() -> Outcome {
    let p6 = identities::verify_prop6(10_000, 1.0, 1000.0, SEED, 1e-10).unwrap();
    let p9 = identities::check_prop9(10_000, 1.0, 1000.0, SEED, 1e-9).unwrap();
    outcome(
        p6.passed() && p9.passed(),
        format!(
            "prop6 max residual {:.3e}; prop9 min margin {:.3e} at {}",
            p6.max_residual.to_f64(),
            p9.min_margin,
            p9.argmin_x
        ),
    )
}

fn crit8() -> Outcome {
    let mut ok = true;
    for k in 1..=10 {
        let s = bounds::solve_lambda_system(k).unwrap();
        ok &= bounds::lambda_residuals(&s).iter().all(Zero::is_zero);
        ok &= !bounds::delta_k_direct(k, &int(2 * k as i64)).is_zero();
    }
    for k in 1..=6 {
        for x in k..=3 * k {
            let x = int(x as i64);
            ok &= bounds::delta_k_direct(k, &x) == bounds::delta_k_recurrence(k, &x);
        }
    }
    let l2 = bounds::solve_lambda_system(2).unwrap();
    outcome(
        ok,
        format!(
            "k <= 10 residuals zero, delta recurrence k <= 6, lambda(k=2) = [{}, {}]",
            l2.lambdas[0], l2.lambdas[1]
        ),
    )
}

fn crit9(t: &MuTable) -> Outcome {
    let ctx = ScanContext::new(t, 100_000).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for (k, c, d) in bounds::CONSTANT_TABLE {
        let r = bounds::scan_constants(&ctx, k, c, d).unwrap();
        ok &= r.passed();
        parts.push(format!("k={k} margin {:.2e}", r.min_margin));
    }
    let (k, c, d) = bounds::QUESTION2_PROBE;
    let probe = bounds::scan_constants(&ctx, k, c, d).unwrap();
    parts.push(format!(
        "C=1 probe {} (margin {:.2e}, empirical C {})",
        if probe.passed() { "no counterexample" } else { "counterexample" },
        probe.min_margin,
        probe.details["empirical_C"]
    ));
    outcome(ok, parts.join("; "))
}

fn crit10() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut failures = Vec::new();
    for ai in 2..=16u64 {
        let j_max = (0..=2).rev().find(|&j| axer::level_power(ai, j).is_some()).unwrap();
        let a = match axer::build_axer(ai, j_max) {
            Ok(a) => a,
            Err(e) => {
                ok = false;
                failures.push(format!("a={ai}: {e}"));
                continue;
            }
        };
        let checks = [
            axer::check_prop11(&a).unwrap(),
            axer::check_eq24(&a).unwrap(),
            axer::check_prop13(&a),
            axer::check_prop14(&a).unwrap(),
        ];
        for r in checks.iter().filter(|r| !r.passed()) {
            ok = false;
            failures.push(format!("a={ai} {}", r.identity));
        }
    }
    let a12 = axer::build_axer(12, 1).unwrap();
    let rows = axer::prop15_diagnostic(&a12).unwrap();
    ok &= rows.iter().all(axer::AxerRow::in_window);
    let measured = rows.iter().map(|r| r.gap_over_alpha.abs()).fold(0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    ok &= secs <= 120.0;
    let rows_text = rows
        .iter()
        .map(|r| format!("J={} |H/N| = {:.6}", r.j, r.h_over_n.abs()))
        .collect::<Vec<_>>()
        .join(", ");
    outcome(
        ok,
        format!(
            "a = 2..16, J <= 2{}; {rows_text}; alpha log 12 = {:.6}; measured constant {measured:.4}; {secs:.2}s",
            if failures.is_empty() { String::new() } else { format!(" failures: {}", failures.join(", ")) },
            rows[0].alpha_log_inv_alpha
        ),
    )
}

fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64, max_den: i64) -> Rational {
    let q = rng.gen_range(1..=max_den);
    rat(rng.gen_range(lo * q..=hi * q), q)
}

fn random_phi(rng: &mut ChaCha8Rng, i: usize) -> StepFunctionF {
    if i.is_multiple_of(2) {
        let deg = rng.gen_range(0..=3);
        let coeffs: Vec<Rational> = (0..=deg).map(|_| random_rational(rng, -5, 5, 7)).collect();
        StepFunctionF::polynomial(coeffs)
    } else {
        let values: Vec<Rational> = (0..=64).map(|_| random_rational(rng, -9, 9, 11)).collect();
        StepFunctionF::exact("step", move |x| {
            let n = arith::floor_q(x);
            let n: usize = n.try_into().unwrap_or(64);
            values[n.min(64)].clone()
        })
    }
}

fn crit11(t: &MuTable) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut inversion_ok = true;
    for i in 0..100 {
        let phi_fn = random_phi(&mut rng, i);
        let grid: Vec<Rational> = (0..4).map(|_| random_rational(&mut rng, 1, 60, 9)).collect();
        inversion_ok &= transforms::inversion_roundtrip(&phi_fn, &grid, t, 0.0).unwrap().passed();
    }
    let mut routes_ok = true;
    for _ in 0..500 {
        let k = rng.gen_range(1..=12);
        let x = random_rational(&mut rng, 1, 200, 50);
        routes_ok &= phi::phi(k, &x).unwrap() == phi::phi_telescope(k, &x).unwrap();
    }
    let b = bernoulli::shared();
    let mut eq3_ok = true;
    for k in 1..=20usize {
        for _ in 0..50 {
            let x = random_rational(&mut rng, -20, 20, 30);
            let lhs = b.eval(k, &(&x + int(1))).unwrap() - b.eval(k, &x).unwrap();
            let rhs = int(k as i64) * arith::rational_pow(&x, k as i32 - 1).unwrap_or_else(|_| int(1));
            eq3_ok &= lhs == rhs;
        }
    }
    outcome(
        inversion_ok && routes_ok && eq3_ok,
        format!("inversion {inversion_ok}, phi routes {routes_ok}, difference identity {eq3_ok}"),
    )
}

fn main() {
    let start = Instant::now();
    let t = match mobius::build_mu_sieve(10_000_000) {
        Ok(t) => t,
        Err(e) => {
            println!("FAIL sieve: {e}");
            std::process::exit(1);
        }
    };
    println!("sieve to 1e7 built in {:.1}s", start.elapsed().as_secs_f64());

    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("meissel identity", Box::new(|| crit1(&t))),
        ("macleod identity", Box::new(|| crit2(&t))),
        ("gram bound", Box::new(|| crit3(&t))),
        ("von mangoldt box", Box::new(|| crit4(&t))),
        ("eps1 weighted integral", Box::new(crit5)),
        ("props 3, 7, 10", Box::new(|| crit6(&t))),
        ("props 6 and 9", Box::new(crit7)),
        ("lambda system", Box::new(crit8)),
        ("constants table", Box::new(|| crit9(&t))),
        ("axer construction", Box::new(crit10)),
        ("property suite", Box::new(|| crit11(&t))),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let s = Instant::now();
        let o = f();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "{verdict} criterion {:>2} ({name}): {} [{:.1}s]",
            i + 1,
            o.detail,
            s.elapsed().as_secs_f64()
        );
        if !o.pass {
            failed.push(i + 1);
        }
    }
    println!(
        "{}/{} criteria passed{}",
        criteria.len() - failed.len(),
        criteria.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!("; failing: {failed:?}")
        }
    );
    let strict = std::env::var("ACCEPTANCE_STRICT").map(|v| v == "1").unwrap_or(false);
    if strict && !failed.is_empty() {
        std::process::exit(1);
    }
}
