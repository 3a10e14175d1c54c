//! Gauss–Legendre rules and an adaptive driver with caller-supplied
//! breakpoints.

use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Rule with `n` nodes on [-1, 1]; nodes are refined by Newton's method
    /// on the three-term recurrence for P_n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, z);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Integrates over [0, 1] with `f` receiving the node in [0, 1].
    pub fn integrate_unit<F: FnMut(f64) -> f64>(&self, f: F) -> f64 {
        self.integrate(0.0, 1.0, f)
    }
}

fn legendre(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Adaptive integration of `f` over [a, b], split first at every breakpoint
/// inside the interval. Each piece compares a 10-point against a 20-point
/// rule and bisects until they agree to `tol` (scaled by the piece length).
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, breakpoints: &[f64], tol: f64) -> Result<f64> {
    let lo = GaussLegendre::new(10);
    let hi = GaussLegendre::new(20);
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&t| t > a && t < b).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(a);
    edges.extend(cuts);
    edges.push(b);
    let total = (b - a).abs().max(f64::MIN_POSITIVE);
    let mut acc = crate::arith::CompensatedSum::new();
    for w in edges.windows(2) {
        let piece_tol = tol * (w[1] - w[0]).abs() / total;
        acc.add(adapt(f, w[0], w[1], &lo, &hi, piece_tol.max(1e-300), 0)?);
    }
    Ok(acc.value())
}

fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    lo: &GaussLegendre,
    hi: &GaussLegendre,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let coarse = lo.integrate(a, b, f);
    let fine = hi.integrate(a, b, f);
    if (fine - coarse).abs() <= tol.max(1e-15 * fine.abs()) {
        return Ok(fine);
    }
    if depth >= 40 {
        return Err(Error::Quadrature { a, b });
    }
    let m = 0.5 * (a + b);
    Ok(adapt(f, a, m, lo, hi, 0.5 * tol, depth + 1)? + adapt(f, m, b, lo, hi, 0.5 * tol, depth + 1)?)
}
