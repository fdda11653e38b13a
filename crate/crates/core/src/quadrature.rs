//! Deterministic quadrature rules for averaging over the atomic cloud.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
///
/// Roots of `P_n` by Newton iteration from the Chebyshev-like initial guess.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = vec![(0.0, 0.0); n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule[i] = (-x, w);
        rule[n - 1 - i] = (x, w);
    }
    rule
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}

/// A point of a disc with its probability weight; weights sum to one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscSample {
    pub x: f64,
    pub y: f64,
    pub weight: f64,
}

/// Product rule for the uniform density on a disc of `radius`.
///
/// Gauss–Legendre in `u = ρ²/R²` (uniform on `[0, 1]` for a uniform disc)
/// times equally spaced angles.
pub fn uniform_disc(radius: f64, radial: usize, angular: usize) -> Vec<DiscSample> {
    let mut out = Vec::with_capacity(radial * angular);
    for (node, w) in gauss_legendre(radial) {
        let rho = radius * ((node + 1.0) / 2.0).sqrt();
        for a in 0..angular {
            let theta = TAU * (a as f64 + 0.5) / angular as f64;
            out.push(DiscSample {
                x: rho * theta.cos(),
                y: rho * theta.sin(),
                weight: w / 2.0 / angular as f64,
            });
        }
    }
    out
}

/// Equal-weight uniform samples of a disc from a seeded generator.
pub fn monte_carlo_disc(radius: f64, samples: usize, seed: u64) -> Vec<DiscSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let rho = radius * rng.gen::<f64>().sqrt();
            let theta = TAU * rng.gen::<f64>();
            DiscSample {
                x: rho * theta.cos(),
                y: rho * theta.sin(),
                weight: 1.0 / samples as f64,
            }
        })
        .collect()
}
