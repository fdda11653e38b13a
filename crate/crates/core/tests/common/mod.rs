//! Independent reference computations for the test suites.
//!
//! None of these helpers call into the crate: they use big integers and
//! fixed-point π so they can check the exact-reduction code paths from the
//! outside.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// π to 100 decimals.
const PI_DIGITS: &str = "31415926535897932384626433832795028841971693993751058209749445923078164062862089986280348253421170679";

/// Fixed-point scale, in decimal digits.
const SCALE: usize = 80;

fn pi_fixed() -> BigInt {
    PI_DIGITS[..SCALE + 1].parse().unwrap()
}

fn pow10(k: usize) -> BigInt {
    num_traits::pow(BigInt::from(10), k)
}

/// `cos(2π · m² · N / l)` from the unreduced argument: the product is formed
/// in 80-digit fixed point and reduced by a fixed-point 2π.
pub fn cos_direct(n: u64, l: u64, m: u64) -> f64 {
    let two_pi = pi_fixed() * 2;
    let arg = &two_pi * BigInt::from(m) * BigInt::from(m) * BigInt::from(n) / BigInt::from(l);
    let reduced = arg % &two_pi;
    // keep 17 significant fractional digits
    let top: BigInt = reduced / pow10(SCALE - 17);
    let top = top.to_f64().unwrap();
    (top / 1e17).cos()
}

/// `(−1)^k · N · (2k − 1) mod 2l`, as a non-negative big integer.
pub fn phase_numerator(k: u64, n: u64, l: u64) -> BigInt {
    if k == 0 {
        return BigInt::zero();
    }
    let sign = if k.is_multiple_of(2) { 1 } else { -1 };
    let a = BigInt::from(sign) * BigInt::from(n) * BigInt::from(2 * k - 1);
    let period = BigInt::from(2 * l);
    ((a % &period) + &period) % &period
}

/// Every divisor of `n` in `lo..=hi` by direct testing.
pub fn divisors_in(n: u64, lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&d| n.is_multiple_of(d)).collect()
}

pub fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// Gauss sum by direct summation of [`cos_direct`].
pub fn gauss_sum_direct(n: u64, l: u64, order: u64) -> f64 {
    (0..=order).map(|m| cos_direct(n, l, m)).sum::<f64>() / (order + 1) as f64
}

/// Ideal contrast by direct summation.
pub fn contrast_direct(n: u64, trial: &[u64], order: u64) -> f64 {
    let (mut f, mut nf) = (Vec::new(), Vec::new());
    for &l in trial {
        let c = gauss_sum_direct(n, l, order).abs();
        if n.is_multiple_of(l) {
            f.push(c)
        } else {
            nf.push(c)
        }
    }
    let af = f.iter().sum::<f64>() / f.len() as f64;
    let an = nf.iter().sum::<f64>() / nf.len() as f64;
    (af - an) / (af + an)
}
