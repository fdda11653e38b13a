//! Closed-form interference signal and truncated Gauss sum.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// `(m² · N) mod l`, computed without overflow.
pub fn quadratic_residue(n: u64, l: u64, m: u64) -> Result<u64> {
    if l == 0 {
        return Err(Error::domain("trial factor l must be >= 1"));
    }
    let l = l as u128;
    let m = m as u128 % l;
    Ok(((m * m % l) * (n as u128 % l) % l) as u64)
}

/// `c_m(l) = cos(2π m² N / l)`.
///
/// The argument is reduced to `2π r / l` with `r = (m² N) mod l` before the
/// cosine is taken, so divisors give exactly `1.0`.
pub fn interference_signal_ideal(n: u64, l: u64, m: u64) -> Result<f64> {
    let r = quadratic_residue(n, l, m)?;
    Ok((TAU * (r as f64 / l as f64)).cos())
}

/// The signals `c_0(l) ..= c_M(l)`.
pub fn signal_trace(n: u64, l: u64, order: u32) -> Result<Vec<f64>> {
    (0..=order as u64)
        .map(|m| interference_signal_ideal(n, l, m))
        .collect()
}

/// `C_N^(M)(l) = 1/(M+1) · Σ_{m=0..M} c_m(l)`.
pub fn gauss_sum(n: u64, l: u64, order: u32) -> Result<f64> {
    Ok(mean(&signal_trace(n, l, order)?))
}

/// Arithmetic mean in fixed left-to-right order. Empty input gives 0.
pub(crate) fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}
