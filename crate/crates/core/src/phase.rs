//! Exact pulse phases.
//!
//! Every phase the factorization sequence needs is a rational multiple of π
//! whose denominator is the trial factor `l`. Phases are kept in that form and
//! reduced modulo 2π with integer arithmetic; floating-point radians are only
//! ever derived from the reduced value.

use std::f64::consts::PI;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// A phase `num/den · π`, reduced to `[0, 2π)` and to lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PiPhase {
    num: u64,
    den: u64,
}

impl PiPhase {
    pub const ZERO: PiPhase = PiPhase { num: 0, den: 1 };

    /// −π/2, stored as 3π/2.
    pub const MINUS_HALF_PI: PiPhase = PiPhase { num: 3, den: 2 };

    /// Builds `num/den · π` reduced modulo 2π. `den` must be non-zero.
    pub fn new(num: i128, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::domain("phase denominator must be non-zero"));
        }
        let period = 2 * den as i128;
        Ok(Self::from_residue(num.rem_euclid(period) as u64, den))
    }

    /// `residue` must already lie in `[0, 2·den)`.
    fn from_residue(residue: u64, den: u64) -> Self {
        debug_assert!((residue as u128) < 2 * den as u128);
        if residue == 0 {
            return Self::ZERO;
        }
        let g = residue.gcd(&den);
        PiPhase {
            num: residue / g,
            den: den / g,
        }
    }

    /// Numerator of the coefficient of π, in `[0, 2·denominator)`.
    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    /// Floating view in radians, in `[0, 2π)`.
    pub fn radians(&self) -> f64 {
        PI * (self.num as f64 / self.den as f64)
    }

    /// Adds two phases exactly.
    pub fn add(&self, other: &PiPhase) -> PiPhase {
        let l = (self.den as u128).lcm(&(other.den as u128));
        let a = self.num as u128 * (l / self.den as u128);
        let b = other.num as u128 * (l / other.den as u128);
        let r = (a + b) % (2 * l);
        let g = r.gcd(&l).max(1);
        if r == 0 {
            return Self::ZERO;
        }
        PiPhase {
            num: (r / g) as u64,
            den: (l / g) as u64,
        }
    }

    /// The phase in millionths of a degree, rounded half-to-even, in
    /// `[0, 360_000_000)`.
    pub fn micro_degrees(&self) -> u64 {
        const SCALE: u128 = 180_000_000;
        let scaled = SCALE * self.num as u128;
        let den = self.den as u128;
        let (mut q, r) = (scaled / den, scaled % den);
        match (2 * r).cmp(&den) {
            std::cmp::Ordering::Greater => q += 1,
            std::cmp::Ordering::Equal if q % 2 == 1 => q += 1,
            _ => {}
        }
        (q % 360_000_000) as u64
    }

    /// Degrees with exactly six decimals, e.g. `"270.000000"`.
    pub fn degrees_string(&self) -> String {
        let micro = self.micro_degrees();
        format!("{}.{:06}", micro / 1_000_000, micro % 1_000_000)
    }
}

impl fmt::Display for PiPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.den) {
            (0, _) => write!(f, "0"),
            (1, 1) => write!(f, "π"),
            (n, 1) => write!(f, "{n}π"),
            (1, d) => write!(f, "π/{d}"),
            (n, d) => write!(f, "{n}π/{d}"),
        }
    }
}

/// The integer coefficient of π in `a_k(N) = (−1)^k · π · N · (2k − 1)`.
pub fn phase_a(k: u64, n: u64) -> Result<i128> {
    if k == 0 {
        return Err(Error::domain("a_k(N) is defined for k >= 1"));
    }
    let odd = 2 * k as i128 - 1;
    let magnitude = (n as i128)
        .checked_mul(odd)
        .ok_or_else(|| Error::domain("a_k(N) overflows 128-bit arithmetic"))?;
    Ok(if k.is_multiple_of(2) {
        magnitude
    } else {
        -magnitude
    })
}

/// Phase of the k-th π-pulse when testing trial factor `l`:
/// zero for `k = 0`, otherwise `a_k(N) / l` reduced modulo 2π.
///
/// The numerator is reduced modulo `2l` before any product is formed, so the
/// result is exact for every `u64` input.
pub fn pulse_phase(k: u64, n: u64, l: u64) -> Result<PiPhase> {
    if l == 0 {
        return Err(Error::domain("trial factor l must be >= 1"));
    }
    if k == 0 {
        return Ok(PiPhase::ZERO);
    }
    let period = 2 * l as u128;
    let odd = (2 * k as u128 - 1) % period;
    let magnitude = (n as u128 % period) * odd % period;
    let residue = if k.is_multiple_of(2) {
        magnitude
    } else {
        (period - magnitude) % period
    };
    Ok(PiPhase::from_residue(residue as u64, l))
}
