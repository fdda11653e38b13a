//! Trial-factor enumeration, classification and contrast.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::{self, mean};

/// The integer to factor, the truncation order and the trial set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoringProblem {
    n: u64,
    order: u32,
    trial_set: Vec<u64>,
}

impl FactoringProblem {
    pub fn new(n: u64, order: u32, trial_set: Vec<u64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("N must be >= 2, got {n}")));
        }
        if trial_set.contains(&0) {
            return Err(Error::domain("trial factors must be >= 1"));
        }
        if trial_set.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("trial set must be strictly increasing"));
        }
        if order > crate::SOFT_MAX_ORDER {
            log::warn!(
                "truncation order {order} needs {} pulses, more than the beam transit allows",
                order + 3
            );
        }
        Ok(FactoringProblem {
            n,
            order,
            trial_set,
        })
    }

    pub fn with_strategy(n: u64, order: u32, strategy: TrialStrategy) -> Result<Self> {
        Self::new(n, order, trial_factors(n, strategy)?)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn trial_set(&self) -> &[u64] {
        &self.trial_set
    }
}

/// How the trial factors are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrialStrategy {
    /// Every prime up to ⌊√N⌋.
    Primes,
    /// Every integer in `min..=max`.
    Range { min: u64, max: u64 },
}

pub fn trial_factors(n: u64, strategy: TrialStrategy) -> Result<Vec<u64>> {
    if n < 2 {
        return Err(Error::domain(format!("N must be >= 2, got {n}")));
    }
    match strategy {
        TrialStrategy::Primes => Ok(primes_up_to(n.isqrt())),
        TrialStrategy::Range { min, max } => {
            if min == 0 || min > max {
                return Err(Error::domain(format!(
                    "range must satisfy 1 <= l_min <= l_max, got {min}..={max}"
                )));
            }
            Ok((min..=max).collect())
        }
    }
}

/// Sieve of Eratosthenes over odd numbers.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    // index i stands for 2i + 1
    let half = ((limit - 1) / 2 + 1) as usize;
    let mut composite = vec![false; half];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= limit as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    std::iter::once(2)
        .chain(
            (1..half)
                .filter(|&i| !composite[i])
                .map(|i| 2 * i as u64 + 1),
        )
        .collect()
}

/// Signals and total for one trial factor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussSumResult {
    pub l: u64,
    /// `c_m(l)` for `m = 0..=M`.
    pub signals: Vec<f64>,
    /// `C_N^(M)(l)`, the mean of `signals`.
    pub total: f64,
    /// Ground truth, `N mod l == 0`.
    pub is_divisor: bool,
    /// `|total| >= threshold`.
    pub classified_factor: bool,
}

impl GaussSumResult {
    pub fn from_signals(n: u64, l: u64, signals: Vec<f64>, threshold: f64) -> Self {
        let total = mean(&signals);
        GaussSumResult {
            l,
            total,
            is_divisor: n.is_multiple_of(l),
            classified_factor: total.abs() >= threshold,
            signals,
        }
    }
}

fn check_threshold(threshold: f64) -> Result<()> {
    if threshold > 0.0 && threshold < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "threshold must lie in (0, 1), got {threshold}"
        )))
    }
}

/// Evaluates every trial factor with the closed-form signal.
pub fn evaluate(problem: &FactoringProblem, threshold: f64) -> Result<Vec<GaussSumResult>> {
    let n = problem.n();
    evaluate_with(problem, threshold, |l, m| {
        signal::interference_signal_ideal(n, l, m)
    })
}

/// Evaluates every trial factor with an arbitrary signal source `c(l, m)`.
///
/// Trial factors are processed in parallel on the current rayon pool; the
/// output is ordered by `l` and does not depend on the number of workers.
pub fn evaluate_with<F>(
    problem: &FactoringProblem,
    threshold: f64,
    signal: F,
) -> Result<Vec<GaussSumResult>>
where
    F: Fn(u64, u64) -> Result<f64> + Sync,
{
    check_threshold(threshold)?;
    let n = problem.n();
    let order = problem.order() as u64;
    problem
        .trial_set()
        .par_iter()
        .map(|&l| {
            let signals = (0..=order)
                .map(|m| signal(l, m))
                .collect::<Result<Vec<_>>>()?;
            Ok(GaussSumResult::from_signals(n, l, signals, threshold))
        })
        .collect()
}

/// Trial factors split by the threshold test.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub factors: Vec<u64>,
    pub non_factors: Vec<u64>,
}

/// Splits results by `|total| >= threshold`. `l = 1` is dropped unless
/// `include_one` is set.
pub fn classify(
    results: &[GaussSumResult],
    threshold: f64,
    include_one: bool,
) -> Result<Classification> {
    check_threshold(threshold)?;
    let mut out = Classification::default();
    for r in results.iter().filter(|r| include_one || r.l != 1) {
        if r.total.abs() >= threshold {
            out.factors.push(r.l);
        } else {
            out.non_factors.push(r.l);
        }
    }
    Ok(out)
}

/// Contrast `V = (A_f − A_n) / (A_f + A_n)` of mean absolute totals at
/// divisors and non-divisors.
pub fn contrast(results: &[GaussSumResult]) -> Result<f64> {
    let (divisors, others): (Vec<_>, Vec<_>) = results.iter().partition(|r| r.is_divisor);
    if divisors.is_empty() || others.is_empty() {
        return Err(Error::domain(
            "contrast needs at least one divisor and one non-divisor in the trial set",
        ));
    }
    let mean_abs =
        |rs: &[&GaussSumResult]| mean(&rs.iter().map(|r| r.total.abs()).collect::<Vec<_>>());
    contrast_of_means(mean_abs(&divisors), mean_abs(&others))
}

pub fn contrast_of_means(factor_mean: f64, non_factor_mean: f64) -> Result<f64> {
    let sum = factor_mean + non_factor_mean;
    if sum.is_nan() || sum <= 0.0 {
        return Err(Error::domain(
            "contrast undefined: both mean amplitudes vanish",
        ));
    }
    Ok((factor_mean - non_factor_mean) / sum)
}

/// Contrast as a function of the truncation order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ContrastReport {
    pub entries: Vec<(u32, f64)>,
}

impl ContrastReport {
    pub fn get(&self, order: u32) -> Option<f64> {
        self.entries
            .iter()
            .find(|(m, _)| *m == order)
            .map(|&(_, v)| v)
    }
}

/// Contrast for every order `1..=max_order`.
///
/// Signals are computed once up to `max_order`; the total at order `M` is the
/// mean of the first `M + 1` of them.
pub fn contrast_scan_with<F>(
    n: u64,
    trial_set: &[u64],
    max_order: u32,
    signal: F,
) -> Result<ContrastReport>
where
    F: Fn(u64, u64) -> Result<f64> + Sync,
{
    if max_order < 1 {
        return Err(Error::domain("maximum order must be >= 1"));
    }
    let problem = FactoringProblem::new(n, max_order, trial_set.to_vec())?;
    let full = evaluate_with(&problem, crate::DEFAULT_THRESHOLD, signal)?;
    let entries = (1..=max_order)
        .map(|order| {
            let truncated: Vec<_> = full
                .iter()
                .map(|r| {
                    GaussSumResult::from_signals(
                        n,
                        r.l,
                        r.signals[..=order as usize].to_vec(),
                        crate::DEFAULT_THRESHOLD,
                    )
                })
                .collect();
            Ok((order, contrast(&truncated)?))
        })
        .collect::<Result<_>>()?;
    Ok(ContrastReport { entries })
}

pub fn contrast_scan(n: u64, trial_set: &[u64], max_order: u32) -> Result<ContrastReport> {
    contrast_scan_with(n, trial_set, max_order, |l, m| {
        signal::interference_signal_ideal(n, l, m)
    })
}
