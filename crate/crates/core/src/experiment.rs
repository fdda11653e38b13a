//! Figure-style runs: signal traces, factorization patterns, contrast scans
//! and the adaptation comparison. Each run returns a table that renders to
//! CSV with a header row, LF line endings and 12-significant-digit floats.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::beam::{ensemble_cm, Adaptation, PhysicsConfig};
use crate::error::{Error, Result};
use crate::factor::{
    classify, contrast_scan_with, evaluate_with, trial_factors, Classification, ContrastReport,
    FactoringProblem, GaussSumResult, TrialStrategy,
};
use crate::format::csv_float;
use crate::pulse::simulate_cm;
use crate::schedule::Timing;
use crate::signal::interference_signal_ideal;

/// Source of the signals `c_m(l)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Physics {
    /// Closed form with exact phase reduction.
    Ideal,
    /// Ideal pulses propagated through the two-level simulation.
    Simulated(Timing),
    /// Gaussian beam, cloud averaging and the configured pulse lengths.
    Beam(PhysicsConfig),
}

impl Physics {
    pub fn signal(&self, n: u64, l: u64, m: u64) -> Result<f64> {
        match self {
            Physics::Ideal => interference_signal_ideal(n, l, m),
            Physics::Simulated(timing) => simulate_cm(n, l, m, timing, None),
            Physics::Beam(cfg) => ensemble_cm(n, l, m, cfg),
        }
    }
}

fn csv<I: IntoIterator<Item = String>>(header: &str, rows: I) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

/// `c_m(l)` for `m = 0..=M`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignalTrace {
    pub l: u64,
    pub signals: Vec<f64>,
}

impl SignalTrace {
    pub fn total(&self) -> f64 {
        crate::signal::mean(&self.signals)
    }

    pub fn to_csv(&self) -> String {
        csv(
            "m,c_m",
            self.signals
                .iter()
                .enumerate()
                .map(|(m, c)| format!("{m},{}", csv_float(*c))),
        )
    }
}

pub fn run_signal_trace(n: u64, l: u64, order: u32, physics: &Physics) -> Result<SignalTrace> {
    FactoringProblem::new(n, order, vec![l])?;
    let signals = (0..=order as u64)
        .into_par_iter()
        .map(|m| physics.signal(n, l, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(SignalTrace { l, signals })
}

/// Gauss sums over a trial set and the resulting classification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Factorization {
    pub n: u64,
    pub order: u32,
    pub threshold: f64,
    pub results: Vec<GaussSumResult>,
    pub classification: Classification,
}

impl Factorization {
    pub fn claimed_factors(&self) -> &[u64] {
        &self.classification.factors
    }

    pub fn to_csv(&self) -> String {
        csv(
            "l,C,abs_C,classified",
            self.results.iter().map(|r| {
                format!(
                    "{},{},{},{}",
                    r.l,
                    csv_float(r.total),
                    csv_float(r.total.abs()),
                    u8::from(r.classified_factor)
                )
            }),
        )
    }

    /// Human-readable summary of the claimed factors.
    pub fn summary(&self) -> String {
        let list: Vec<String> = self.claimed_factors().iter().map(u64::to_string).collect();
        format!(
            "N = {}, M = {}, threshold = {}: {} claimed factor(s): [{}]",
            self.n,
            self.order,
            csv_float(self.threshold),
            list.len(),
            list.join(", ")
        )
    }
}

pub fn run_factorization(
    n: u64,
    order: u32,
    strategy: TrialStrategy,
    threshold: f64,
    include_one: bool,
    physics: &Physics,
) -> Result<Factorization> {
    let problem = FactoringProblem::with_strategy(n, order, strategy)?;
    let results = evaluate_with(&problem, threshold, |l, m| physics.signal(n, l, m))?;
    let classification = classify(&results, threshold, include_one)?;
    Ok(Factorization {
        n,
        order,
        threshold,
        results,
        classification,
    })
}

impl ContrastReport {
    pub fn to_csv(&self) -> String {
        csv(
            "M,V",
            self.entries
                .iter()
                .map(|(m, v)| format!("{m},{}", csv_float(*v))),
        )
    }
}

pub fn run_contrast_scan(
    n: u64,
    max_order: u32,
    strategy: TrialStrategy,
    physics: &Physics,
) -> Result<ContrastReport> {
    let trial_set = trial_factors(n, strategy)?;
    contrast_scan_with(n, &trial_set, max_order, |l, m| physics.signal(n, l, m))
}

/// Factor-averaged traces with and without pulse-length adaptation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdaptationComparison {
    pub factors: Vec<u64>,
    pub adapted: Vec<f64>,
    pub fixed: Vec<f64>,
}

impl AdaptationComparison {
    pub fn to_csv(&self) -> String {
        csv(
            "m,mean_c_adapted,mean_c_fixed",
            self.adapted
                .iter()
                .zip(&self.fixed)
                .enumerate()
                .map(|(m, (a, f))| format!("{m},{},{}", csv_float(*a), csv_float(*f))),
        )
    }
}

/// Default factors averaged for the comparison at N = 263193.
pub const DEFAULT_COMPARISON_FACTORS: [u64; 3] = [3, 7, 151];

pub fn run_adaptation_comparison(
    n: u64,
    factors: &[u64],
    order: u32,
    physics: &Physics,
) -> Result<AdaptationComparison> {
    if factors.is_empty() {
        return Err(Error::domain("at least one factor is required"));
    }
    if let Some(l) = factors.iter().find(|&&l| l == 0 || !n.is_multiple_of(l)) {
        return Err(Error::domain(format!("{l} does not divide {n}")));
    }
    let (adapted, fixed) = match physics {
        Physics::Beam(cfg) => (
            Physics::Beam(cfg.with_adaptation(Adaptation::Parabolic)),
            Physics::Beam(cfg.with_adaptation(Adaptation::Off)),
        ),
        other => (other.clone(), other.clone()),
    };
    let average = |physics: &Physics| -> Result<Vec<f64>> {
        (0..=order as u64)
            .into_par_iter()
            .map(|m| {
                let cs = factors
                    .iter()
                    .map(|&l| physics.signal(n, l, m))
                    .collect::<Result<Vec<_>>>()?;
                Ok(crate::signal::mean(&cs))
            })
            .collect()
    };
    Ok(AdaptationComparison {
        factors: factors.to_vec(),
        adapted: average(&adapted)?,
        fixed: average(&fixed)?,
    })
}
