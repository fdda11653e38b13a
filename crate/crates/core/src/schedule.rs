//! The factorization pulse sequence and its text export.
//!
//! A schedule for `(N, l, m)` is one π/2-pulse at −90°, the π-pulses
//! `k = 0..=m` at phases `φ_k(l)`, and a closing π/2-pulse at −90°. Pulses are
//! separated by a free-evolution time `T`.
//!
//! Export format, one header line then one line per pulse:
//!
//! ```text
//! # gauss-schedule N=263193 l=151 m=0 T_us=100
//! initial,0,11.5,0.5,270.000000
//! 0,111.5,23,1,0.000000
//! final,234.5,11.5,0.5,270.000000
//! ```
//!
//! Columns are `k,start_us,duration_us,area_over_pi,phase_deg`; the phase is
//! printed in `[0, 360)` rounded half-to-even to six decimals.

use std::f64::consts::PI;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::{pulse_phase, PiPhase};

/// Pulse lengths and spacing, all in microseconds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    /// Free-evolution time between consecutive pulses.
    pub t_us: f64,
    pub tau_pi_us: f64,
    pub tau_pi2_us: f64,
}

impl Default for Timing {
    fn default() -> Self {
        Timing::with_pi_length(100.0, 23.0)
    }
}

impl Timing {
    /// π/2-pulses last half as long as π-pulses.
    pub fn with_pi_length(t_us: f64, tau_pi_us: f64) -> Self {
        Timing {
            t_us,
            tau_pi_us,
            tau_pi2_us: tau_pi_us / 2.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("T", self.t_us),
            ("tau_pi", self.tau_pi_us),
            ("tau_pi2", self.tau_pi2_us),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Position of a pulse within the sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PulseRole {
    Initial,
    /// The k-th π-pulse.
    Pi(u64),
    Final,
}

impl fmt::Display for PulseRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PulseRole::Initial => f.write_str("initial"),
            PulseRole::Pi(k) => write!(f, "{k}"),
            PulseRole::Final => f.write_str("final"),
        }
    }
}

impl FromStr for PulseRole {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "initial" => Ok(PulseRole::Initial),
            "final" => Ok(PulseRole::Final),
            k => k
                .parse()
                .map(PulseRole::Pi)
                .map_err(|_| format!("unknown pulse index {k:?}")),
        }
    }
}

/// One timed, phased pulse.
#[derive(Clone, Debug, PartialEq)]
pub struct PulseSpec {
    pub role: PulseRole,
    /// Target rotation angle in units of π (1 for π-pulses, 1/2 for π/2).
    pub area_over_pi: f64,
    pub phase: PiPhase,
    pub start_us: f64,
    pub duration_us: f64,
}

impl PulseSpec {
    pub fn area_target(&self) -> f64 {
        PI * self.area_over_pi
    }

    pub fn center_us(&self) -> f64 {
        self.start_us + self.duration_us / 2.0
    }
}

/// The full π/2 – (π)^(m+1) – π/2 sequence for one `(N, l, m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSchedule {
    n: u64,
    l: u64,
    m: u64,
    timing: Timing,
    pulses: Vec<PulseSpec>,
}

/// Builds the canonical schedule.
pub fn phase_schedule(n: u64, l: u64, m: u64, timing: Timing) -> Result<PhaseSchedule> {
    timing.validate()?;
    let mut pulses = Vec::with_capacity(m as usize + 3);
    let mut start = 0.0;
    let mut push = |role, area_over_pi, phase, duration_us| {
        pulses.push(PulseSpec {
            role,
            area_over_pi,
            phase,
            start_us: start,
            duration_us,
        });
        start += duration_us + timing.t_us;
    };
    push(
        PulseRole::Initial,
        0.5,
        PiPhase::MINUS_HALF_PI,
        timing.tau_pi2_us,
    );
    for k in 0..=m {
        push(
            PulseRole::Pi(k),
            1.0,
            pulse_phase(k, n, l)?,
            timing.tau_pi_us,
        );
    }
    push(
        PulseRole::Final,
        0.5,
        PiPhase::MINUS_HALF_PI,
        timing.tau_pi2_us,
    );
    Ok(PhaseSchedule {
        n,
        l,
        m,
        timing,
        pulses,
    })
}

impl PhaseSchedule {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    /// Factorization index; the schedule has `m + 1` π-pulses.
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn timing(&self) -> &Timing {
        &self.timing
    }

    pub fn pulses(&self) -> &[PulseSpec] {
        &self.pulses
    }

    /// Midpoint between the centers of the first and last pulse.
    pub fn midpoint_us(&self) -> f64 {
        match (self.pulses.first(), self.pulses.last()) {
            (Some(a), Some(b)) => (a.center_us() + b.center_us()) / 2.0,
            _ => 0.0,
        }
    }

    /// Writes the export format.
    pub fn to_export_string(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "# gauss-schedule N={} l={} m={} T_us={}",
            self.n, self.l, self.m, self.timing.t_us
        )
        .unwrap();
        for p in &self.pulses {
            writeln!(
                out,
                "{},{},{},{},{}",
                p.role,
                p.start_us,
                p.duration_us,
                p.area_over_pi,
                p.phase.degrees_string()
            )
            .unwrap();
        }
        out
    }

    /// Parses the export format.
    ///
    /// Phases are rebuilt exactly from `N`, `l` and `k` and checked against
    /// the printed degrees, so a parsed schedule re-exports byte-identically.
    pub fn parse_export(text: &str) -> Result<PhaseSchedule> {
        let mut lines = text.lines().enumerate().map(|(i, s)| (i + 1, s));
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty schedule file"))?;
        let (n, l, m, t_us) = parse_header(header)?;

        let mut pulses = Vec::new();
        for (no, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(Error::parse(
                    no,
                    format!("expected 5 fields, found {}", fields.len()),
                ));
            }
            let role: PulseRole = fields[0].parse().map_err(|e| Error::parse(no, e))?;
            let num = |i: usize| -> Result<f64> {
                fields[i]
                    .parse::<f64>()
                    .map_err(|e| Error::parse(no, format!("field {}: {e}", i + 1)))
            };
            let phase = match role {
                PulseRole::Pi(k) => pulse_phase(k, n, l)?,
                _ => PiPhase::MINUS_HALF_PI,
            };
            if phase.degrees_string() != fields[4] {
                return Err(Error::parse(
                    no,
                    format!(
                        "phase {} does not match {} expected for pulse {role}",
                        fields[4],
                        phase.degrees_string()
                    ),
                ));
            }
            pulses.push(PulseSpec {
                role,
                start_us: num(1)?,
                duration_us: num(2)?,
                area_over_pi: num(3)?,
                phase,
            });
        }

        let tau_pi2_us = pulses.first().map_or(0.0, |p| p.duration_us);
        let tau_pi_us = pulses.get(1).map_or(0.0, |p| p.duration_us);
        let schedule = PhaseSchedule {
            n,
            l,
            m,
            timing: Timing {
                t_us,
                tau_pi_us,
                tau_pi2_us,
            },
            pulses,
        };
        schedule.check_structure().map_err(|e| match e {
            Error::Domain(msg) => Error::parse(0, msg),
            other => other,
        })?;
        Ok(schedule)
    }

    /// Checks the canonical shape: roles in order, positive durations, start
    /// times spaced by `T` plus the preceding duration.
    pub fn check_structure(&self) -> Result<()> {
        let expected = self.m as usize + 3;
        if self.pulses.len() != expected {
            return Err(Error::domain(format!(
                "schedule for m={} needs {expected} pulses, found {}",
                self.m,
                self.pulses.len()
            )));
        }
        for (i, p) in self.pulses.iter().enumerate() {
            let (role, area) = match i {
                0 => (PulseRole::Initial, 0.5),
                i if i + 1 == expected => (PulseRole::Final, 0.5),
                i => (PulseRole::Pi(i as u64 - 1), 1.0),
            };
            if p.role != role || p.area_over_pi != area {
                return Err(Error::domain(format!(
                    "pulse {i} should be {role} with area {area}π"
                )));
            }
            if p.duration_us.is_nan() || p.duration_us <= 0.0 {
                return Err(Error::domain(format!(
                    "pulse {i} has non-positive duration"
                )));
            }
        }
        for w in self.pulses.windows(2) {
            let gap = w[1].start_us - (w[0].start_us + w[0].duration_us);
            if w[1].start_us <= w[0].start_us
                || (gap - self.timing.t_us).abs() > 1e-9 * self.timing.t_us.max(1.0)
            {
                return Err(Error::domain("pulse start times are not spaced by T"));
            }
        }
        Ok(())
    }
}

fn parse_header(line: &str) -> Result<(u64, u64, u64, f64)> {
    let rest = line
        .strip_prefix("# gauss-schedule")
        .ok_or_else(|| Error::parse(1, "missing '# gauss-schedule' header"))?;
    let mut n = None;
    let mut l = None;
    let mut m = None;
    let mut t = None;
    for item in rest.split_whitespace() {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Error::parse(1, format!("malformed header item {item:?}")))?;
        let bad = |e: &dyn fmt::Display| Error::parse(1, format!("{key}: {e}"));
        match key {
            "N" => n = Some(value.parse::<u64>().map_err(|e| bad(&e))?),
            "l" => l = Some(value.parse::<u64>().map_err(|e| bad(&e))?),
            "m" => m = Some(value.parse::<u64>().map_err(|e| bad(&e))?),
            "T_us" => t = Some(value.parse::<f64>().map_err(|e| bad(&e))?),
            _ => return Err(Error::parse(1, format!("unknown header key {key:?}"))),
        }
    }
    match (n, l, m, t) {
        (Some(n), Some(l), Some(m), Some(t)) if l > 0 => Ok((n, l, m, t)),
        _ => Err(Error::parse(1, "header needs N, l >= 1, m and T_us")),
    }
}
