//! Gaussian Raman-beam inhomogeneity and averaging over the atomic cloud.
//!
//! Atoms fly through the beam while the sequence runs, so successive pulses
//! reach them at different positions of the Gaussian intensity profile. The
//! Rabi frequency is calibrated so that a π-pulse takes `tau_center` at the
//! beam axis and `tau_edge` at the edge position `x_edge`; the parabolic
//! adaptation interpolates the pulse length between those two points.
//!
//! Geometry: the pulse sequence is centered in time on the beam axis. Pulse
//! `j` meets an atom at longitudinal position `v · (t_j − t_mid)` plus the
//! atom's offset along the flight direction; the offset across the flight
//! direction adds in quadrature.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pulse::{evolve, readout, JitteredPulses, PhaseJitter, PulseModel, TwoLevelState};
use crate::quadrature::{monte_carlo_disc, uniform_disc, DiscSample};
use crate::schedule::{phase_schedule, PhaseSchedule, PulseSpec, Timing};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Adaptation {
    /// Every π-pulse lasts `tau_fixed`.
    #[default]
    Off,
    /// Pulse length follows the parabola through the two calibration points.
    Parabolic,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleScheme {
    /// Product Gauss–Legendre × equal-angle rule over the cloud disc.
    #[default]
    Quadrature,
    /// Seeded uniform samples of the cloud disc.
    MonteCarlo,
}

/// Beam geometry, atom kinematics, cloud size and pulse-length model.
///
/// Loadable from a flat `key = value` file; every key is optional and falls
/// back to the defaults below.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicsConfig {
    /// 1/e² intensity diameter of the Raman beams.
    pub beam_diameter_mm: f64,
    pub atom_speed_m_s: f64,
    pub cloud_diameter_mm: f64,
    /// π-pulse length measured at the beam axis.
    pub tau_center_us: f64,
    /// π-pulse length measured at the edge of the interaction region.
    pub tau_edge_us: f64,
    /// π-pulse length used when adaptation is off.
    pub tau_fixed_us: f64,
    /// Free-evolution time T between pulses.
    pub inter_pulse_us: f64,
    pub adaptation: Adaptation,
    pub ensemble_samples: usize,
    pub ensemble_scheme: EnsembleScheme,
    pub seed: u64,
    pub phase_jitter: bool,
    pub phase_jitter_rad: f64,
}

impl Default for PhysicsConfig {
    fn default() -> Self {
        PhysicsConfig {
            beam_diameter_mm: 30.0,
            atom_speed_m_s: 4.4,
            cloud_diameter_mm: 5.0,
            tau_center_us: 20.0,
            tau_edge_us: 26.0,
            tau_fixed_us: 23.0,
            inter_pulse_us: 100.0,
            adaptation: Adaptation::Off,
            ensemble_samples: 64,
            ensemble_scheme: EnsembleScheme::Quadrature,
            seed: 0,
            phase_jitter: false,
            phase_jitter_rad: PhaseJitter::DEFAULT_SIGMA,
        }
    }
}

impl PhysicsConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: PhysicsConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> std::io::Result<Result<Self>> {
        Ok(Self::from_toml_str(&std::fs::read_to_string(path)?))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("flat config always serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("beam_diameter_mm", self.beam_diameter_mm),
            ("atom_speed_m_s", self.atom_speed_m_s),
            ("cloud_diameter_mm", self.cloud_diameter_mm),
            ("tau_center_us", self.tau_center_us),
            ("tau_edge_us", self.tau_edge_us),
            ("tau_fixed_us", self.tau_fixed_us),
            ("inter_pulse_us", self.inter_pulse_us),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.tau_center_us >= self.tau_edge_us {
            return Err(Error::Config(format!(
                "tau_center_us ({}) must be shorter than tau_edge_us ({})",
                self.tau_center_us, self.tau_edge_us
            )));
        }
        if self.ensemble_samples == 0 {
            return Err(Error::Config("ensemble_samples must be >= 1".into()));
        }
        if !(self.phase_jitter_rad.is_finite() && self.phase_jitter_rad >= 0.0) {
            return Err(Error::Config("phase_jitter_rad must be >= 0".into()));
        }
        Ok(())
    }

    pub fn with_adaptation(&self, adaptation: Adaptation) -> Self {
        PhysicsConfig {
            adaptation,
            ..self.clone()
        }
    }

    /// Nominal schedule timing: T and the fixed π-pulse length.
    pub fn timing(&self) -> Timing {
        Timing::with_pi_length(self.inter_pulse_us, self.tau_fixed_us)
    }

    /// 1/e² intensity radius w.
    pub fn beam_radius_mm(&self) -> f64 {
        self.beam_diameter_mm / 2.0
    }

    /// Ω0 in rad/s, fixed by `Ω0 · tau_center = π`.
    pub fn peak_rabi(&self) -> f64 {
        PI / (self.tau_center_us * 1e-6)
    }

    /// `exp(−2x²/w²)`, the Rabi frequency relative to the axis.
    fn profile(&self, x_mm: f64) -> f64 {
        let w = self.beam_radius_mm();
        (-2.0 * x_mm * x_mm / (w * w)).exp()
    }

    /// Position where `Ω(x_edge) · tau_edge = π`.
    pub fn edge_position_mm(&self) -> f64 {
        self.beam_radius_mm() * ((self.tau_edge_us / self.tau_center_us).ln() / 2.0).sqrt()
    }

    /// Atom speed in mm/µs.
    fn speed_mm_per_us(&self) -> f64 {
        self.atom_speed_m_s * 1e-3
    }

    fn jitter(&self) -> Option<PhaseJitter> {
        self.phase_jitter.then_some(PhaseJitter {
            sigma_rad: self.phase_jitter_rad,
            seed: self.seed,
        })
    }

    fn cloud_samples(&self) -> Vec<DiscSample> {
        let radius = self.cloud_diameter_mm / 2.0;
        match self.ensemble_scheme {
            EnsembleScheme::Quadrature => {
                let radial = self.ensemble_samples.isqrt().max(1);
                let angular = (self.ensemble_samples / radial).max(1);
                uniform_disc(radius, radial, angular)
            }
            EnsembleScheme::MonteCarlo => {
                monte_carlo_disc(radius, self.ensemble_samples, self.seed)
            }
        }
    }
}

/// Rabi frequency (rad/s) at distance `x_mm` from the beam axis.
pub fn rabi_at_position(x_mm: f64, config: &PhysicsConfig) -> f64 {
    config.peak_rabi() * config.profile(x_mm)
}

/// Programmed π-pulse length (µs) at `x_mm`.
pub fn adapted_pulse_length(x_mm: f64, config: &PhysicsConfig) -> f64 {
    match config.adaptation {
        Adaptation::Off => config.tau_fixed_us,
        Adaptation::Parabolic => {
            let s = x_mm / config.edge_position_mm();
            config.tau_center_us + (config.tau_edge_us - config.tau_center_us) * s * s
        }
    }
}

/// Area (rad) of a π-pulse met at `x_mm`; a π/2-pulse gets half of it.
pub fn pulse_area(x_mm: f64, config: &PhysicsConfig) -> f64 {
    // Ω(x)·τ(x) with Ω0 = π/tau_center folded in, exact at the axis.
    PI * (adapted_pulse_length(x_mm, config) / config.tau_center_us) * config.profile(x_mm)
}

/// Displacement of one atom from the cloud center.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EntryOffset {
    pub along_mm: f64,
    pub across_mm: f64,
}

impl EntryOffset {
    pub fn along(mm: f64) -> Self {
        EntryOffset {
            along_mm: mm,
            across_mm: 0.0,
        }
    }
}

/// Where an atom is when each pulse of a schedule fires.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    /// Position along the flight direction, one per pulse.
    pub longitudinal_mm: Vec<f64>,
    pub transverse_mm: f64,
    /// Set when `v · (m + 2) · T` exceeds the beam diameter.
    pub exceeds_beam: bool,
}

impl Trajectory {
    /// Distance from the beam axis at pulse `j`.
    pub fn radial_mm(&self, j: usize) -> f64 {
        self.longitudinal_mm[j].hypot(self.transverse_mm)
    }
}

/// Nominal interaction time `(m + 2) · T` times the atom speed, in mm.
pub fn nominal_traversal_mm(m: u64, config: &PhysicsConfig) -> f64 {
    config.speed_mm_per_us() * (m as f64 + 2.0) * config.inter_pulse_us
}

pub fn trajectory_positions(
    schedule: &PhaseSchedule,
    offset: EntryOffset,
    config: &PhysicsConfig,
) -> Trajectory {
    let traversal = nominal_traversal_mm(schedule.m(), config);
    let exceeds_beam = traversal > config.beam_diameter_mm;
    if exceeds_beam {
        log::warn!(
            "m = {} needs {traversal:.2} mm of flight, more than the {} mm beam",
            schedule.m(),
            config.beam_diameter_mm
        );
    }
    Trajectory {
        longitudinal_mm: positions(schedule.pulses(), offset.along_mm, config),
        transverse_mm: offset.across_mm,
        exceeds_beam,
    }
}

fn positions(pulses: &[PulseSpec], along_mm: f64, config: &PhysicsConfig) -> Vec<f64> {
    let mid = match (pulses.first(), pulses.last()) {
        (Some(a), Some(b)) => (a.center_us() + b.center_us()) / 2.0,
        _ => 0.0,
    };
    let v = config.speed_mm_per_us();
    pulses
        .iter()
        .map(|p| v * (p.center_us() - mid) + along_mm)
        .collect()
}

/// Pulse areas seen by one atom along its trajectory.
pub struct AtomPulses<'a> {
    config: &'a PhysicsConfig,
    trajectory: Trajectory,
    jitter: Option<JitteredPulses>,
}

impl<'a> AtomPulses<'a> {
    pub fn new(schedule: &PhaseSchedule, offset: EntryOffset, config: &'a PhysicsConfig) -> Self {
        AtomPulses {
            config,
            trajectory: trajectory_positions(schedule, offset, config),
            jitter: config
                .jitter()
                .map(|j| j.for_schedule(schedule.l(), schedule.m())),
        }
    }

    pub fn trajectory(&self) -> &Trajectory {
        &self.trajectory
    }
}

impl PulseModel for AtomPulses<'_> {
    fn effective(&self, pulses: &[PulseSpec], index: usize) -> (f64, f64) {
        let (_, phase) = match &self.jitter {
            Some(j) => j.effective(pulses, index),
            None => (0.0, pulses[index].phase.radians()),
        };
        let area =
            pulse_area(self.trajectory.radial_mm(index), self.config) * pulses[index].area_over_pi;
        (area, phase)
    }
}

/// Cloud-averaged readout `c_m(l)` under the beam model.
///
/// Samples are summed in a fixed order, so the result is bit-reproducible.
pub fn ensemble_cm(n: u64, l: u64, m: u64, config: &PhysicsConfig) -> Result<f64> {
    config.validate()?;
    let timing = config.timing();
    let schedule = phase_schedule(n, l, m, timing)?;
    let mut acc = 0.0;
    for s in config.cloud_samples() {
        let atom = AtomPulses::new(
            &schedule,
            EntryOffset {
                along_mm: s.x,
                across_mm: s.y,
            },
            config,
        );
        acc += s.weight * simulate_schedule(&schedule, &atom)?;
    }
    Ok(acc)
}

fn simulate_schedule(schedule: &PhaseSchedule, model: &dyn PulseModel) -> Result<f64> {
    let end = evolve(&TwoLevelState::ground(), schedule.pulses(), Some(model))?;
    Ok(readout(&end))
}

/// Single atom at the cloud center, no averaging.
pub fn center_atom_cm(n: u64, l: u64, m: u64, config: &PhysicsConfig) -> Result<f64> {
    let schedule = phase_schedule(n, l, m, config.timing())?;
    let atom = AtomPulses::new(&schedule, EntryOffset::default(), config);
    simulate_schedule(&schedule, &atom)
}
