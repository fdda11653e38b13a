//! Two-level dynamics under resonant Rabi pulses.
//!
//! Free evolution between pulses is the identity in the rotating frame, so a
//! schedule acts on the state as the ordered product of its pulse rotations.
//! The rotation of area θ and laser phase φ is
//!
//! ```text
//! U(θ, φ) = [ cos(θ/2)               −i e^{−iφ} sin(θ/2) ]
//!           [ −i e^{+iφ} sin(θ/2)    cos(θ/2)            ]
//! ```
//!
//! in the basis (|g⟩, |e⟩), and the readout is `c = P_e − P_g`. With these two
//! conventions the canonical schedule yields `c = cos(2π m² N / l)`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schedule::{phase_schedule, PulseSpec, Timing};

/// Largest deviation of `|g|² + |e|²` from 1 accepted as input to [`evolve`].
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Amplitudes of |F=1, m_F=0⟩ (ground) and |F=2, m_F=0⟩ (excited).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoLevelState {
    pub ground: Complex64,
    pub excited: Complex64,
}

impl TwoLevelState {
    pub fn new(ground: Complex64, excited: Complex64) -> Result<Self> {
        let s = TwoLevelState { ground, excited };
        s.check_normalized()?;
        Ok(s)
    }

    pub fn ground() -> Self {
        TwoLevelState {
            ground: Complex64::new(1.0, 0.0),
            excited: Complex64::new(0.0, 0.0),
        }
    }

    pub fn excited() -> Self {
        TwoLevelState {
            ground: Complex64::new(0.0, 0.0),
            excited: Complex64::new(1.0, 0.0),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.ground.norm_sqr() + self.excited.norm_sqr()
    }

    fn check_normalized(&self) -> Result<()> {
        let norm = self.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE || !norm.is_finite() {
            return Err(Error::domain(format!(
                "state is not normalized: |ψ|² = {norm}"
            )));
        }
        Ok(())
    }
}

/// Population difference `P_e − P_g`.
pub fn readout(state: &TwoLevelState) -> f64 {
    state.excited.norm_sqr() - state.ground.norm_sqr()
}

/// A 2×2 complex matrix acting on (ground, excited).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseUnitary {
    pub gg: Complex64,
    pub ge: Complex64,
    pub eg: Complex64,
    pub ee: Complex64,
}

impl PulseUnitary {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        PulseUnitary {
            gg: one,
            ge: zero,
            eg: zero,
            ee: one,
        }
    }

    pub fn apply(&self, s: &TwoLevelState) -> TwoLevelState {
        TwoLevelState {
            ground: self.gg * s.ground + self.ge * s.excited,
            excited: self.eg * s.ground + self.ee * s.excited,
        }
    }

    /// Matrix product `self · rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &PulseUnitary) -> PulseUnitary {
        PulseUnitary {
            gg: self.gg * rhs.gg + self.ge * rhs.eg,
            ge: self.gg * rhs.ge + self.ge * rhs.ee,
            eg: self.eg * rhs.gg + self.ee * rhs.eg,
            ee: self.eg * rhs.ge + self.ee * rhs.ee,
        }
    }

    pub fn adjoint(&self) -> PulseUnitary {
        PulseUnitary {
            gg: self.gg.conj(),
            ge: self.eg.conj(),
            eg: self.ge.conj(),
            ee: self.ee.conj(),
        }
    }

    pub fn determinant(&self) -> Complex64 {
        self.gg * self.ee - self.ge * self.eg
    }

    /// Largest entry-wise deviation of `U†U` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        self.adjoint()
            .compose(self)
            .max_deviation(&PulseUnitary::identity())
    }

    pub fn max_deviation(&self, other: &PulseUnitary) -> f64 {
        [
            self.gg - other.gg,
            self.ge - other.ge,
            self.eg - other.eg,
            self.ee - other.ee,
        ]
        .iter()
        .map(|d| d.norm())
        .fold(0.0, f64::max)
    }
}

/// Resonant rotation of area `area` (θ) about the axis set by `phase` (φ).
pub fn pulse_unitary(area: f64, phase: f64) -> PulseUnitary {
    let (s, c) = (area / 2.0).sin_cos();
    let minus_i = Complex64::new(0.0, -1.0);
    PulseUnitary {
        gg: Complex64::new(c, 0.0),
        ge: minus_i * Complex64::from_polar(s, -phase),
        eg: minus_i * Complex64::from_polar(s, phase),
        ee: Complex64::new(c, 0.0),
    }
}

/// Supplies the rotation actually applied for each pulse.
pub trait PulseModel {
    /// `(area, phase)` in radians applied for `pulses[index]`.
    fn effective(&self, pulses: &[PulseSpec], index: usize) -> (f64, f64);
}

/// Nominal areas and exact phases.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdealPulses;

impl PulseModel for IdealPulses {
    fn effective(&self, pulses: &[PulseSpec], index: usize) -> (f64, f64) {
        let p = &pulses[index];
        (p.area_target(), p.phase.radians())
    }
}

/// Explicit per-pulse areas; phases stay nominal.
impl PulseModel for [f64] {
    fn effective(&self, pulses: &[PulseSpec], index: usize) -> (f64, f64) {
        (self[index], pulses[index].phase.radians())
    }
}

/// Zero-mean Gaussian laser-phase noise.
///
/// Each pulse gets its own generator keyed by `(seed, l, m, pulse index)`, so
/// the noise realisation does not depend on evaluation order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseJitter {
    pub sigma_rad: f64,
    pub seed: u64,
}

impl PhaseJitter {
    /// Default width, 1 mrad.
    pub const DEFAULT_SIGMA: f64 = 1e-3;

    pub fn offset(&self, l: u64, m: u64, index: usize) -> f64 {
        let mut key = [0u8; 32];
        for (chunk, word) in key.chunks_exact_mut(8).zip([self.seed, l, m, index as u64]) {
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        let z: f64 = StandardNormal.sample(&mut rng);
        self.sigma_rad * z
    }

    /// Binds the jitter to the `(l, m)` of one schedule.
    pub fn for_schedule(self, l: u64, m: u64) -> JitteredPulses {
        JitteredPulses { jitter: self, l, m }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct JitteredPulses {
    jitter: PhaseJitter,
    l: u64,
    m: u64,
}

impl PulseModel for JitteredPulses {
    fn effective(&self, pulses: &[PulseSpec], index: usize) -> (f64, f64) {
        let (area, phase) = IdealPulses.effective(pulses, index);
        (area, phase + self.jitter.offset(self.l, self.m, index))
    }
}

/// Propagates `state` through `pulses` in order.
pub fn evolve(
    state: &TwoLevelState,
    pulses: &[PulseSpec],
    model: Option<&dyn PulseModel>,
) -> Result<TwoLevelState> {
    state.check_normalized()?;
    let model = model.unwrap_or(&IdealPulses);
    Ok((0..pulses.len()).fold(*state, |s, i| {
        let (area, phase) = model.effective(pulses, i);
        pulse_unitary(area, phase).apply(&s)
    }))
}

/// Builds the canonical schedule, evolves from the ground state and returns
/// the readout. Without a model the result equals the closed-form signal.
pub fn simulate_cm(
    n: u64,
    l: u64,
    m: u64,
    timing: &Timing,
    model: Option<&dyn PulseModel>,
) -> Result<f64> {
    let schedule = phase_schedule(n, l, m, *timing)?;
    let end = evolve(&TwoLevelState::ground(), schedule.pulses(), model)?;
    Ok(readout(&end))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// exp(−iθ/2 (cos φ σx + sin φ σy)) by scaled Taylor series and squaring.
    fn expm_oracle(area: f64, phase: f64) -> PulseUnitary {
        let a = c(0.0, -area / 2.0);
        let (nx, ny) = (phase.cos(), phase.sin());
        let gen = PulseUnitary {
            gg: c(0.0, 0.0),
            ge: a * c(nx, -ny),
            eg: a * c(nx, ny),
            ee: c(0.0, 0.0),
        };
        let squarings = 10;
        let scale = 1.0 / f64::from(1u32 << squarings);
        let x = PulseUnitary {
            gg: gen.gg * scale,
            ge: gen.ge * scale,
            eg: gen.eg * scale,
            ee: gen.ee * scale,
        };
        let mut sum = PulseUnitary::identity();
        let mut term = PulseUnitary::identity();
        for j in 1..30 {
            term = term.compose(&x);
            let f = 1.0 / j as f64;
            term = PulseUnitary {
                gg: term.gg * f,
                ge: term.ge * f,
                eg: term.eg * f,
                ee: term.ee * f,
            };
            sum = PulseUnitary {
                gg: sum.gg + term.gg,
                ge: sum.ge + term.ge,
                eg: sum.eg + term.eg,
                ee: sum.ee + term.ee,
            };
        }
        (0..squarings).fold(sum, |u, _| u.compose(&u))
    }

    #[test]
    fn zero_area_is_identity() {
        for phase in [0.0, 1.0, -2.5, 7.0] {
            assert!(pulse_unitary(0.0, phase).max_deviation(&PulseUnitary::identity()) < 1e-15);
        }
    }

    #[test]
    fn pi_pulse_inverts_ground() {
        let s = pulse_unitary(PI, 0.0).apply(&TwoLevelState::ground());
        assert!(s.ground.norm() < 1e-15);
        assert!((s.excited - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn half_pi_at_minus_ninety() {
        let s = pulse_unitary(FRAC_PI_2, -FRAC_PI_2).apply(&TwoLevelState::ground());
        // u_eg = −i e^{−iπ/2} / √2 = −1/√2
        assert!((s.ground - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((s.excited - c(-FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        let o = expm_oracle(FRAC_PI_2, -FRAC_PI_2).apply(&TwoLevelState::ground());
        assert!((s.ground - o.ground).norm() < 1e-12);
        assert!((s.excited - o.excited).norm() < 1e-12);
    }

    #[test]
    fn matches_matrix_exponential() {
        for &(area, phase) in &[
            (0.3, 0.1),
            (PI, 2.0),
            (5.0, -1.3),
            (FRAC_PI_2, 4.4),
            (12.0, 0.7),
        ] {
            let d = pulse_unitary(area, phase).max_deviation(&expm_oracle(area, phase));
            assert!(d < 1e-12, "area {area} phase {phase}: {d}");
        }
    }

    #[test]
    fn two_half_pi_make_one_pi() {
        for phase in [0.0, 0.4, -FRAC_PI_2, 3.0] {
            let h = pulse_unitary(FRAC_PI_2, phase);
            let d = h.compose(&h).max_deviation(&pulse_unitary(PI, phase));
            assert!(d < 1e-12);
        }
    }

    #[test]
    fn readout_values() {
        assert_eq!(readout(&TwoLevelState::excited()), 1.0);
        assert_eq!(readout(&TwoLevelState::ground()), -1.0);
        let sup = TwoLevelState::new(c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)).unwrap();
        assert!(readout(&sup).abs() < 1e-15);
    }

    #[test]
    fn evolve_rejects_unnormalized() {
        let bad = TwoLevelState {
            ground: c(1.0, 0.0),
            excited: c(1.0, 0.0),
        };
        assert!(evolve(&bad, &[], None).is_err());
        assert!(TwoLevelState::new(c(0.5, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn empty_schedule_leaves_state() {
        let s = TwoLevelState::new(c(0.6, 0.0), c(0.0, 0.8)).unwrap();
        assert_eq!(evolve(&s, &[], None).unwrap(), s);
    }

    #[test]
    fn canonical_m_zero_divisor() {
        let cm = simulate_cm(263193, 151, 0, &Timing::default(), None).unwrap();
        assert!((cm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_half_integer() {
        let cm = simulate_cm(105, 2, 1, &Timing::default(), None).unwrap();
        assert!((cm + 1.0).abs() < 1e-12);
    }

    #[test]
    fn jitter_is_keyed() {
        let j = PhaseJitter {
            sigma_rad: PhaseJitter::DEFAULT_SIGMA,
            seed: 9,
        };
        assert_eq!(j.offset(151, 3, 2), j.offset(151, 3, 2));
        assert_ne!(j.offset(151, 3, 2), j.offset(151, 3, 1));
        assert_ne!(j.offset(151, 3, 2), j.offset(150, 3, 2));
        let quiet = PhaseJitter {
            sigma_rad: 0.0,
            seed: 9,
        };
        assert_eq!(quiet.offset(151, 3, 2), 0.0);
    }

    #[test]
    fn jitter_perturbs_slightly() {
        let timing = Timing::default();
        let j = PhaseJitter {
            sigma_rad: PhaseJitter::DEFAULT_SIGMA,
            seed: 1,
        }
        .for_schedule(150, 5);
        let noisy = simulate_cm(263193, 150, 5, &timing, Some(&j)).unwrap();
        let ideal = simulate_cm(263193, 150, 5, &timing, None).unwrap();
        assert!(noisy != ideal);
        assert!((noisy - ideal).abs() < 0.05);
    }
}
