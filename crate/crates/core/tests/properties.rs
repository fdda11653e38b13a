//! Invariants of the closed form, the pulse simulation and the beam model.

mod common;

use std::f64::consts::PI;

use gauss_factor::beam::{
    adapted_pulse_length, ensemble_cm, pulse_area, rabi_at_position, EntryOffset,
};
use gauss_factor::pulse::{evolve, pulse_unitary, readout, simulate_cm, PulseModel};
use gauss_factor::schedule::{phase_schedule, PhaseSchedule, PulseSpec};
use gauss_factor::signal::quadratic_residue;
use gauss_factor::{
    gauss_sum, interference_signal_ideal, Adaptation, PhysicsConfig, Timing, TwoLevelState,
};
use proptest::prelude::*;

/// Adds fixed offsets to the nominal phases.
struct PhaseOffset {
    pi_pulses: f64,
    half_pi_pulses: f64,
}

impl PulseModel for PhaseOffset {
    fn effective(&self, pulses: &[PulseSpec], index: usize) -> (f64, f64) {
        let p = &pulses[index];
        let offset = if p.area_over_pi == 1.0 {
            self.pi_pulses
        } else {
            self.half_pi_pulses
        };
        (p.area_target(), p.phase.radians() + offset)
    }
}

fn readout_with(schedule: &PhaseSchedule, model: &dyn PulseModel) -> f64 {
    readout(&evolve(&TwoLevelState::ground(), schedule.pulses(), Some(model)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn divisor_law(q in 1u64..1_000_000, l in 1u64..1_000_000, order in 0u32..=30) {
        let n = q * l;
        prop_assume!(n <= 1_000_000_000_000);
        for m in 0..=order as u64 {
            prop_assert_eq!(interference_signal_ideal(n, l, m).unwrap(), 1.0);
        }
        prop_assert_eq!(gauss_sum(n, l, order).unwrap(), 1.0);
    }

    #[test]
    fn bounded(n in 2u64..1_000_000_000_000, l in 1u64..1_000_000, m in 0u64..10_000, order in 0u32..40) {
        prop_assert!(interference_signal_ideal(n, l, m).unwrap().abs() <= 1.0);
        prop_assert!(gauss_sum(n, l, order).unwrap().abs() <= 1.0);
    }

    #[test]
    fn first_term_is_one(n in 2u64..u64::MAX, l in 1u64..u64::MAX) {
        prop_assert_eq!(interference_signal_ideal(n, l, 0).unwrap(), 1.0);
    }

    #[test]
    fn periodic_in_n(n in 2u64..1_000_000_000_000, l in 1u64..100_000, order in 0u32..30) {
        prop_assert_eq!(gauss_sum(n, l, order).unwrap(), gauss_sum(n % l + l, l, order).unwrap());
    }

    #[test]
    fn periodic_in_m(n in 2u64..1_000_000_000_000, l in 1u64..100_000, m in 0u64..1_000) {
        prop_assert_eq!(
            interference_signal_ideal(n, l, m + l).unwrap(),
            interference_signal_ideal(n, l, m).unwrap()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_reduction_matches_multiprecision(
        n in 2u64..=1_000_000_000_000, l in 1u64..=1_000_000, m in 0u64..=1_000
    ) {
        let c = interference_signal_ideal(n, l, m).unwrap();
        prop_assert!((c - common::cos_direct(n, l, m)).abs() < 1e-9);
    }

    #[test]
    fn residue_is_mod(n in 0u64..1_000_000, l in 1u64..1000, m in 0u64..1000) {
        prop_assert_eq!(quadratic_residue(n, l, m).unwrap(), (m * m * n) % l);
    }

    #[test]
    fn pulses_are_unitary(area in 0.0f64..100.0, phase in -50.0f64..50.0) {
        let u = pulse_unitary(area, phase);
        prop_assert!(u.unitarity_error() < 1e-12);
        prop_assert!((u.determinant().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn half_pi_pair_composes_to_pi(phase in -10.0f64..10.0) {
        let h = pulse_unitary(PI / 2.0, phase);
        prop_assert!(h.compose(&h).max_deviation(&pulse_unitary(PI, phase)) < 1e-12);
    }

    #[test]
    fn simulation_reproduces_closed_form(n in 2u64..=1_000_000, l in 1u64..=500, m in 0u64..=20) {
        let sim = simulate_cm(n, l, m, &Timing::default(), None).unwrap();
        let closed = interference_signal_ideal(n, l, m).unwrap();
        prop_assert!((sim - closed).abs() < 1e-9, "sim {} closed {}", sim, closed);
    }

    #[test]
    fn common_phase_offset_is_invisible(
        n in 2u64..=1_000_000, l in 1u64..=500, m in 0u64..=20, offset in -7.0f64..7.0
    ) {
        let s = phase_schedule(n, l, m, Timing::default()).unwrap();
        let ideal = interference_signal_ideal(n, l, m).unwrap();
        // A frame rotation shared by every pulse never shows in the populations.
        let all = PhaseOffset { pi_pulses: offset, half_pi_pulses: offset };
        prop_assert!((readout_with(&s, &all) - ideal).abs() < 1e-9);
    }

    #[test]
    fn pi_train_offset_cancels_for_even_pulse_count(
        n in 2u64..=1_000_000, l in 1u64..=500, half_m in 0u64..=10, offset in -7.0f64..7.0
    ) {
        let m = 2 * half_m + 1;
        let s = phase_schedule(n, l, m, Timing::default()).unwrap();
        let pi_only = PhaseOffset { pi_pulses: offset, half_pi_pulses: 0.0 };
        let ideal = interference_signal_ideal(n, l, m).unwrap();
        prop_assert!((readout_with(&s, &pi_only) - ideal).abs() < 1e-9);
    }

    #[test]
    fn schedule_export_roundtrip(n in 2u64..=1_000_000_000_000, l in 1u64..=1_000_000, m in 0u64..=25,
                                 t in 1.0f64..500.0, tau in 1.0f64..50.0) {
        let s = phase_schedule(n, l, m, Timing::with_pi_length(t, tau)).unwrap();
        let text = s.to_export_string();
        let parsed = PhaseSchedule::parse_export(&text).unwrap();
        prop_assert_eq!(parsed.to_export_string(), text);
        prop_assert_eq!(parsed.pulses(), s.pulses());
    }

    #[test]
    fn rabi_profile_shape(x in 0.0f64..40.0, dx in 1e-3f64..5.0) {
        let cfg = PhysicsConfig::default();
        prop_assert_eq!(rabi_at_position(x, &cfg), rabi_at_position(-x, &cfg));
        prop_assert!(rabi_at_position(x + dx, &cfg) < rabi_at_position(x, &cfg));
        prop_assert!(rabi_at_position(x, &cfg) <= rabi_at_position(0.0, &cfg));
    }

    #[test]
    fn degenerate_ensemble_is_ideal(n in 2u64..=1_000_000, l in 1u64..=500, m in 0u64..=20) {
        let cfg = degenerate();
        let c = ensemble_cm(n, l, m, &cfg).unwrap();
        prop_assert!((c - interference_signal_ideal(n, l, m).unwrap()).abs() < 1e-9);
    }
}

/// Vanishing cloud, vanishing flight, parabolic adaptation.
fn degenerate() -> PhysicsConfig {
    PhysicsConfig {
        cloud_diameter_mm: 1e-9,
        atom_speed_m_s: 1e-12,
        adaptation: Adaptation::Parabolic,
        ..PhysicsConfig::default()
    }
}

#[test]
fn pi_train_offset_matters_for_odd_pulse_count() {
    // With an odd number of π-pulses the π-train phase enters the readout as
    // cos(2δ), so only common offsets of all pulses are invisible.
    let s = phase_schedule(263193, 151, 0, Timing::default()).unwrap();
    let model = PhaseOffset {
        pi_pulses: 0.3,
        half_pi_pulses: 0.0,
    };
    assert!((readout_with(&s, &model) - (0.6f64).cos()).abs() < 1e-12);
}

#[test]
fn norm_survives_long_random_sequences() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut state = TwoLevelState::ground();
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let u = pulse_unitary(rng.gen_range(0.0..10.0), rng.gen_range(-PI..PI));
        state = u.apply(&state);
        worst = worst.max((state.norm_sqr() - 1.0).abs());
    }
    assert!(worst < 1e-12, "{worst}");
}

#[test]
fn adaptation_beats_fixed_at_calibration_points() {
    let fixed = PhysicsConfig::default();
    let adapted = fixed.with_adaptation(Adaptation::Parabolic);
    let xe = fixed.edge_position_mm();
    for x in [0.0, xe, -xe] {
        let a = (pulse_area(x, &adapted) - PI).abs();
        let f = (pulse_area(x, &fixed) - PI).abs();
        assert!(a < f, "x {x}: adapted {a} fixed {f}");
    }
    assert_eq!(adapted_pulse_length(xe, &adapted), 26.0);
}

#[test]
fn overdriven_center_without_adaptation() {
    let cfg = PhysicsConfig::default();
    let s = phase_schedule(263193, 151, 0, cfg.timing()).unwrap();
    let atom = gauss_factor::beam::AtomPulses::new(&s, EntryOffset::default(), &cfg);
    let (area, _) = atom.effective(s.pulses(), 1);
    assert!((area - PI * 23.0 / 20.0).abs() < 1e-12);
    let (half, _) = atom.effective(s.pulses(), 0);
    // the π/2-pulses fire off-axis, where the beam is weaker
    assert!(half < area / 2.0);
}
