//! Gauss-sum factorization and a simulated cold-atom Ramsey interferometer.
//!
//! The crate is organised bottom-up:
//!
//! * [`phase`] and [`signal`] hold the exact number theory: pulse phases as
//!   rational multiples of π, the interference signal `c_m(l)` and the
//!   truncated Gauss sum `C_N^(M)(l)`.
//! * [`factor`] enumerates trial factors, classifies them and computes the
//!   contrast of a factorization pattern.
//! * [`schedule`] builds the π/2 – (π)^(m+1) – π/2 pulse sequence and its
//!   line-oriented export format.
//! * [`pulse`] propagates a two-level state through a schedule as a product
//!   of resonant Rabi rotations.
//! * [`beam`] models the Gaussian Raman beam, the parabolic pulse-length
//!   adaptation and the averaging over the atomic cloud.
//! * [`experiment`] strings the pieces together into the tables written by
//!   the command-line tool.

pub mod beam;
pub mod error;
pub mod experiment;
pub mod factor;
pub mod format;
pub mod phase;
pub mod pulse;
pub mod quadrature;
pub mod schedule;
pub mod signal;

pub use beam::{Adaptation, EnsembleScheme, PhysicsConfig};
pub use error::{Error, Result};
pub use factor::{ContrastReport, FactoringProblem, GaussSumResult, TrialStrategy};
pub use phase::PiPhase;
pub use pulse::{PulseUnitary, TwoLevelState};
pub use schedule::{PhaseSchedule, PulseRole, PulseSpec, Timing};
pub use signal::{gauss_sum, interference_signal_ideal};

/// Default classification threshold, 1/√2.
pub const DEFAULT_THRESHOLD: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Default truncation order (fifteen π-pulse sequences, m = 0..=14).
pub const DEFAULT_ORDER: u32 = 14;

/// Truncation orders above this value exceed what the apparatus could run.
pub const SOFT_MAX_ORDER: u32 = 19;
