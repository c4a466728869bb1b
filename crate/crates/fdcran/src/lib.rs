//! Downlink precoding and fronthaul compression simulator for cloud radio
//! access networks whose radio units carry full-dimensional (2D) antenna
//! arrays.
//!
//! The crate models a central unit driving `N_R` radio units over
//! capacity-limited fronthaul links toward `N_M` single-antenna users. Each
//! radio unit has `N_A` horizontal by `N_E` vertical antennas, and the
//! channel factors into a slowly varying elevation direction and a
//! per-coherence-block azimuth fade. On top of that model the crate
//! implements and compares four transmission strategies:
//!
//! - **layered CAP** — the central unit precodes over the azimuth dimension
//!   only, compresses the per-user baseband signals, and lets each radio unit
//!   expand them over elevation with a long-term beam;
//! - **layered CBP** — the central unit ships compressed azimuth precoders
//!   plus user messages, and the radio units encode and precode locally;
//! - **conventional CAP / CBP** — the corresponding non-layered baselines
//!   operating on the full antenna dimension.
//!
//! Long-term (elevation) variables are optimized by stochastic
//! successive-upper-bound minimization over a growing sample of channel
//! draws; short-term (azimuth, compression noise) variables by a
//! difference-of-convex loop. Both reduce to a canonical "logs of affine
//! functionals over PSD cones" subproblem solved by the barrier method in
//! [`solver`].
//!
//! See the `examples/` directory for runnable walkthroughs of every stage,
//! and the `fdcran` binary for config-driven sweeps.

pub mod channel;
pub mod config;
pub mod error;
pub mod evaluation;
pub mod numerics;
pub mod rng;
pub mod solver;
pub mod strategies;
pub mod surrogates;
pub mod sweep;

pub use error::{Error, Result};

/// Version tag recorded in result sidecars; replay refuses to run against a
/// sidecar produced by a different version.
pub const FORMAT_VERSION: &str = "fdcran-results-v1";
