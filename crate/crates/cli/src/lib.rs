//! Command-line front-end for the spin-decoherence simulator: configuration
//! handling, presets, CSV emission and machine-readable JSON run records.
//!
//! Everything behavioral lives in this library so that the binary in
//! `main.rs` stays a thin argument-parsing shell and the full pipeline is
//! testable in-process.

pub mod config;
pub mod record;
pub mod run;

pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;
/// Julian year.
pub const YEAR_SECONDS: f64 = 365.25 * 86_400.0;

/// Diagnostic gates for the process exit status.
pub const SHELL_VIOLATION_LIMIT: f64 = 1e-14;
pub const ROTOR_DRIFT_LIMIT: f64 = 1e-10;
