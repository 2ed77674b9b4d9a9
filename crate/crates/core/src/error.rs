//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The static frame (and these coordinates) end at the horizon.
    #[error("r = {r} is at or inside the horizon r_s = {r_s}; no static frame exists there")]
    Horizon { r: f64, r_s: f64 },

    #[error("metric is degenerate at r = {r}, theta = {theta}")]
    DegenerateMetric { r: f64, theta: f64 },

    /// A four-momentum failed the mass-shell precondition.
    #[error("four-momentum off the mass shell: relative violation {violation:.3e}")]
    OffShell { violation: f64 },

    /// A single rotor step was asked to rotate by too large an angle.
    #[error("rotation step of {angle:.3e} rad exceeds the 0.1 rad step guard; reduce dtau")]
    StepTooLarge { angle: f64 },

    /// Step guard tripped inside a simulation run, with the proper time at
    /// which it happened.
    #[error("rotation step of {angle:.3e} rad at tau = {tau:.6e} exceeds the 0.1 rad step guard; reduce dtau")]
    StepTooLargeAt { tau: f64, angle: f64 },

    #[error("momentum packet has no samples")]
    EmptyPacket,

    #[error("invalid spin state: {0}")]
    InvalidState(String),
}
