//! Synthesis of Bengali and Devanagari handwritten signatures.
//!
//! The pipeline follows the motor equivalence model: a statistical language
//! model produces a signer name, letter engrams on a 15x12 grid encode the
//! cognitive action plan, inertial Kaiser filters turn the plan into a smooth
//! trajectory, and a lognormal velocity profile time-samples it into an online
//! signature. An ink deposition model renders the offline (grayscale) image.
//!
//! The crate also ships the evaluation side: DTW and Manhattan/histogram
//! verifiers, DET/EER metrics, and the reference/test protocol used to check
//! that synthetic datasets behave like real ones.
//!
//! Everything is deterministic given a master seed; datasets can be
//! regenerated bit-exactly from their manifest.

pub mod calibrate;
pub mod config;
pub mod dataset;
pub mod engram;
pub mod error;
pub mod geometry;
pub mod gev;
pub mod kinematics;
pub mod morphology;
pub mod motor;
pub mod render;
pub mod rng;
pub mod script;
pub mod variability;
pub mod verify;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
pub(crate) mod testutil;
