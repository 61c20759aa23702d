//! Numerical construction of three-dimensional pseudo-spherical submanifolds
//! of five-dimensional Euclidean space, their Bianchi transformations, and
//! finite-difference verification of the resulting geometry.
//!
//! The pipeline runs bottom-up:
//!
//! * [`codazzi`] solves the reduced Gauss–Codazzi system for a base surface
//!   with a prescribed metric and reconstructs it by moving-frame integration;
//! * [`lift`] appends the trigonometric pair that turns the base surface into
//!   a pseudo-spherical F³ ⊂ ℝ⁵;
//! * [`geometry`] and [`bianchi`] measure metric, curvature, normal frames,
//!   the Bianchi image, its rank and kernel;
//! * [`verify`] runs the check battery and builds a report.

pub mod bianchi;
pub mod codazzi;
pub mod fieldcalc;
pub mod geometry;
pub mod lift;
pub mod verify;

mod error;

pub use error::Error;

/// Nodes within this many layers of a boundary face are excluded from verdicts.
pub const INTERIOR_BAND: usize = 3;
