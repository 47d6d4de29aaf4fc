//! Exact arithmetic for nilpotent groups in Mal'cev coordinates, skinny
//! 2-cocycles and their central extensions, the phase-shift asymptotic
//! representations they induce, and the winding-number pairing that
//! certifies those representations cannot be perturbed to genuine ones.

pub mod cohomology;
pub mod error;
pub mod extensions;
pub mod group;
pub mod json;
pub mod obstruction;
pub mod poly;
pub mod report;
pub mod representation;

pub use error::{Error, Result};
