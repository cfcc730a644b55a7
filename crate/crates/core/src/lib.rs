//! Numerical experiments with L_p Brunn-Minkowski inequalities.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod grassmann;
pub mod harness;
pub mod functionals;
pub mod projection_bodies;
pub mod rng;

pub use error::{Error, Result};
