//! PT-symmetric generalised Ginocchio potential.

pub mod error;
pub mod geometry;
pub mod jacobi;
pub mod map;
pub mod ode;
pub mod output;
pub mod params;
pub mod potential;
pub mod quad;
pub mod repro;
pub mod spectrum;
pub mod susy;
pub mod verify;
pub mod wavefunction;

pub use error::{Error, Result};
