//! Core model types: exact rationals, the interaction matrix, basis-index
//! conventions, and the state containers shared by every other module.
//!
//! Everything here is immutable after construction and all operations are
//! pure, so values can be shared freely across threads.

mod basis;
mod matrix;
mod rational;
mod state;

pub use basis::BasisIndex;
pub use matrix::{InteractionMatrix, MAX_REGISTER};
pub use rational::Rational;
pub use state::{EnvState, RegisterDensity, HERMITICITY_TOL, MAX_DENSITY_REGISTER, NORM_TOL};
