//! Exact constructions and checks for Hilbert-valued weakly almost periodic
//! functions whose norms have no mean.
//!
//! The crate builds two tent-train functions into a separable Hilbert space
//! (one cut off by a recursively scheduled `[0, 1]`-valued envelope, one
//! two-sided and periodic in norm) and checks, in exact rational arithmetic,
//! the statements made about them: oscillating window means, weak-null
//! certificates built from convex combinations of translates, decaying
//! Fourier coefficients and a strictly positive Parseval defect.

pub mod certificates;
pub mod constructions;
pub mod error;
pub mod fourier;
pub mod hilbert;
pub mod means;
pub mod piecewise;
pub mod rational;
pub mod report;

pub use error::{EapError, Result};
pub use rational::Rational;
