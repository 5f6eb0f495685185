//! Tritronquee solution of the second member of the Painleve I hierarchy.

pub mod algebra;
pub mod asym;
pub mod branch;
pub mod error;
pub mod expansion;
pub mod integrals;
pub mod reproduce;
pub mod solver;
pub mod tolerances;

pub use error::{Pi2Error, Result};
