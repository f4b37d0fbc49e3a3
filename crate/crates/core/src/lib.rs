//! Periodic points, zeta functions and natural boundaries for
//! automorphisms of one-dimensional solenoids and of quadratic tori.

pub mod arith;
pub mod error;
pub mod fixed;
pub mod kernel;
pub mod orbit;
pub mod probe;
pub mod ratfunc;
pub mod recurrence;
pub mod verify;

pub use arith::{BigRat, PrimeSet};
pub use error::{Error, Result};
pub use kernel::{PlaceKernel, QuadElem, QuadField, QuadPlace};
pub use orbit::{CatmapSpec, SeriesPrefix, SolenoidSpec};
pub use probe::{ProbeConfig, ProbeReport};
pub use ratfunc::{LambertSum, RatFunc};
