//! Numerical laboratory for the zero-dispersion limit of the Benjamin–Ono
//! equation on the circle. Three independent routes to the limiting
//! profile — truncated Toeplitz spectral calculus, the kinetic
//! χ-quadrature, and multivalued Burgers characteristics — plus the exact
//! shift-word combinatorics behind the series expansions and a property
//! harness for the structural theorems.

pub mod burgers;
pub mod error;
pub mod fourier;
pub mod io;
pub mod kinetic;
pub mod properties;
pub mod raney;
pub mod spectral;
pub mod toeplitz;

pub use error::{Error, Result};
