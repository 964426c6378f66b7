//! Computational core for Dirac operators on flat models, transversal Dirac
//! operators on distributions, twisted basic cohomology and stratified Euler
//! characteristics.

pub mod clifford;
pub mod cohomology;
pub mod error;
pub mod euler;
pub mod exterior;
pub mod linalg;

pub use error::{Error, Result};
pub mod spectrum;
pub mod torus;
pub mod transversal;
