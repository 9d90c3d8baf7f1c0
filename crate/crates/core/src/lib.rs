//! Reduction of singularities, separatrices, polar invariants and real
//! structure for germs of plane holomorphic foliations with exact
//! coefficients.

pub mod error;
pub mod blowup;
pub mod foliation;
pub mod numeric;
pub mod polar;
pub mod report;
pub mod real;
pub mod separatrix;

pub use error::{Error, Result};
