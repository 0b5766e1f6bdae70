//! Exact colengths, asymptotic colength limits and multiplicities for
//! families of monomial ideals.

pub mod asymptotics;
pub mod charp;
pub mod cli;
pub mod error;
pub mod family;
pub mod monomial;
pub mod newton;
pub mod parse;
pub mod rational;
pub mod report;

pub use error::{Error, Result};
pub use monomial::{ExponentVector, MonomialIdeal};
