#![no_std]

extern crate alloc;

pub mod error;
pub mod precision;
pub mod specfun;
pub mod dh;
pub mod ratio;
pub mod zeros;
pub mod kappa_curve;

pub use error::{Error, Result};
pub use precision::{make_context, parse_decimal, APComplex, APReal, PrecisionContext, Workspace};
