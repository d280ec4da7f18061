pub mod arith;
pub mod brauer;
pub mod classify;
pub mod cli;
pub mod cohom;
pub mod embed;
pub mod qcurve;
pub mod error;

pub use error::{Error, Result};
