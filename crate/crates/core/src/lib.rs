//! Computational workbench for the Galois theory of iterated quadratic maps.

pub mod error;
pub mod numpoly;

pub use error::{Error, ErrorKind, Result};
pub mod zdyn;
pub mod chebotarev;
pub mod fqdyn;
pub mod towerff;
pub mod treegrp;
pub mod arithgeo;
pub mod cli;
