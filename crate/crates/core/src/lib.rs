//! Exact arithmetic for sl(N) webs and foams.

pub mod error;
pub mod foameval;
pub mod linkpoly;
pub mod polyring;
pub mod cli;
pub mod cohomology;
pub mod qlaurent;
pub mod symmetric;
pub mod webcalc;

pub use error::{Error, Result};
