//! Eccentric p-summing constants on finite metric spaces and weighted graphs.
//!
//! The crate computes Arens-Eells norms of molecules, the proximity
//! functionals between sequences of pairs, minimal eccentric p-summing
//! constants with their Pietsch measures, and path pseudometrics on graphs.
//! Every optimization goes through the dense simplex solver in [`lp`].

pub mod cli;
pub mod error;
pub mod graph;
pub mod io;
pub mod lp;
pub mod metric;
pub mod summing;
pub mod tolerance;

pub use error::{Error, Result};
pub use tolerance::ToleranceConfig;
