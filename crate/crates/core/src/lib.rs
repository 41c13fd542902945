//! Matchstick graphs on and off the triangular lattice.

pub mod combinatorics;
pub mod components;
pub mod error;
pub mod extremal;
pub mod graph;
pub mod io;
pub mod isoperimetry;
pub mod lattice;
pub mod oracle;

pub use error::{Error, Result};
