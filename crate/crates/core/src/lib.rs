//! Exact computations on Fox–Neuwirth tree complexes.

pub mod complex;
pub mod error;
pub mod fn_core;
pub mod geometry;
pub mod linalg;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
