#![no_std]
//! Exact finite models of Paley's inequality for lacunary Fourier coefficients.

extern crate alloc;

pub mod bits;
pub mod combinatorics;
pub mod error;
pub mod freq;

pub use error::{Error, Result};
pub use freq::{BoxWindow, Enumeration, Freq, Lattice, SetReport, Window};
pub mod fourier;
pub mod inequality;
pub mod linalg;
pub mod measures;
pub mod proofkit;

pub use fourier::{GridFunction, GridSpec, Spectrum};
