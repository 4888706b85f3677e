//! Std front end for `paley-core`: argument and file formats, a parallel campaign
//! runner with index-ordered reduction, and the `paley-lab` command line.

pub mod cli;
pub mod formats;
pub mod runner;

pub use cli::run;
