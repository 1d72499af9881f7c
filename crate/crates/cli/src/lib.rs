//! Files, sweeps and the command-line front end for `dmcsched`.

pub mod atsp;
pub mod commands;
pub mod demo;
pub mod error;
pub mod experiment;
pub mod io;

pub use error::{CliError, Result};
