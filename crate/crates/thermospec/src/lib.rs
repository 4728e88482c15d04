//! Configuration, report formats and the command line for
//! [`thermospec_core`].
//!
//! Floats are written in shortest round-trip form, JSON keys in declaration
//! order, so identical configurations give byte-identical artifacts.

pub mod acceptance;
pub mod commands;
pub mod config;

pub use commands::Artifact;
pub use config::{ConfigError, Overrides, RawConfig, RunConfig};
