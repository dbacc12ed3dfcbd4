//! Command-line front end: run configuration, rendering, experiments and
//! the `tilesed` subcommands.

pub mod commands;
pub mod config;
pub mod error;
pub mod experiments;
pub mod inputs;
pub mod render;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
pub use render::{render, Format, Highlight, RenderSpec};
