//! Command-line front-end for `cubica` and the SVG figure renderers.

pub mod commands;
pub mod render;

pub use commands::{execute, run, Cli, CliError, Command, Output};
pub use render::{render, Figure, RenderSpec};
