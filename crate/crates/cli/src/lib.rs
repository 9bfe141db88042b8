//! Command-line front end: expression parser, diagram rendering and subcommands.

pub mod algnum;
pub mod commands;
pub mod parse;
pub mod render;

pub use commands::{run, Cli, ReportDocument};
pub use parse::{parse_germ, ParseError, ParseErrorKind};
pub use render::{render_diagram, Format};
