//! Command-line front end: one subcommand per module operation, JSON run
//! configs, CSV artifacts written atomically, optional SVG plots.

pub mod config;
pub mod output;
pub mod run;
pub mod svg;

pub use config::{effective, Cli, Command, Effective, RunConfig};
pub use run::{dispatch, execute};
pub use svg::{render_svg, PlotKind};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags or config: exit 2.
    #[error("{0}")]
    Usage(String),
    /// A module operation refused or failed: exit 1.
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io(_) => 1,
        }
    }
}
