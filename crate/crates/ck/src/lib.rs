//! Front end for the `ck-core` kernel: configuration, JSON input, report
//! rendering and the parallel runners behind the `ck` binary.

pub mod config;
pub mod input;
pub mod report;
pub mod run;

pub use config::{Command, Format, ModuleFamily, RunConfig};
pub use report::Report;
pub use run::run;

/// Everything that is not a mathematical failure. All map to exit code 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Core(ck_core::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {}", m),
            CliError::Input(m) => write!(f, "input: {}", m),
            CliError::Core(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ck_core::Error> for CliError {
    fn from(e: ck_core::Error) -> Self {
        CliError::Core(e)
    }
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
