//! Command-line front end for oblique-projection sampling: problem files,
//! reports and planar figure data.

pub mod commands;
pub mod error;
pub mod figure;
pub mod format;
pub mod problem_file;

pub use commands::{run, Cli};
pub use error::{CliError, Result};
pub use figure::FigureData;
pub use problem_file::ProblemFile;
