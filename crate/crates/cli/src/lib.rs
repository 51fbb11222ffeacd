//! File formats, reports and subcommands behind the `nsgrade` binary.

pub mod commands;
pub mod formats;
pub mod report;

pub use commands::{cmd_check, cmd_derive, cmd_grade, cmd_magma, cmd_paper_example, MapSelector};
pub use formats::InputError;
pub use report::{render_text, Report};
