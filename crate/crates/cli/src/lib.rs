//! File formats and subcommands of the `pkalign` command-line tool.

mod app;
pub mod dotbracket;
pub mod sample;

pub use app::run;
pub use dotbracket::{parse_dotbracket, serialize, serialize_alignment, DotBracketError};
