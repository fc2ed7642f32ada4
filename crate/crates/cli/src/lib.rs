//! Command-line front end for the `twofluid` library: INI scenario parsing,
//! run orchestration, analysis reports and CSV output.

pub mod commands;
pub mod ini;
pub mod report;
pub mod scenario;

pub use commands::CliError;
pub use ini::ConfigError;
pub use scenario::{parse_config, Scenario};
