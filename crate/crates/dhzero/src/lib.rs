//! Command-line driver, output formats and acceptance checks for
//! `dhzero-core`.

pub mod acceptance;
pub mod cli;
pub mod output;
pub mod parallel;
pub mod table1;
