//! Command-line front end for the ncdirac solver: configuration, the four
//! subcommands, and the CSV/JSON artifacts they write.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod pipeline;
pub mod report;
pub mod validate;
