//! Command-line front end: protocol and machine file formats, run
//! configuration, JSON-lines records, DOT export and the `run`, `verify`,
//! `graph` and `sweep` commands.

pub mod commands;
pub mod config;
pub mod dot;
pub mod formats;
pub mod load;
pub mod records;
