//! File formats and command-line front end for `neurosld-core`.

pub mod cli;
pub mod config;
pub mod kb;
pub mod model;
pub mod report;
pub mod schedule;
pub mod trace;
