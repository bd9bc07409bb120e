//! File formats, reports and the command-line front end for `semistable-core`.

pub mod cli;
pub mod json;
