//! File formats, parameter grid, reports and the command-line front end for `askey-core`.

pub mod cli;
pub mod grid;
pub mod params;
pub mod report;
pub mod table;
