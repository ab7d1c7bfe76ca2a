//! File formats, configuration, parallel enumeration and the command-line
//! front end for `zkdistill-core`.

pub mod cli;
pub mod config;
pub mod formats;
pub mod mek;
pub mod oracle;
pub mod report;
