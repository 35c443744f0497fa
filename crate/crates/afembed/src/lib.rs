//! File formats, report rendering and the command-line front end for
//! `afembed-core`.

pub mod app;
pub mod format;
pub mod report;
