//! Document format, pipelines and reports behind the `cfk` binary.

pub mod commands;
pub mod document;
pub mod pipeline;
pub mod report;
