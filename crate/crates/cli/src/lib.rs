//! Batch front-end for the formal-group analyses: spec ingestion, report
//! assembly, and the bundled golden corpus.

pub mod corpus;
pub mod report;
pub mod spec;
