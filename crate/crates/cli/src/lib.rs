//! Experiment orchestration for the flow laboratory: configuration
//! ingestion, the named verification suites, and plot-ready data emission.

pub mod config;
pub mod output;
pub mod suites;
