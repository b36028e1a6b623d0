//! Invariant reports, corpus generation and the worked-example suite.

pub mod corpus;
pub mod examples;
pub mod report;

pub use corpus::{verify_corpus, CorpusConfig, CorpusSummary};
pub use examples::{example_suite, ExampleBundle, ExampleConfig};
pub use report::{report, AdjTier, InvariantReport, ReportOptions, Verdicts};
