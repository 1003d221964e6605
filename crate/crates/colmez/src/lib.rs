//! Command-line tooling over `colmez-core`: argument parsing, report
//! serialization (pretty text, CSV, JSON) and parallel verification sweeps.

pub mod cli;
pub mod output;
pub mod suites;
