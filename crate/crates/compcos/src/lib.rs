//! Verification suites, report files and the command-line front end for
//! `compcos-core`.

pub use compcos_core as core;

pub mod cli;
pub mod config;
pub mod exec;
pub mod report;
pub mod suites;
pub mod table;

pub use config::Config;
pub use exec::Rayon;
pub use report::SuiteReport;
