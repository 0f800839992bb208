//! Configuration, golden replay, the theorem suite and report rendering.

pub mod config;
pub mod golden;
pub mod report;
pub mod suite;

pub use config::{parse_ring, ConfigError, RingFamilySpec};
pub use golden::run_golden_examples;
pub use report::{GoldenRow, Record, Report, Tally, Violation};
pub use suite::run_theorem_suite;
