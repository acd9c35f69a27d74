//! Verification suites and output writers behind the `c21` binary.

pub mod output;
pub mod suites;

pub use output::{status_line, write_outputs, Format};
pub use suites::{run_suite, validate, Plot, Suite, SuiteConfig, SuiteOutput, UsageError};
