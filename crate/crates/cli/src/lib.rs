//! Batch front end: configuration, verification reports and tables.

pub mod config;
pub mod tabulate;
pub mod verify;

pub use config::{Format, RunConfig, Setup, Suite};
pub use tabulate::{tabulate, write_table, Table};
pub use verify::{run, write_report, Report, SCHEMA_VERSION};

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const INVALID: i32 = 2;
}
