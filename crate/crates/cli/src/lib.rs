//! Report builders behind the `homchar` command line. Each builder returns a
//! [`Report`] holding a plain-text rendering, a key-sorted JSON value and the
//! process exit code.

pub mod report;

pub use report::{
    analyze, exit_code, oracle_bruteforce, oracle_polarization, verify, Mode, Options, Report, EXIT_CAP, EXIT_FAILED,
    EXIT_INVALID, EXIT_OK, SCHEMA,
};
