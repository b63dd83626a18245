//! Configuration, sweep driver, results files and verification checks
//! behind the `blockvqe` binary.

pub mod checks;
pub mod config;
pub mod results;
pub mod run;

pub use checks::{verify, Check, Verifier};
pub use config::RunConfig;
pub use results::SweepRow;
pub use run::{run_sweep, RunOptions, SweepOutput};
