//! Library half of the `fuzzport` command-line tool: instance files, level
//! sweeps and report rendering.

pub mod args;
pub mod instance;
pub mod report;
pub mod sweep;

pub use instance::{load_instance, paper_table1, parse_instance, write_instance, InstanceError};
pub use report::Format;
pub use sweep::{reproduce, solve_command, ReproductionReport, Solver, SweepConfig, SweepReport};
