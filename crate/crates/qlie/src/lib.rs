//! Command-line front end for the quantum Lie algebra checker.

pub mod instance_file;
pub mod report;
pub mod run;

pub use instance_file::{builtin, load, parse_instance, to_file, InstanceFile, LoadError, Loaded};
pub use report::{Entry, InstanceMeta, Outcome, Report, Section};
pub use run::{run, Command, Format, RunOutput, RunConfig, RunError, StructureFile};
