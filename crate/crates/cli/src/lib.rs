//! Library side of the `fuzzycolor` command: input loading, the JSON run
//! report and the three subcommands.

pub mod commands;
pub mod input;
pub mod report;

pub use commands::{cmd_cluster, cmd_compare, cmd_seed, ClusterArgs, CompareArgs, SeedArgs};
pub use report::RunReport;
