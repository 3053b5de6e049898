//! Standard-library companion to `dftt-core`: sequence files, a thread-pool
//! executor, serialisable reports and the `dftt` command line.

pub mod cli;
pub mod io;
pub mod parallel;
pub mod report;

pub use parallel::RayonExecutor;
