//! Report assembly for the `hypoforge` command line.

pub mod report;
