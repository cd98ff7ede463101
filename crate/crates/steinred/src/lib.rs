//! File formats, instance generators and the command-line tool around
//! `steinred-core`.

pub mod bench;
pub mod cli;
pub mod eventlog;
pub mod generate;
pub mod solution;
pub mod stp;
