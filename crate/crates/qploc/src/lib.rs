//! File formats, reports and runtime pieces (wall clock, threads) around
//! [`qploc_core`].

pub mod ap;
pub mod format;
pub mod report;
pub mod runtime;
pub mod selftest;
