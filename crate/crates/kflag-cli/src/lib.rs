//! Library surface of the `kflag` command-line tool: verification sweeps
//! over whole flag varieties and deterministic table emission. The binary in
//! `main.rs` is a thin argument-parsing wrapper around these modules.

pub mod suites;
pub mod tables;
