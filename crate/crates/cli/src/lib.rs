//! Command-line front end for `fitbench-core`.

pub mod commands;
pub mod config;
pub mod selftest;
