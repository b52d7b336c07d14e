//! Experiment runner for the stabkit workbench: stable-range calculator, command dispatch
//! and result rendering.

pub mod cli;
pub mod commands;
pub mod error;
pub mod range;
pub mod report;
