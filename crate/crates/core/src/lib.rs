pub mod ansatz;
pub mod circuit;
pub mod cli;
pub mod config;
pub mod error;
pub mod hamiltonian;
pub mod harness;
pub mod optimizer;
pub mod problems;
pub mod report;
pub mod scoring;
pub mod simulator;

pub use error::{Error, Result};
