//! Sweep runner for the IRS versus decode-and-forward comparison.
//!
//! [`figures::run`] turns a [`config::Config`] into a [`figures::SweepResult`]
//! and [`emit`] writes it as CSV or SVG. The `emilink` binary wraps both.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod emit;
pub mod figures;
pub mod scenario;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] emilink_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("refusing to emit an empty result")]
    EmptyResult,
}

impl BenchError {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, BenchError::Core(emilink_core::Error::Infeasible(_)))
    }
}
