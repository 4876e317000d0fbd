//! Error type shared across the crate.
//!
//! Variants are grouped by how the CLI maps them to exit codes:
//! validation of inputs and invariants, numeric failures of solvers and
//! quadratures, and plain IO.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Lattice would not fit the configured memory cap.
    #[error("lattice of {points} points exceeds the memory cap of {cap} points")]
    SizeOverflow { points: u128, cap: usize },

    /// A named input violates a documented constraint.
    #[error("invalid {what}: {why}")]
    Validation { what: &'static str, why: String },

    /// Binary operation on fields living on different grids.
    #[error("operands live on different grids")]
    GridMismatch,

    /// Product support escapes the lattice while anti-alias padding is off.
    #[error("aliasing: product support reaches index {needed} beyond lattice extent {available} with padding disabled")]
    Aliasing { needed: i64, available: i64 },

    /// Richardson estimate of the quadrature error above the requested tolerance.
    #[error("quadrature tolerance exceeded: Richardson estimate {estimate:.3e} > {tolerance:.3e}")]
    QuadratureTolerance { estimate: f64, tolerance: f64 },

    /// Data too large for the contraction argument behind the series solver.
    #[error("smallness threshold violated: T^2 (2 |u|_FL1)^(sigma-1) = {value:.3e} > {threshold:.3e}")]
    Smallness { value: f64, threshold: f64 },

    /// Geometric ratio of successive series terms reached one.
    #[error("series does not contract: geometric ratio {ratio:.3e} >= 1")]
    NoConvergence { ratio: f64 },

    /// Fixed-point differences grew several times in a row.
    #[error("fixed-point iteration diverging: differences grew {count} consecutive times")]
    NonContraction { count: usize },

    /// Explicit integrator step outside its stability margin.
    #[error("step size {dt:.3e} exceeds stability margin {max_dt:.3e}")]
    StepSize { dt: f64, max_dt: f64 },

    /// Brute-force oracle asked to run on a lattice above its cap.
    #[error("oracle size cap exceeded: {points} > {cap} points")]
    SizeCap { points: usize, cap: usize },

    /// Non-finite value in a recursion that should stay finite.
    #[error("overflow in recursion at k = {k}")]
    Overflow { k: usize },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed text input (config file, field dump, report).
    #[error("parse error in {what}: {why}")]
    Parse { what: String, why: String },
}

impl Error {
    pub fn validation(what: &'static str, why: impl Into<String>) -> Self {
        Error::Validation { what, why: why.into() }
    }

    /// Exit code class used by the command line front end:
    /// 2 validation, 3 numeric failure, 4 io.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::SizeOverflow { .. }
            | Error::Validation { .. }
            | Error::GridMismatch
            | Error::SizeCap { .. }
            | Error::Parse { .. } => 2,
            Error::Aliasing { .. }
            | Error::QuadratureTolerance { .. }
            | Error::Smallness { .. }
            | Error::NoConvergence { .. }
            | Error::NonContraction { .. }
            | Error::StepSize { .. }
            | Error::Overflow { .. } => 3,
            Error::Io(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
