//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by space operations, dictionaries, greedy engines,
/// bound evaluators, and oracles.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("space mismatch: {0}")]
    SpaceMismatch(&'static str),

    #[error("invalid exponent q = {0}; require 1 < q < inf")]
    InvalidExponent(f64),

    #[error("invalid smoothness majorant: gamma = {gamma}, power = {power}; require gamma > 0 and power in (1, 2]")]
    InvalidMajorant { gamma: f64, power: f64 },

    #[error("element must have at least one coordinate")]
    EmptyElement,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("operation undefined for the zero element")]
    ZeroElement,

    #[error("dictionary has no atoms")]
    EmptyDictionary,

    #[error("invalid dictionary atom: {0}")]
    InvalidAtom(String),

    #[error("parameter {name} = {value} out of range {range}")]
    ParamRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("interpolation exponent alpha = {alpha} exceeds the admissible threshold {threshold}")]
    AlphaAboveThreshold { alpha: f64, threshold: f64 },

    #[error("selection drive must be positive, got {0}")]
    NonpositiveDrive(f64),

    #[error("exact-solve budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("element lies outside the dictionary span")]
    OutsideSpan,

    #[error("degenerate Gram system: {0}")]
    DegenerateGram(String),

    #[error("trace is not usable here: {0}")]
    InvalidTrace(&'static str),

    #[error("quadrature resolution insufficient: need at least {needed} points, got {got}")]
    QuadratureResolution { needed: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
