use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed exponent {text:?}: {reason}")]
    MalformedExponent { text: String, reason: &'static str },
    #[error("exponent {text:?} is below 1")]
    ExponentBelowOne { text: String },
    #[error("reciprocal {0} lies outside [0, 1]")]
    ReciprocalOutOfRange(String),
    #[error("weight {0} lies outside [0, 1]")]
    WeightOutOfRange(String),
    #[error("critical line undefined: q and sigma must both exceed 2")]
    CriticalLineUndefined,
    #[error("duplicate reciprocal points at indices {0} and {1}")]
    DuplicatePoints(usize, usize),
    #[error("could not reach general position after {0} attempts")]
    PerturbationFailed(usize),
    #[error("omega_(p,q) requires p <= q")]
    OmegaDomain,
    #[error("dimensions must be positive (m = {m}, k = {k})")]
    ZeroDimension { m: u64, k: u64 },
    #[error("n = {n} exceeds mk/2 (m = {m}, k = {k})")]
    WidthIndexTooLarge { m: u64, k: u64, n: u64 },
    #[error("target exponent {name} = {value} outside [2, inf)")]
    TargetOutOfRange { name: &'static str, value: String },
    #[error("ball family is empty")]
    EmptyFamily,
    #[error("ball radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("no Phi branch covers (p, theta) = ({p}, {theta})")]
    NoBranch { p: String, theta: String },
    #[error("Phi branches {first} and {second} disagree: {first_value} vs {second_value}")]
    BranchDisagreement { first: u8, second: u8, first_value: f64, second_value: f64 },
    #[error("Psi component index {0} outside 0..=7")]
    ComponentIndex(usize),
    #[error("interpolation weights sum to {0}, expected 1")]
    WeightsDoNotSumToOne(String),
    #[error("matrix dimensions {0}x{1} do not match {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("invalid group element: {0}")]
    InvalidGroupElement(&'static str),
    #[error("block size (r, l) = ({r}, {l}) outside [1, {m}] x [1, {k}]")]
    BlockOutOfRange { r: u64, l: u64, m: u64, k: u64 },
    #[error("cell side delta = {0} violates (mk)^delta <= 4/3")]
    InadmissibleDelta(String),
    #[error("width index n = {n} exceeds the dimension {dim}")]
    WidthIndexExceedsDimension { n: u64, dim: u64 },
    #[error("numeric estimator supports mk <= 16, got {0}")]
    TooLargeForNumeric(u64),
    #[error("budget parameter {0} must be positive")]
    InvalidBudget(&'static str),
}
