use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("kernel order nu = {0} is outside the series domain nu > -1")]
    Domain(f64),

    #[error("kernel order nu = {0} violates the operator hypothesis nu > -1/2")]
    OperatorDomain(f64),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("inconclusive: partial sum {partial:e} with tail bound {tail:e} straddles the threshold {threshold:e}")]
    Inconclusive { partial: f64, tail: f64, threshold: f64 },

    #[error("bracket [{lo}, {hi}] does not straddle zero: margin({lo}) = {margin_lo:e}, margin({hi}) = {margin_hi:e}")]
    Bracket {
        lo: f64,
        hi: f64,
        margin_lo: f64,
        margin_hi: f64,
    },

    #[error("margin is not monotone in nu: margin({nu}) = {margin:e} lies outside [{margin_lo:e}, {margin_hi:e}]")]
    Monotonicity {
        nu: f64,
        margin: f64,
        margin_lo: f64,
        margin_hi: f64,
    },

    #[error("degenerate denominator |d| = {modulus:e} at z = {z}")]
    DegenerateDenominator { z: Complex64, modulus: f64 },

    #[error("series format error on line {line}: {message}")]
    Format { line: usize, message: String },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
