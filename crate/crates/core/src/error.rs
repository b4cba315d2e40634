use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("argument {x} outside the domain: {what}")]
    Domain { x: f64, what: &'static str },

    #[error("series did not converge after {iterations} terms (nu = {nu}, x = {x})")]
    NonConvergence { nu: f64, x: f64, iterations: usize },

    #[error("Gamma function pole at {0}")]
    Pole(f64),

    #[error("no sign change of the bracket function on [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("point ({x1}, {x2}) lies outside the field domain")]
    OutOfDomain { x1: f64, x2: f64 },

    #[error("vanishing denominator {what} = {value:e}")]
    ZeroDenominator { what: &'static str, value: f64 },

    #[error("scaling case {requested} does not match the centre ({x1}, {x2})")]
    CaseMismatch { requested: String, x1: f64, x2: f64 },

    #[error("the positivity set has no boundary inside the window")]
    EmptyCurve,

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite integrand at ({x1}, {x2})")]
    NonFinite { x1: f64, x2: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
