use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("alpha_{index} = {value} outside the cuspidal range |alpha| < 1/2")]
    Range { index: usize, value: f64 },
    #[error("factorization capacity exceeded: {0} > 2^50")]
    Capacity(u64),
    #[error("point {0} lies within 1e-8 of a pole")]
    Pole(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("truncation: {0}")]
    Truncation(String),
    #[error("beyond desk scale: {0}")]
    DeskScale(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
