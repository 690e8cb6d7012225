use thiserror::Error;

/// Errors raised by the rank, moment, test and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two observations in one column compare equal while ties are rejected.
    #[error("tied value {value} in {}", column_name(*.column))]
    TiesPresent { column: Option<usize>, value: f64 },

    #[error("non-finite value at row {row} in {}", column_name(*.column))]
    NonFiniteValue { row: usize, column: Option<usize> },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    /// An integer parameter (sample size, dimension, ...) is below its floor.
    #[error("{quantity} = {value} is below the minimum of {min}")]
    DomainTooSmall {
        quantity: &'static str,
        value: usize,
        min: usize,
    },

    #[error("{quantity} = {value} exceeds the maximum of {max}")]
    TooLarge {
        quantity: &'static str,
        value: usize,
        max: usize,
    },

    /// A real-valued argument outside the domain of a function.
    #[error("{quantity} = {value} is outside {domain}")]
    DomainError {
        quantity: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("bad shape: {0}")]
    BadShape(String),

    #[error("matrix is not positive definite (pivot {pivot})")]
    NotPositiveDefinite { pivot: usize },
}

fn column_name(column: Option<usize>) -> String {
    match column {
        Some(c) => format!("column {}", c + 1),
        None => "input".to_string(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_min(quantity: &'static str, value: usize, min: usize) -> Result<()> {
    if value < min {
        Err(Error::DomainTooSmall {
            quantity,
            value,
            min,
        })
    } else {
        Ok(())
    }
}
