use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("finite sets must be nonempty")]
    EmptySet,
    #[error("expected {expected} images, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("image {image} of element {element} is outside a codomain of size {codomain}")]
    OutOfRangeImage {
        element: usize,
        image: usize,
        codomain: usize,
    },
    #[error("cannot compose: inner codomain has size {inner_codomain}, outer domain has size {outer_domain}")]
    SizeMismatch {
        inner_codomain: usize,
        outer_domain: usize,
    },
    #[error("exponent must be at least 1, got {0}")]
    InvalidExponent(u32),
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("chain needs at least two sizes, all positive")]
    InvalidChain,
    #[error("enumeration of {required} objects exceeds the budget of {budget}")]
    BudgetExceeded { required: String, budget: String },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
