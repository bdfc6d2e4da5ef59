use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("multiplication table is not commutative at ({})", .0.join(", "))]
    NonCommutative(Vec<String>),
    #[error("multiplication table is not associative at ({})", .0.join(", "))]
    NonAssociative(Vec<String>),
    #[error("malformed input: {0}")]
    BadShape(String),
    #[error("duplicate generator label {0:?}")]
    DuplicateGenerator(String),
    #[error("element of {found} used where an element of {expected} is required")]
    OwnerMismatch { expected: String, found: String },
    #[error("action does not match the algebras: {0}")]
    ActionMismatch(String),
    /// An axiom or law failed; `axiom` is its identifier (e.g. "A1", "2XM3", "s-derivation", "square").
    #[error("{axiom} violated at ({})", witness.join(", "))]
    Violation { axiom: String, witness: Vec<String> },
    #[error("span is not an ideal: {}", .0.join(" "))]
    NotAnIdeal(Vec<String>),
    #[error("homotopies are not composable: {0}")]
    CompositionMismatch(String),
    #[error("{0} has no recorded free basis")]
    FreeBasisRequired(String),
    #[error("index {index} out of range at level {level}")]
    IndexOutOfRange { level: usize, index: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn violation(axiom: impl Into<String>, witness: Vec<String>) -> Error {
        Error::Violation { axiom: axiom.into(), witness }
    }

    /// Axiom identifier for violations, if any.
    pub fn axiom(&self) -> Option<&str> {
        match self {
            Error::Violation { axiom, .. } => Some(axiom),
            Error::NonCommutative(_) => Some("commutativity"),
            Error::NonAssociative(_) => Some("associativity"),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&[String]> {
        match self {
            Error::Violation { witness, .. }
            | Error::NonCommutative(witness)
            | Error::NonAssociative(witness)
            | Error::NotAnIdeal(witness) => Some(witness),
            _ => None,
        }
    }
}
