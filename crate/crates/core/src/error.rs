use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("extension degree m = {0} is out of range (1..=16)")]
    DegreeOutOfRange(u32),
    #[error("modulus {modulus:#x} does not have degree {m}")]
    ModulusDegree { modulus: u32, m: u32 },
    #[error("modulus {0:#x} is reducible over GF(2)")]
    ReducibleModulus(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent {exponent} is not invertible modulo {modulus}")]
    NotInvertible { exponent: i128, modulus: u128 },
    #[error("polar decomposition of zero")]
    PolarOfZero,
    #[error("expected {expected} elements, got {got}")]
    Cardinality { expected: usize, got: usize },
    #[error("not an arc: three collinear points")]
    NotAnArc,
    #[error("not a line oval")]
    NotALineOval,
    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),
    #[error("not an o-polynomial")]
    NotAnOPolynomial,
    #[error("g-function vanishes at unit-circle index {0}")]
    GVanishes(usize),
    #[error("invalid g-function: {0}")]
    InvalidGFunction(String),
    #[error("boolean function is not bent")]
    NotBent,
    #[error("field mismatch")]
    FieldMismatch,
    #[error("order q = {0} exceeds the supported search size")]
    SearchTooLarge(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
