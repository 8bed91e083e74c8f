use alloc::string::String;

/// Errors raised by the library. Each variant names the violated precondition.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("point {re}{im:+}i lies on a branch cut; a side must be given")]
    NeedsSide { re: f64, im: f64 },
    #[error("division by the zero element")]
    DivisionByZero,
    #[error("zero raised to a non-positive power")]
    ZeroPower,
    #[error("argument outside the supported domain: {0}")]
    Domain(String),
    #[error("hypergeometric normalisation mismatch for n = {n}, nodes = {nodes}")]
    HahnMismatch { n: usize, nodes: usize },
    #[error("oracle precision insufficient at {bits} bits (relative disagreement {disagreement:e})")]
    OraclePrecision { bits: u32, disagreement: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
