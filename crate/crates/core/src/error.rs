use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),
    #[error("polygon is not convex: {0}")]
    NotConvex(String),
    #[error("generators {first} and {second} are closer than the geometric tolerance")]
    DuplicateGenerator { first: usize, second: usize },
    #[error("point ({x}, {y}) lies outside the domain")]
    OutOfDomain { x: f64, y: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown test function `{0}`")]
    UnknownFunction(String),
    #[error("invalid parameter for `{function}`: {message}")]
    InvalidParameter { function: String, message: String },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("malformed refinement tree: {0}")]
    MalformedTree(String),
    #[error("malformed tessellation document: {0}")]
    MalformedTessellation(String),
}
