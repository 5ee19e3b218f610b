use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{name}` has degree {degree}; degrees must be at least 1")]
    NonPositiveDegree { name: String, degree: i64 },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("operands belong to different algebras")]
    AlgebraMismatch,
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("image of `{generator}` has degree {found}, expected {expected}")]
    WrongImageDegree {
        generator: String,
        expected: u32,
        found: u32,
    },
    #[error("element `{0}` is not closed under the differential")]
    NotClosed(String),
    #[error("differential does not square to zero: d(d({generator})) = {value}")]
    DSquaredNonzero { generator: String, value: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("series truncated at degree {available}, but degree {requested} was requested")]
    InsufficientTruncation { requested: usize, available: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
