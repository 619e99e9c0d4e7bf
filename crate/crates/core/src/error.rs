use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero subspace requires explicit dimension 0")]
    ZeroSubspace,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix does not have full column rank")]
    RankDeficient,

    #[error("singular Jacobian: {0}")]
    Singular(String),

    #[error("point is not in the set: {0}")]
    NotInSet(String),

    #[error("pair is not in the normal-cone graph: {0}")]
    NotInGraph(String),

    #[error("reference point is not a solution: {0}")]
    NotASolution(String),

    #[error("cells do not cover the point: {0}")]
    NotCovered(String),

    #[error("piecewise-affine map is discontinuous: {0}")]
    Discontinuous(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
