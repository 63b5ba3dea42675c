use thiserror::Error;

use crate::complex::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate vertex label {0}")]
    DuplicateVertex(VertexId),

    #[error("face {face:?} references unknown vertex {vertex}")]
    UnknownVertex {
        vertex: VertexId,
        face: Vec<VertexId>,
    },

    #[error("{0:?} is not a face of the complex")]
    NotAFace(Vec<VertexId>),

    #[error("the complex has no faces of dimension {0}")]
    NoFaces(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),

    #[error("order {order} exceeds the dense cap of {cap}")]
    TooLarge { order: usize, cap: usize },

    #[error("eigensolver residual {residual:e} exceeds tolerance {tol:e}")]
    NotConverged { residual: f64, tol: f64 },

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("face {0:?} of the candidate subcomplex is not a face of the ambient complex")]
    NotSubcomplex(Vec<VertexId>),

    #[error("materializing the complex needs more than {cap} faces")]
    FaceBudget { cap: usize },

    #[error("internal identity violated: {0}")]
    IdentityViolated(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
