use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("topology error: {0}")]
    Topology(String),
    #[error("facet {facet} is not planar: deviation {deviation:.3e} exceeds {tolerance:.3e}")]
    Planarity {
        facet: usize,
        deviation: f64,
        tolerance: f64,
    },
    #[error("degenerate mesh: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PairError {
    #[error("facet pair ({0}, {1}) is degenerate")]
    DegeneratePair(usize, usize),
    #[error("triangle has zero height")]
    DegenerateTriangle,
    #[error("triangle has no side parallel to the frame x-axis")]
    NoParallelSide,
    #[error("case 12 is undefined when both side slopes are equal")]
    Degenerate12,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PrimitiveError {
    #[error("t = {t} lies outside the radical domain [{mu1}, {mu2}]")]
    Domain { t: f64, mu1: f64, mu2: f64 },
    #[error("primitive is singular here: {0}")]
    Edge(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Primitive(#[from] PrimitiveError),
    #[error("chord sampling requires a convex polyhedron")]
    ConvexityRequired,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
