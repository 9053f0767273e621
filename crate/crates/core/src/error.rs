use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid polyline: {0}")]
    InvalidPolyline(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("({0}, {1}) is not an edge of the mesh")]
    NotAnEdge(usize, usize),

    #[error("boundary loop {loop_index} is {distance:.3e} away from the target curve (tol {tol:.3e})")]
    LoopOffTarget {
        loop_index: usize,
        distance: f64,
        tol: f64,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("bridge width {width} exceeds the adjacent segment length {available}")]
    BridgeTooWide { width: f64, available: f64 },

    #[error("incompatible trim: {0}")]
    IncompatibleTrim(String),

    #[error("no balance point; adjust h or delta (c0 = {c0}, allowed [{lo}, {hi}])")]
    NoBalancePoint { c0: f64, lo: f64, hi: f64 },

    #[error("C too small: threshold {0} is not positive")]
    CTooSmall(f64),

    #[error("no catenoid spans the given circles")]
    NoCatenoid,

    #[error("surgery failed: {0}")]
    Surgery(String),

    #[error("degenerate boundary: {0}")]
    DegenerateBoundary(String),

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
