use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("sampling beyond table cutoff ({table}: cutoff {cutoff})")]
    CutoffExceeded { table: String, cutoff: usize },
    #[error("no validated counting method for {0}")]
    Infeasible(String),
    #[error("enumeration cap exceeded: n = {n} > {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("forest height cap {found} does not match required {expected}")]
    CapMismatch { expected: usize, found: usize },
    #[error("slot fill for vertex {vertex} has boundary {found}, expected {expected}")]
    BoundaryMismatch { vertex: usize, expected: usize, found: usize },
    #[error("missing slot fill for vertex {0}")]
    MissingFill(usize),
    #[error("map invariant violated: {0}")]
    InvariantViolation(String),
    #[error("no vertex has label greater than {0}; no maximal cycle")]
    NoCycle(usize),
    #[error("tree {0} does not attain the height cap")]
    TreeNotMaximal(usize),
    #[error("counts unavailable: {0}")]
    CountsUnavailable(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
