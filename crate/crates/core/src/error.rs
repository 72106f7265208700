use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what}: size {got} exceeds the limit of {limit}")]
    SizeExceeded {
        what: &'static str,
        limit: usize,
        got: usize,
    },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("malformed graph text at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown graph name `{0}`")]
    UnknownGraph(String),
    #[error("arity mismatch: expected {expected} roots, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("edge {0:?} is not present in the host")]
    EdgeAbsent((usize, usize)),
    #[error("edge {0:?} is already on the board")]
    DuplicateEdge((usize, usize)),
    #[error("root-induced graphs of the joined parts disagree")]
    RootMismatch,
    #[error("{0} requires a graph with at least one edge")]
    Edgeless(&'static str),
    #[error("{0} requires a graph that is not a forest")]
    Forest(&'static str),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("coloring domain does not match the edges of the colored graph")]
    DomainMismatch,
    #[error("budget exceeded in {what}: {detail}")]
    Budget { what: &'static str, detail: String },
    #[error("degenerate experiment grid: {0}")]
    DegenerateGrid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure_size(what: &'static str, got: usize, limit: usize) -> Result<()> {
    if got > limit {
        Err(Error::SizeExceeded { what, limit, got })
    } else {
        Ok(())
    }
}
