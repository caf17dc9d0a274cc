use thiserror::Error;

/// Errors raised by the construction and verification pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("cannot parse {0:?}")]
    Parse(String),

    #[error("stabilizer search exhausted: no closure within word length {0}")]
    StabilizerExhausted(usize),

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("not vertex-transitive: edge endpoints lie in different point orbits")]
    NotVertexTransitive,

    #[error("degenerate vertex figure: star has {0} edges, need at least 3")]
    DegenerateVertexFigure(usize),

    #[error("alternation violated: {0}")]
    AlternationViolated(String),

    #[error("face filling not unique: {0}")]
    FillingNotUnique(String),

    #[error("inconsistency: {0}")]
    Inconsistency(String),

    #[error("vertex figure selection failed: {0}")]
    FigureSelection(String),

    #[error("unknown export format {0:?}")]
    UnknownFormat(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
