use thiserror::Error;

/// Errors raised by the complex, persistence and cycle routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("cell {vertices:?} is missing its face {face:?}")]
    MissingFace {
        vertices: Vec<usize>,
        face: Vec<usize>,
    },
    #[error("cell {0:?} is already present")]
    DuplicateCell(Vec<usize>),
    #[error("invalid cell {0:?}")]
    InvalidCell(Vec<usize>),
    #[error("weight {0} is not a non-negative finite number")]
    NegativeWeight(f64),
    #[error("the boundary of a 0-chain is undefined")]
    DimZero,
    #[error("cell {0:?} has no weight")]
    MissingWeight(Vec<usize>),
    #[error("unknown cell (dim {dim}, index {idx})")]
    UnknownCell { dim: usize, idx: usize },
    #[error("operation requires a {expected} complex")]
    WrongCellKind { expected: &'static str },

    #[error("face at filtration index {face} appears after its coface at index {coface}")]
    FaceAfterCoface { face: usize, coface: usize },
    #[error("cell {0:?} is not in the filtration")]
    MissingCell(Vec<usize>),
    #[error("cell {0:?} appears twice in the filtration")]
    DuplicateInFiltration(Vec<usize>),
    #[error("index {index} out of range 0..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("interval [{birth}, {death}) is not in the dimension-{dim} diagram")]
    IntervalNotInDiagram {
        dim: usize,
        birth: usize,
        death: String,
    },
    #[error("expected an infinite interval, got [{birth}, {death})")]
    IntervalNotInfinite { birth: usize, death: usize },
    #[error("expected a finite interval, got [{0}, +inf)")]
    NotFiniteInterval(usize),
    #[error("dimension {0} is too low for this operation")]
    DimensionTooLow(usize),

    #[error("flow network: {0}")]
    InvalidNetwork(String),
    #[error("cut does not match the network: {0}")]
    InvalidCut(String),

    #[error("{cell:?} has {cofaces} cofaces; not a weak pseudomanifold")]
    NotWeakPseudomanifold { cell: Vec<usize>, cofaces: usize },
    #[error("the working complex has no top-dimensional cells")]
    NoTopCells,
    #[error("minimal cut has infinite capacity")]
    InternalNoFiniteCut,
    #[error("no cycle passes through {0:?}")]
    NoCycleThroughSimplex(Vec<usize>),

    #[error("complex is not embedded: {0}")]
    NotEmbedded(String),
    #[error("degenerate simplex (|det| = {det:e}, scale = {scale:e})")]
    Degenerate { det: f64, scale: f64 },
    #[error("{face:?} is not a face of {cell:?}")]
    NotAFace { cell: Vec<usize>, face: Vec<usize> },
    #[error("coface {0:?} projects to a point on the normal plane")]
    DegenerateProjection(Vec<usize>),
    #[error("cofaces around {0:?} are not locally embedded")]
    NotEmbeddedLocally(Vec<usize>),
    #[error("void boundaries are inconsistent at {0:?}")]
    InconsistentBoundaries(Vec<usize>),

    #[error("grid dimensions {0:?} are too small (need at least 2 per axis)")]
    GridTooSmall([usize; 3]),
    #[error("chain is not in the image of the suspension: {0}")]
    NotInImage(String),
    #[error("chain cell {0:?} is not in the complex")]
    ChainNotInComplex(Vec<usize>),
    #[error("enumeration needs {0} basis cycles; the limit is {1}")]
    TooLarge(usize, usize),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures that indicate a broken internal invariant rather
    /// than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::InternalNoFiniteCut | Error::InconsistentBoundaries(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
