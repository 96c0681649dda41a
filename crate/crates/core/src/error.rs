use crate::mesh::BoundaryTag;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("cell {cell} references node {node}, but the mesh has {count} nodes")]
    IndexOutOfRange { cell: usize, node: usize, count: usize },

    #[error("edge ({0}, {1}) is shared by more than two cells")]
    NonManifoldEdge(usize, usize),

    #[error("edge ({0}, {1}) is traversed in the same direction by both of its cells")]
    InconsistentEdge(usize, usize),

    #[error("cell {0} is degenerate (zero area)")]
    DegenerateCell(usize),

    #[error("boundary edge ({0}, {1}) has no boundary tag")]
    MissingBoundaryTag(usize, usize),

    #[error("tagged edge ({0}, {1}) is not a boundary edge of the mesh")]
    NotABoundaryEdge(usize, usize),

    #[error("zero-length edge")]
    ZeroLengthEdge,

    #[error("rank-deficient least-squares system on cell {cell}, stencil {stencil}")]
    RankDeficient { cell: usize, stencil: usize },

    #[error(
        "non-physical state (rho = {rho:e}, p = {pressure:e}){}{}",
        .cell.map(|c| format!(" in cell {c}")).unwrap_or_default(),
        .position.map(|p| format!(" at sweep position {p}")).unwrap_or_default()
    )]
    NonPhysical {
        rho: f64,
        pressure: f64,
        cell: Option<usize>,
        position: Option<usize>,
    },

    #[error("no boundary rule for tag {0}")]
    MissingRule(BoundaryTag),

    #[error("unknown case '{0}'")]
    UnknownCase(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Attach a cell index to a non-physical-state error.
    pub(crate) fn in_cell(self, i: usize) -> Self {
        match self {
            Error::NonPhysical {
                rho,
                pressure,
                cell: None,
                position,
            } => Error::NonPhysical {
                rho,
                pressure,
                cell: Some(i),
                position,
            },
            other => other,
        }
    }

    pub(crate) fn at_position(self, k: usize) -> Self {
        match self {
            Error::NonPhysical {
                rho,
                pressure,
                cell,
                position: None,
            } => Error::NonPhysical {
                rho,
                pressure,
                cell,
                position: Some(k),
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
