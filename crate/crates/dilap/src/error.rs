use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("duplicate vertex id '{0}'")]
    DuplicateVertex(String),
    #[error("duplicate arc id '{0}'")]
    DuplicateArc(String),
    #[error("arc '{arc}' references missing vertex '{vertex}'")]
    DanglingEndpoint { arc: String, vertex: String },
    #[error("non-positive weight on {kind} '{id}'")]
    NonPositiveWeight { kind: &'static str, id: String },
    #[error("non-finite weight on {kind} '{id}'")]
    NonFiniteWeight { kind: &'static str, id: String },
    #[error("unknown vertex '{0}'")]
    UnknownVertex(String),
    #[error("unknown arc '{0}'")]
    UnknownArc(String),
    #[error("value belongs to a different digraph")]
    GraphMismatch,
    #[error("vertex subset is empty")]
    EmptySubset,
    #[error("vertex index {index} out of range for digraph of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("function domain does not match the complement of the boundary set")]
    DomainMismatch,
    #[error("boundary set covers every vertex; no interior remains")]
    NoInterior,
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("eigenvalue iteration failed to converge for a matrix of order {order}")]
    NonConvergence { order: usize },
    #[error("matrix is not indexed by vertices")]
    NotVertexIndexed,
    #[error("basis id '{0}' not present in matrix")]
    MissingBasisId(String),
    #[error("subset is not a source component")]
    NotASourceComponent,
    #[error("subset is not a sink component")]
    NotASinkComponent,
    #[error("sink component is not reachable from the source component")]
    NotReachable,
    #[error("digraph is not acyclic")]
    NotAcyclic,
    #[error("sources and sinks overlap at vertex '{0}'")]
    OverlappingTerminals(String),
    #[error("designated {role} vertex '{vertex}' does not lie in a {role} component")]
    MisplacedTerminal { vertex: String, role: &'static str },
    #[error("vertex '{0}' is not a designated source")]
    NotADesignatedSource(String),
    #[error("cut must contain every designated source and exclude every designated sink; offender '{0}'")]
    BadCut(String),
    #[error("flow violates conservation: residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    NotConserved { residual: f64, tolerance: f64 },
    #[error("flow values must be real; arc '{0}' has a nonzero imaginary part")]
    ComplexFlow(String),
}
