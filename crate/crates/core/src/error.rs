use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{what} refers to unknown {kind} `{name}`")]
    DanglingReference { what: String, kind: &'static str, name: String },
    #[error("duplicate {kind} id `{name}`")]
    DuplicateId { kind: &'static str, name: String },
    #[error("two squares share the left-hand side {0}")]
    DuplicateSquare(String),
    #[error("composable pair {0} has no factorization square")]
    IncompleteBijection(String),
    #[error("malformed square {0}")]
    MalformedSquare(String),
    #[error("color {color} outside 1..={k}")]
    ColorOutOfRange { color: usize, k: usize },
    #[error("graph is not a valid k-graph presentation: {0}")]
    InvalidGraph(String),
    #[error("paths are not composable: {0}")]
    NotComposable(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("unknown library graph `{0}`")]
    UnknownLibraryGraph(String),
    #[error("invalid infinite path: {0}")]
    InvalidInfinitePath(String),
    #[error("source mismatch: {0}")]
    SourceMismatch(String),
    #[error("range mismatch: {0}")]
    RangeMismatch(String),

    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("vertex matrices have no common positive eigenvector (residual {0:e})")]
    NoCommonEigenvector(f64),
    #[error("measure kind `{kind}` is not defined on this graph: {why}")]
    UnsupportedGraphForKind { kind: &'static str, why: String },
    #[error("path is not in the graph: {0}")]
    PathNotInGraph(String),
    #[error("base cylinder has zero mass")]
    ZeroMassBase,
    #[error("invalid measure parameters: {0}")]
    InvalidParams(String),
    #[error("value has no exact representation: {0}")]
    NotExact(String),
    #[error("measures live on different graphs")]
    GraphMismatch,
    #[error("depth {given} is below the {needed} this check needs")]
    InsufficientDepth { given: usize, needed: usize },

    #[error("cannot refine from level {from} down to {to}")]
    LevelDecrease { from: u32, to: u32 },
    #[error("operation unsupported for this measure: {0}")]
    UnsupportedMeasure(String),

    #[error("gauge point is not unimodular: {0}")]
    NotUnimodular(String),
    #[error("tails do not agree: {0}")]
    TailMismatch(String),
    #[error("bad choice of infinite path: {0}")]
    BadChoice(String),

    #[error("malformed region: {0}")]
    MalformedRegion(String),
    #[error("point lies on a piece boundary")]
    OnBoundary,
    #[error("point is outside every piece")]
    OutOfDomain,
    #[error("piece has vanishing derivative")]
    DegeneratePiece,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
