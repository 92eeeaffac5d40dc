use thiserror::Error;

/// Errors raised by the library.
///
/// Validation failures describe bad input; [`Error::is_numerical`] separates the
/// few variants that signal a numerical pathology instead.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("distance matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("distance matrix is empty")]
    EmptySpace,
    #[error("{labels} labels given for a {points}-point space")]
    LabelCount { labels: usize, points: usize },
    #[error("non-finite distance at ({0}, {1})")]
    NonFinite(usize, usize),
    #[error("non-zero diagonal entry at ({0}, {0})")]
    NonZeroDiagonal(usize),
    #[error("asymmetric distances at ({0}, {1}) and ({1}, {0})")]
    Asymmetric(usize, usize),
    #[error("non-positive distance between distinct points ({0}, {1})")]
    NonPositive(usize, usize),
    #[error("triangle inequality fails at ({i}, {j}, {l}): d({i},{j}) > d({i},{l}) + d({l},{j})")]
    Triangle { i: usize, j: usize, l: usize },

    #[error("tree has no vertices")]
    EmptyTree,
    #[error("duplicate vertex identifier {0:?}")]
    DuplicateVertex(String),
    #[error("unknown vertex identifier {0:?}")]
    UnknownVertex(String),
    #[error("tree with {vertices} vertices needs {} edges, got {edges}", vertices - 1)]
    EdgeCount { vertices: usize, edges: usize },
    #[error("edge {0} is a self loop")]
    SelfLoop(usize),
    #[error("edge {0} has a non-positive or non-finite weight")]
    BadWeight(usize),
    #[error("tree is not connected")]
    Disconnected,
    #[error("{got} edge weights given for a tree with {expected} edges")]
    WeightCount { expected: usize, got: usize },

    #[error("index {index} out of range for a {len}-point space")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("index set is empty")]
    EmptySubset,
    #[error("index {0} appears more than once")]
    DuplicateIndex(usize),

    #[error("negative exponent {0}")]
    NegativeExponent(f64),
    #[error("exponent must be positive, got {0}")]
    NonPositiveExponent(f64),
    #[error("coefficient vector has length {got}, expected {expected}")]
    EtaLength { expected: usize, got: usize },
    #[error("coefficient vector sums to {0}, expected 0")]
    EtaUnbalanced(f64),
    #[error("simplex sides must have equal length >= 2, got {a} and {b}")]
    SimplexShape { a: usize, b: usize },
    #[error("exhaustive simplex search supports at most {max} points, got {got}")]
    SpaceTooLarge { max: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no failing exponent found up to p_cap = {0}; raise the cap")]
    Bracketing(f64),

    #[error("vertex cap {cap} exceeded: tree would have {needed} vertices")]
    VertexCap { cap: usize, needed: usize },
    #[error("degree sequence is trivial (every degree is 1)")]
    TrivialDegrees,
    #[error("hypothesis 2*l0 < l0 + ... + l(n-1) fails")]
    LengthHypothesis,
    #[error("weight function is undefined at n = {0}")]
    WeightUndefined(usize),
    #[error("weight function is not positive at n = {0}")]
    WeightNotPositive(usize),
    #[error("cannot parse weight function {0:?}")]
    WeightParse(String),

    #[error("map is not injective on the simplex points")]
    NotInjective,
    #[error("map is not a (1+eps)-scale isomorphism on the simplex points")]
    NotScaleIsomorphism,

    #[error("eigensolver did not converge after {0} sweeps")]
    EigenNoConvergence(usize),
}

impl Error {
    /// True for failures that indicate numerical trouble rather than invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::EigenNoConvergence(_) | Error::Bracketing(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
