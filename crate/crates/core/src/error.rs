use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong across the engine.
///
/// Variants are grouped by how a caller should react: input problems,
/// searches that ran out of budget, precondition violations, and internal
/// invariant breaches (which always indicate a bug).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("cartan matrix is empty")]
    EmptyMatrix,
    #[error("cartan matrix row {row} has {len} entries, expected {rank}")]
    NotSquare { row: usize, len: usize, rank: usize },
    #[error("diagonal entry at ({index},{index}) is {value}, expected 2")]
    DiagonalNotTwo { index: usize, value: i64 },
    #[error("off-diagonal entry at ({row},{col}) is {value}, expected <= 0")]
    PositiveOffDiagonal { row: usize, col: usize, value: i64 },
    #[error("zero-asymmetry at ({row},{col})/({col},{row})")]
    ZeroAsymmetry { row: usize, col: usize },
    #[error("residue field size q = {0} must be at least 2")]
    InvalidFieldSize(i64),
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("vector {0} is not a real root")]
    NotARealRoot(String),
    #[error("roots are equal or opposite")]
    EqualOrOpposite,
    #[error("integer overflow in exact lattice arithmetic")]
    Overflow,
    #[error("wall relation inconclusive: fewer than three quadrants witnessed within radius {cap}")]
    Inconclusive { cap: usize },
    #[error("power cap {0} is below the minimum of 4")]
    PowerCapTooSmall(usize),
    #[error("element is elliptic (finite order); a hyperbolic element is required")]
    Elliptic,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("no root found within orbit cap {orbit_cap} ({inconclusive} candidates inconclusive)")]
    Exhausted { orbit_cap: usize, inconclusive: usize },
    #[error("search exhausted at stage {stage}: {detail}")]
    SearchExhausted { stage: String, detail: String },
    #[error("insufficient depth: need radius {required}, have {available}")]
    InsufficientDepth { required: i64, available: i64 },
    #[error("malformed portrait: {0}")]
    MalformedPortrait(String),
    #[error("invalid vertex {0:?}")]
    InvalidVertex(String),
    #[error("invalid end or line: {0}")]
    InvalidLine(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u8, u8),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Budget exhaustion and undecidable-at-this-depth outcomes, as opposed to
    /// bad input or bugs.
    pub fn is_inconclusive(&self) -> bool {
        matches!(
            self,
            Error::Inconclusive { .. }
                | Error::Exhausted { .. }
                | Error::SearchExhausted { .. }
                | Error::InsufficientDepth { .. }
                | Error::Overflow
        )
    }

    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Malformed(_)
                | Error::EmptyMatrix
                | Error::NotSquare { .. }
                | Error::DiagonalNotTwo { .. }
                | Error::PositiveOffDiagonal { .. }
                | Error::ZeroAsymmetry { .. }
                | Error::InvalidFieldSize(_)
                | Error::IndexOutOfRange { .. }
                | Error::NotARealRoot(_)
                | Error::EqualOrOpposite
                | Error::PowerCapTooSmall(_)
                | Error::MalformedPortrait(_)
                | Error::InvalidVertex(_)
                | Error::InvalidLine(_)
                | Error::DegreeMismatch(..)
        )
    }
}
