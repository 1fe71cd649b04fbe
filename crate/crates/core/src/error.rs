use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("scalar kinds do not match")]
    KindMismatch,

    #[error("modulus {0} is not an odd prime")]
    InvalidModulus(u64),

    #[error("matrix is not symplectic")]
    NonSymplectic,

    #[error("known set is not isotropic (contains non-commuting variables)")]
    NonIsotropicKnownSet,

    #[error("valuation is inconsistent with the linear relations of the known set")]
    InconsistentValuation,

    #[error("arrows are not composable")]
    NotComposable,

    #[error("enumeration too large: {size} candidates exceeds the limit")]
    EnumerationTooLarge { size: u128 },

    #[error("functional has zero linear part")]
    ZeroFunctional,

    #[error("mode {mode} out of range for {modes} modes")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error("grids do not match")]
    GridMismatch,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("operator is not Hermitian")]
    NotHermitian,

    #[error("operator is not unitary")]
    NotUnitary,

    #[error("operator is not an orthogonal projector")]
    NotProjector,

    #[error("non-finite value")]
    NonFinite,

    #[error("outcome set is infinite over this field")]
    InfiniteOutcomeSet,

    #[error("outcome is not consistent with the state")]
    ImpossibleOutcome,

    #[error("operation requires {0}")]
    UnsupportedKind(&'static str),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
