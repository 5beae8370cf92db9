use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Reasons a triple `(F, W, N)` fails to be admissible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdmissibilityClause {
    /// `N` is not nilpotent.
    NotNilpotent,
    /// `N` does not map `W_k` into `W_k`.
    DoesNotPreserveWeight { k: i32 },
    /// The relative weight filtration does not exist (proven obstruction).
    RelativeWeightMissing { k: i32, primitive_weight: i32 },
    /// The relative weight filtration could not be constructed.
    RelativeWeightUnresolved(String),
    /// `(F, relW)` fails to induce a mixed Hodge structure on `W_k`.
    NotMixedOnStep { k: i32, reason: String },
    /// `N` is not a morphism of type `(-1,-1)` of `(F, relW)`.
    NotMinusOneMorphism { p: i32, q: i32 },
    /// The grading of `(F, relW)` does not preserve `W`.
    GradingBreaksWeight,
}

impl std::fmt::Display for AdmissibilityClause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::NotNilpotent => write!(f, "N is not nilpotent"),
            Self::DoesNotPreserveWeight { k } => write!(f, "N does not preserve W_{k}"),
            Self::RelativeWeightMissing { k, primitive_weight } => write!(
                f,
                "(ii) relative weight filtration does not exist: obstruction at W_{k}, primitive weight {primitive_weight}"
            ),
            Self::RelativeWeightUnresolved(msg) => {
                write!(f, "(ii) relative weight filtration unresolved: {msg}")
            }
            Self::NotMixedOnStep { k, reason } => {
                write!(f, "(i) (F, relW) is not a mixed Hodge structure on W_{k}: {reason}")
            }
            Self::NotMinusOneMorphism { p, q } => write!(
                f,
                "(ii-pairing) N does not map I^{{{p},{q}}} into I^{{{},{}}}",
                p - 1,
                q - 1
            ),
            Self::GradingBreaksWeight => write!(f, "grading of (F, relW) does not preserve W"),
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("endomorphism is not semisimple with the requested eigenvalues")]
    NotSemisimple,

    #[error("endomorphism is not nilpotent")]
    NotNilpotent,

    #[error("matrix is not hermitian")]
    NotHermitian,

    #[error("matrix is singular")]
    Singular,

    #[error("vectors do not form a direct sum decomposition")]
    NotDirectSum,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("not a mixed Hodge structure: {0}")]
    NotMhs(String),

    #[error("Hodge numbers do not match the bigrading at ({p},{q}): expected {expected}, found {found}")]
    HodgeNumberMismatch {
        p: i32,
        q: i32,
        expected: usize,
        found: usize,
    },

    #[error("mixed Hodge metric is not positive definite (pivot {index} = {pivot})")]
    NotGradedPolarized { index: usize, pivot: String },

    #[error("metric is not positive definite")]
    NotDefinite,

    #[error("Lie algebra is not compatible with the bigrading: {0}")]
    LieBigrading(String),

    #[error("delta splitting failed to verify: {0}")]
    SplitSolveFailed(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("relative weight filtration does not exist (obstruction at W_{k}, primitive weight {primitive_weight})")]
    RelativeWeightDoesNotExist { k: i32, primitive_weight: i32 },

    #[error("relative weight filtration construction failed: {0}")]
    ConstructionFailed(String),

    #[error("not admissible: {0}")]
    NotAdmissible(AdmissibilityClause),

    #[error("target filtration is outside the chart: {0}")]
    OutOfChart(String),

    #[error("grading is not defined over the reals")]
    NotRealGrading,

    #[error("scaling exponent {0} is not an integer power of t")]
    NonExactPower(String),

    #[error("unknown scenario '{0}'")]
    UnknownScenario(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl Error {
    /// Stable name of the variant, used in machine-readable diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotSemisimple => "NotSemisimple",
            Error::NotNilpotent => "NotNilpotent",
            Error::NotHermitian => "NotHermitian",
            Error::Singular => "Singular",
            Error::NotDirectSum => "NotDirectSum",
            Error::Parse(_) => "Parse",
            Error::Invalid(_) => "Invalid",
            Error::NotMhs(_) => "NotMhs",
            Error::HodgeNumberMismatch { .. } => "HodgeNumberMismatch",
            Error::NotGradedPolarized { .. } => "NotGradedPolarized",
            Error::NotDefinite => "NotDefinite",
            Error::LieBigrading(_) => "LieBigrading",
            Error::SplitSolveFailed(_) => "SplitSolveFailed",
            Error::NoSolution(_) => "NoSolution",
            Error::Precondition(_) => "Precondition",
            Error::RelativeWeightDoesNotExist { .. } => "RelativeWeightDoesNotExist",
            Error::ConstructionFailed(_) => "ConstructionFailed",
            Error::NotAdmissible(_) => "NotAdmissible",
            Error::OutOfChart(_) => "OutOfChart",
            Error::NotRealGrading => "NotRealGrading",
            Error::NonExactPower(_) => "NonExactPower",
            Error::UnknownScenario(_) => "UnknownScenario",
            Error::Io(_) => "Io",
        }
    }

    /// Malformed or unusable input, as opposed to a mathematical property
    /// that fails to hold.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_) | Error::Invalid(_) | Error::DimensionMismatch { .. } | Error::UnknownScenario(_) | Error::Io(_)
        )
    }
}
