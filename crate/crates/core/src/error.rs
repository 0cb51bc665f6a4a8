use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report. `exit_code` maps each variant onto
/// the command-line contract.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown case: {0}")]
    UnknownCase(String),
    #[error("cannot parse {0}")]
    Parse(String),
    #[error("not Calabi-Yau: {0}")]
    NotCalabiYau(String),

    #[error("degenerate quadratic: leading coefficient is zero")]
    DegenerateQuadratic,
    #[error("no real root: discriminant {0} is negative")]
    NoRealRoot(String),
    #[error("degenerate spectrum: repeated eigenvalue {0}")]
    DegenerateSpectrum(String),
    #[error("no real spectrum: discriminant {0} is negative")]
    NoRealSpectrum(String),
    #[error("no flop solution: both roots give alpha*beta >= 0")]
    NoFlopSolution,
    #[error("irrational flop: {0}")]
    IrrationalFlop(String),
    #[error("ambiguous symmetry: {0}")]
    AmbiguousSymmetry(String),
    #[error("composition mismatch: {0}")]
    CompositionMismatch(String),
    #[error("finite order or parabolic: {0}")]
    FiniteOrParabolic(String),

    #[error("malformed case: {0}")]
    MalformedCase(String),
    #[error("profile inconsistency: {0}")]
    ProfileInconsistency(String),
    #[error("no exceptional surface: {0}")]
    NoExceptionalSurface(String),
    #[error("unrecognized fibration: {0}")]
    UnrecognizedFibration(String),
    #[error("unrecognized contraction: {0}")]
    UnrecognizedContraction(String),
    #[error("chamber verification failure at wall {wall}: {reason}")]
    ChamberVerification { wall: String, reason: String },
    #[error("cone conjecture check failed: {0}")]
    ConeConjecture(String),
    #[error("invalid catalog: {0}")]
    Catalog(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            UnknownCase(_) | Parse(_) => 2,
            NotCalabiYau(_) => 3,
            DegenerateQuadratic
            | NoRealRoot(_)
            | DegenerateSpectrum(_)
            | NoRealSpectrum(_)
            | NoFlopSolution
            | IrrationalFlop(_)
            | AmbiguousSymmetry(_)
            | CompositionMismatch(_)
            | FiniteOrParabolic(_) => 4,
            MalformedCase(_)
            | ProfileInconsistency(_)
            | NoExceptionalSurface(_)
            | UnrecognizedFibration(_)
            | UnrecognizedContraction(_)
            | ChamberVerification { .. }
            | ConeConjecture(_)
            | Catalog(_) => 5,
        }
    }

    pub(crate) fn chamber(wall: impl ToString, reason: impl Into<String>) -> Self {
        Error::ChamberVerification {
            wall: wall.to_string(),
            reason: reason.into(),
        }
    }
}
