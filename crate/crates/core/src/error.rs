use thiserror::Error;

/// Errors raised by the library. Every variant maps onto one of the CLI exit
/// codes through [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or structurally invalid input. `path` locates the offending
    /// field (`gram[0][1]`, `curves[2].genus`, ...).
    #[error("invalid input at {path}: {reason}")]
    InputInvalid { path: String, reason: String },

    /// The adjunction equations admit no canonical class.
    #[error("adjunction equations are inconsistent: {0}")]
    AdjunctionInconsistent(String),

    /// A mathematical precondition of the requested operation does not hold
    /// (non-hyperbolic lattice, curves not spanning, K^2 <= 0, ...).
    #[error("unsupported precondition: {0}")]
    UnsupportedPrecondition(String),

    /// Perron-Frobenius hypotheses fail (decomposable or sign-violating matrix).
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    /// Blow-up script asks for something no surface can do.
    #[error("geometric inconsistency at step {step}: {reason}")]
    GeometricInconsistency { step: String, reason: String },

    /// Fiber divisor is not a rational multiple of -K.
    #[error("fiber divisor is not proportional to -K: {0}")]
    NotAntimultiple(String),

    /// No totally isotropic subgroup of the required order.
    #[error("no isotropic subgroup of order {order} in the discriminant group")]
    Infeasible { order: u64 },

    /// Several non-isomorphic isotropic subgroups exist.
    #[error("ambiguous Mordell-Weil structure: {0:?}")]
    Ambiguous(Vec<Vec<u64>>),

    /// Inequality system does not define a pointed cone.
    #[error("cone is not pointed: {0}")]
    NotPointed(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    /// Enumeration refused because the search space is too large.
    #[error("resource guard: {0}")]
    ResourceGuard(String),
}

impl Error {
    pub fn input(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InputInvalid {
            path: path.into(),
            reason: reason.into(),
        }
    }

    /// Process exit code used by the CLI and mirrored by the C status codes:
    /// 1 determinate negative result, 2 input error, 3 unsupported precondition.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InputInvalid { .. } | Error::UnknownFixture(_) => 2,
            Error::AdjunctionInconsistent(_)
            | Error::GeometricInconsistency { .. }
            | Error::NotAntimultiple(_)
            | Error::Infeasible { .. }
            | Error::Ambiguous(_) => 1,
            Error::UnsupportedPrecondition(_)
            | Error::PreconditionViolation(_)
            | Error::NotPointed(_)
            | Error::ResourceGuard(_) => 3,
        }
    }

    /// Short machine-readable tag used in JSON reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InputInvalid { .. } => "input-invalid",
            Error::AdjunctionInconsistent(_) => "adjunction-inconsistent",
            Error::UnsupportedPrecondition(_) => "unsupported-precondition",
            Error::PreconditionViolation(_) => "precondition-violation",
            Error::GeometricInconsistency { .. } => "geometric-inconsistency",
            Error::NotAntimultiple(_) => "not-antimultiple",
            Error::Infeasible { .. } => "infeasible",
            Error::Ambiguous(_) => "ambiguous",
            Error::NotPointed(_) => "not-pointed",
            Error::UnknownFixture(_) => "unknown-fixture",
            Error::ResourceGuard(_) => "resource-guard",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
