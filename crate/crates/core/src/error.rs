use thiserror::Error;

/// Every failure the library can report. Variant names double as the stable
/// error codes printed by the command-line front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("moduli differ: |v| = {left}, |w| = {right}")]
    MismatchedModuli { left: f64, right: f64 },
    #[error("both inputs are zero")]
    ZeroInput,
    #[error("quaternion is not purely imaginary (real part {real})")]
    NotPure { real: f64 },
    #[error("quaternion is not a unit (norm {norm})")]
    NotUnit { norm: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("matrix is not in the isometry group (residual {residual:e})")]
    NotGroupMember { residual: f64 },
    #[error("element does not square to plus or minus the identity (residual {residual:e})")]
    NotInvolutionLike { residual: f64 },
    #[error("matrix is singular")]
    Singular,
    #[error("lift is not a null vector (<z,z> = {value:e})")]
    NotNull { value: f64 },
    #[error("operation not supported for the {form} form")]
    UnsupportedForm { form: String },
    #[error("eigen-solver did not reach its residual target: {detail}")]
    ConvergenceFailure { detail: String },
    #[error("element is not hyperbolic")]
    NotHyperbolic,
    #[error("boundary points of the triple coincide")]
    DegenerateTriple,
    #[error("Hermitian triple product vanishes (|H| = {norm:e})")]
    ZeroTriple { norm: f64 },
    #[error("Cartan ratio {ratio} lies outside [0, 1]")]
    CartanOutOfRange { ratio: f64 },
    #[error("angular invariants differ: {first} vs {second}")]
    InvariantMismatch { first: f64, second: f64 },
    #[error("boundary points collide: {detail}")]
    DegenerateConfiguration { detail: String },
    #[error("element does not reverse the tuple (residual {residual:e})")]
    NotReverser { residual: f64 },
    #[error("reverser does not square to -I (residual {residual:e})")]
    SquareCheckFailed { residual: f64 },
    #[error("precondition violated: {detail}")]
    PreconditionViolated { detail: String },
    #[error("the pair shares a boundary fixed point")]
    CommonFixedPoint,
    #[error("matrix is not a rotation (orthogonality residual {residual:e}, det {det})")]
    NotRotation { residual: f64, det: f64 },
    #[error("double-cover factorization residual {residual:e} exceeds tolerance")]
    FactorizationFailure { residual: f64 },
    #[error("parameter must be nonzero")]
    ZeroParameter,
    #[error("factors do not multiply to the element (residual {residual:e})")]
    NotFactorization { residual: f64 },
    #[error("unknown group tag {0:?}")]
    UnknownGroup(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable identifier of the variant, e.g. `"NotGroupMember"`.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MismatchedModuli { .. } => "MismatchedModuli",
            Error::ZeroInput => "ZeroInput",
            Error::NotPure { .. } => "NotPure",
            Error::NotUnit { .. } => "NotUnit",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotGroupMember { .. } => "NotGroupMember",
            Error::NotInvolutionLike { .. } => "NotInvolutionLike",
            Error::Singular => "Singular",
            Error::NotNull { .. } => "NotNull",
            Error::UnsupportedForm { .. } => "UnsupportedForm",
            Error::ConvergenceFailure { .. } => "ConvergenceFailure",
            Error::NotHyperbolic => "NotHyperbolic",
            Error::DegenerateTriple => "DegenerateTriple",
            Error::ZeroTriple { .. } => "ZeroTriple",
            Error::CartanOutOfRange { .. } => "CartanOutOfRange",
            Error::InvariantMismatch { .. } => "InvariantMismatch",
            Error::DegenerateConfiguration { .. } => "DegenerateConfiguration",
            Error::NotReverser { .. } => "NotReverser",
            Error::SquareCheckFailed { .. } => "SquareCheckFailed",
            Error::PreconditionViolated { .. } => "PreconditionViolated",
            Error::CommonFixedPoint => "CommonFixedPoint",
            Error::NotRotation { .. } => "NotRotation",
            Error::FactorizationFailure { .. } => "FactorizationFailure",
            Error::ZeroParameter => "ZeroParameter",
            Error::NotFactorization { .. } => "NotFactorization",
            Error::UnknownGroup(_) => "UnknownGroup",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
