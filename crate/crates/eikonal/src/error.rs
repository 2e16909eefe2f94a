use thiserror::Error;

/// Errors surfaced by the solver and sampling layers.
#[derive(Debug, Error)]
pub enum EikonalError {
    #[error("quaternion is singular (|z|^2 + |w|^2 = 0)")]
    SingularQuaternion,
    #[error("non-finite component in {0}")]
    NonFinite(&'static str),
    #[error("operation not supported for ensemble variant {0}")]
    UnsupportedVariant(&'static str),
    #[error("bridge time {t} exceeds horizon t_f = {t_f}")]
    BridgeTimeOverflow { t: f64, t_f: f64 },
    #[error("radial chart is singular at |w| = 0")]
    KempHallAxis,
    #[error("no root satisfies the Herglotz branch condition at z = {z}")]
    BranchAmbiguity { z: num_complex::Complex64 },
    #[error("spec is not a Hermitian additive ensemble")]
    NonHermitianSpec,
    #[error("Newton iteration failed to converge from all seeds at z = {z}")]
    NoConvergence { z: num_complex::Complex64 },
    #[error("integration step underflow")]
    StepUnderflow,
    #[error("grid too small for interior stencil")]
    GridTooSmall,
    #[error("support region is empty")]
    EmptySupport,
    #[error("evaluation point collides with a measure atom")]
    AtomCollision,
    #[error("density below threshold inside claimed support")]
    DegenerateDensity,
    #[error("density value {0} more negative than stencil-noise threshold")]
    NegativeDensity(f64),
    #[error("bad matrix dimension {0}")]
    BadDimension(usize),
    #[error("eigendecomposition failed: {0}")]
    EigFailure(String),
    #[error("matrix is numerically defective (bi-orthonormalization cond > 1e12)")]
    DefectiveMatrix,
    #[error("invalid measure: {0}")]
    BadMeasure(String),
    #[error("config error in field `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, EikonalError>;
