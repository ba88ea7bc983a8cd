use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// `A(λ)` is numerically singular, so λ is (close to) a pole of `G`.
    #[error("A(λ) is singular at λ = {lambda} (σ_min/σ_max = {ratio:.3e})")]
    Pole { lambda: Complex64, ratio: f64 },

    #[error("structure violated: {0}")]
    Structure(String),

    #[error("pencil is not a member of the space: residual {residual:.3e} exceeds {tol:.3e}")]
    NotAMember { residual: f64, tol: f64 },

    #[error("ansatz vector cannot be identified: {0}")]
    DegenerateFit(String),

    #[error("ansatz vector is zero ({0})")]
    ZeroAnsatz(&'static str),

    #[error("determinant interpolation failed: {0}")]
    Interpolation(String),

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("det S(λ) vanishes identically")]
    SingularSystem,

    #[error("generalized eigensolver failed: {0}")]
    SolverFailure(String),

    #[error("vector carries no recoverable block: {0}")]
    DegenerateVector(String),

    #[error("basis matrix is singular: {0}")]
    SingularBasis(String),

    /// Unreadable or malformed input file.
    #[error("invalid input: {0}")]
    Input(String),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
