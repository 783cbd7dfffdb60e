use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector is not a unit vector (norm {norm})")]
    NotUnitVector { norm: f64 },

    #[error("point {index} has negative imaginary part {im}")]
    NegativeImaginary { index: usize, im: f64 },

    #[error("imaginary unit has modulus {modulus}, expected 1")]
    NotImaginaryUnit { modulus: f64 },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not normal")]
    NotNormal,

    #[error("operation requires a 2x2 matrix, got {n}x{n}")]
    NotTwoByTwo { n: usize },

    #[error("{algorithm} did not converge after {iterations} iterations")]
    NoConvergence {
        algorithm: &'static str,
        iterations: usize,
    },

    #[error("eigenvalues of the complex adjoint do not pair up: {detail}")]
    ConjugatePairing { detail: String },

    #[error("{re}+{im}i is not a standard eigenvalue (nearest at distance {distance:e})")]
    NotInSpectrum { re: f64, im: f64, distance: f64 },

    #[error("eigenvector residual {residual:e} exceeds bound {bound:e}")]
    EigenvectorResidual { residual: f64, bound: f64 },

    #[error("triangular form residual {residual:e} exceeds bound {bound:e}")]
    TriangularResidual { residual: f64, bound: f64 },

    #[error("empty input")]
    EmptyInput,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
