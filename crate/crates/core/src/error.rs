use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {re}{im:+}i is not strictly inside the unit disc")]
    BoundaryPoint { re: f64, im: f64 },

    #[error("degenerate Möbius map: denominator magnitude {0:e}")]
    DegenerateMap(f64),

    #[error("matrix is not a disc automorphism: {0}")]
    NotAutomorphism(String),

    #[error("invalid flow parameters: {0}")]
    InvalidFlow(String),

    #[error("exponent p = {0} must satisfy 1 < p < \u{221e}")]
    InvalidExponent(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("support functional of the zero vector is undefined")]
    ZeroVector,

    #[error("function does not vanish at 0 (|f(0)| = {0:e})")]
    NotInB0(f64),

    #[error("operator is not a reflection: residual {residual:e}")]
    NotReflection { residual: f64 },

    #[error("operator is not an isometry of E: distortion {distortion:e}")]
    NotIsometry { distortion: f64 },

    #[error("operator is not hermitian on E: exp(itV) distortion {distortion:e}")]
    NotHermitian { distortion: f64 },

    #[error("functional has dual norm {0}, expected 1")]
    NotNormalized(f64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unimodular parameter required, got |\u{3bb}| = {0}")]
    NotUnimodular(f64),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed descriptor: {0}")]
    Descriptor(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
