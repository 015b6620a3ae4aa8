use thiserror::Error;

pub type Result<T, E = WmpError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WmpError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("variable space mismatch: {left} vs {right}")]
    VarSpace { left: String, right: String },

    #[error("gcd of two zero polynomials is undefined")]
    UndefinedGcd,

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("matrix {name} is not Hermitian: entry ({row}, {col}) differs from the conjugate of ({col}, {row})")]
    NotHermitian {
        name: String,
        row: usize,
        col: usize,
    },

    /// A quantity that must be nonzero for a positive definite weight vanished identically.
    #[error("weight matrix is not positive definite: {0} is identically zero")]
    WeightNotPositiveDefinite(String),

    #[error("numeric oracle unavailable: {0}")]
    OracleUnavailable(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("invalid generator spec: {0}")]
    Spec(String),
}

impl WmpError {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        WmpError::Dimension(msg.into())
    }

    /// True for failures caused by the weights or by inconsistent intermediate quantities.
    pub fn is_weight_error(&self) -> bool {
        matches!(
            self,
            WmpError::NotHermitian { .. } | WmpError::WeightNotPositiveDefinite(_)
        )
    }
}
