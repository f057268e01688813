use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian: ||H - H^dag||_F = {residual:e}")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is not one: Tr = {trace}")]
    TraceNotOne { trace: f64 },

    #[error("Kraus operators are not complete: ||sum E^dag E - I||_F = {residual:e}")]
    NotComplete { residual: f64 },

    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    #[error("{name} = {value} is out of range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("numeric consistency failure in {quantity}: value {value:e}")]
    NegativeQuantity { quantity: &'static str, value: f64 },

    #[error("closed form {name} has negative square-root argument {argument:e}")]
    ClosedFormDomain { name: &'static str, argument: f64 },

    #[error("bound {bound} violated: lhs {lhs} < bound {rhs} (slack {slack:e})")]
    Verification {
        bound: String,
        lhs: f64,
        rhs: f64,
        slack: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            reason: reason.into(),
        }
    }
}

/// Checks two dimensions agree.
pub(crate) fn ensure_dim(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}

/// Values in `[-1e-12, 0)` are rounding noise and are clamped to zero; anything
/// more negative is reported.
pub(crate) fn clamp_nonneg(quantity: &'static str, value: f64) -> Result<f64> {
    const NEG_TOL: f64 = 1e-12;
    if !value.is_finite() {
        return Err(Error::NegativeQuantity { quantity, value });
    }
    if value >= 0.0 {
        Ok(value)
    } else if value >= -NEG_TOL {
        Ok(0.0)
    } else {
        Err(Error::NegativeQuantity { quantity, value })
    }
}
