use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("character modulo {modulus} is not primitive (conductor {conductor})")]
    NotPrimitive { modulus: u64, conductor: u64 },

    #[error("gcd({p}, {q}) = {gcd}, expected a reduced fraction")]
    NotCoprime { p: i64, q: i64, gcd: i64 },

    #[error("{disc} is not a negative discriminant (need D < 0 and D = 0, 1 mod 4)")]
    InvalidDiscriminant { disc: i64 },

    #[error("{disc} is not a fundamental discriminant")]
    NotFundamental { disc: i64 },

    #[error("form ({a}, {b}, {c}) is not positive definite")]
    NotPositiveDefinite { a: i64, b: i64, c: i64 },

    #[error("denominator {q} exceeds 2^(j/2) at level j = {level}")]
    OutsideDissection { level: u32, q: u64 },

    #[error("evaluation point is singular: {0}")]
    SingularPoint(String),

    #[error("quadrature did not converge: estimated error {achieved:.3e} > tolerance {tolerance:.3e}")]
    QuadratureNonConvergence { achieved: f64, tolerance: f64 },

    #[error("only {resolved} resolved ladder points in the fit window, need at least {required}")]
    InsufficientResolution { resolved: usize, required: usize },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
