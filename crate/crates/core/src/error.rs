use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("polynomials belong to different rings")]
    ContextMismatch,
    #[error("{0} is not a power of the characteristic {1}")]
    NotPowerOfCharacteristic(u64, u32),
    #[error("complete-intersection flag is not set for this ring")]
    NotCompleteIntersection,
    #[error("degree bound {bound} is too small to certify generation (need at least {needed})")]
    DegreeBoundTooSmall { bound: i64, needed: i64 },
    #[error("Künneth hypothesis violated: {0}")]
    KunnethHypothesis(String),
    #[error("not a system of parameters: {0}")]
    NotSystemOfParameters(String),
    #[error("no stabilization within the truncation limit {0}")]
    NoStabilization(u32),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("divisor is not ample (degree {0})")]
    NotAmple(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
