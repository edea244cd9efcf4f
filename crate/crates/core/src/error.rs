use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("point {t} lies outside the tabulated support [{lo}, {hi}]")]
    OutOfSupport { t: f64, lo: f64, hi: f64 },
    #[error("shift {h} is not on the sample lattice with step {step}")]
    NotOnLattice { h: f64, step: f64 },
    #[error("window too short: need {needed} samples, have {available}")]
    WindowTooShort { needed: usize, available: usize },
    #[error("time origin is not a sample point of the window")]
    OriginNotInWindow,
    #[error("least-squares design is rank deficient")]
    RankDeficient,
    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("degenerate operator: {0}")]
    Degenerate(String),
    #[error("declined: {0}")]
    Declined(String),
    #[error("infeasible request: {0}")]
    Infeasible(String),
    #[error("numeric overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
