use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid of {n} samples cannot resolve modes up to {k} (need n >= 2k+1)")]
    Aliasing { n: usize, k: usize },
    #[error("grid length {0} must be a power of two and at least 4")]
    BadGrid(usize),
    #[error("mean coefficient has imaginary part {0:.3e}; underlying function is not real")]
    ImaginaryMean(f64),
    #[error("truncation orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NonHermitian(f64),
    #[error("mode {k} is beyond the trusted range {k_trust} at truncation {order}")]
    UntrustedMode { k: usize, k_trust: usize, order: usize },
    #[error("|z| = {0} must be strictly less than 1")]
    OutsideDisc(f64),
    #[error("epsilon list must be positive and strictly decreasing")]
    BadEpsilons,
    #[error("t = 0 is excluded here; use the resolvent route instead")]
    TimeIsZero,
    #[error("alternating sum is undefined at a caustic point (t={t}, x={x})")]
    CausticPoint { t: f64, x: f64 },
    #[error("root bracket narrower than scan resolution; increase scan_points beyond {0}")]
    ScanResolution(usize),
    #[error("quadrature failed to converge after {0} doublings")]
    QuadratureDivergence(usize),
    #[error("enumeration of {0} words exceeds budget {1}; reduce k, d or the mode bound")]
    BudgetExceeded(u64, u64),
    #[error("sample t = {0} lies outside the breaking window [{1}, {2}]")]
    OutsideWindow(f64, f64, f64),
    #[error("incompatible function representations: {0}")]
    Incompatible(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// CLI exit code category: 2 for usage/config errors, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Aliasing { .. }
            | Error::BadGrid(_)
            | Error::OrderMismatch(..)
            | Error::UntrustedMode { .. }
            | Error::OutsideDisc(_)
            | Error::BadEpsilons
            | Error::TimeIsZero
            | Error::BudgetExceeded(..)
            | Error::OutsideWindow(..)
            | Error::Incompatible(_)
            | Error::InvalidArgument(_) => 2,
            Error::ImaginaryMean(_)
            | Error::NonHermitian(_)
            | Error::CausticPoint { .. }
            | Error::ScanResolution(_)
            | Error::QuadratureDivergence(_) => 3,
        }
    }
}
