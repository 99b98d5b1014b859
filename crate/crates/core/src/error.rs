use thiserror::Error;

/// Errors raised across the library. The `Display` strings start with a
/// stable kebab-case code so callers and scripts can match on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bad-partition: {0}")]
    BadPartition(String),

    #[error("not-hermitian: max asymmetry {0:e}")]
    NotHermitian(f64),

    #[error("bad-trace: trace is {0}")]
    BadTrace(f64),

    #[error("not-psd: smallest eigenvalue {0:e}")]
    NotPsd(f64),

    #[error("not-x-state: entry ({row},{col}) has magnitude {magnitude:e}")]
    NotXState {
        row: usize,
        col: usize,
        magnitude: f64,
    },

    #[error("theorem-hypotheses-violated: {0}")]
    TheoremHypothesesViolated(TheoremHypothesis),

    #[error("separable-channel: concurrence is zero")]
    SeparableChannel,

    #[error("not-unitary: correction {index} deviates by {deviation:e}")]
    NotUnitary { index: usize, deviation: f64 },

    #[error(
        "optimizer-stalled: best fidelity {best} after {evaluations} evaluations, target {target}"
    )]
    OptimizerStalled {
        best: f64,
        target: f64,
        evaluations: usize,
    },

    #[error("p-out-of-range: {0}")]
    POutOfRange(f64),

    #[error("alpha-out-of-range: |alpha| = {0}")]
    AlphaOutOfRange(f64),

    #[error("outside-region: {0}")]
    OutsideRegion(String),

    #[error("invalid-args: {0}")]
    InvalidArgs(String),

    #[error("io-error: {0}")]
    Io(String),
}

/// Which hypothesis of the fidelity-concurrence relation failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremHypothesis {
    Rho23NonZero,
    Rho22NotEqualRho33,
    Rho22NotBelowQuarter,
}

impl std::fmt::Display for TheoremHypothesis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TheoremHypothesis::Rho23NonZero => "rho23 != 0",
            TheoremHypothesis::Rho22NotEqualRho33 => "rho22 != rho33",
            TheoremHypothesis::Rho22NotBelowQuarter => "rho22 >= 1/4",
        };
        f.write_str(s)
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
