use thiserror::Error;

/// Errors produced by signal construction, sampling, filter derivation,
/// quantization, and reconstruction.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("coefficient vector has length {got}, expected {expected} for bandwidth {bandwidth}")]
    CoefficientLength {
        bandwidth: usize,
        expected: usize,
        got: usize,
    },

    #[error("coefficients do not describe a real function: |c(-{k}) - conj(c({k}))| = {deviation:.3e}")]
    NotRealValued { k: usize, deviation: f64 },

    #[error("harmonic index {k} exceeds bandwidth {bandwidth}")]
    HarmonicOutOfBand { k: usize, bandwidth: usize },

    #[error("sample count {n} is below the minimum {min} for bandwidth {bandwidth}")]
    Undersampled {
        n: usize,
        bandwidth: usize,
        min: usize,
    },

    #[error("second-order filter needs at least 2 taps, got {k}")]
    InvalidTapCount { k: usize },

    #[error("feedback filter must be strictly causal (leading tap {tap} is nonzero)")]
    FilterNotCausal { tap: f64 },

    #[error("feedback filter taps must sum to 1, got {sum}")]
    FilterTapSum { sum: f64 },

    #[error("filter order must be at least 1")]
    InvalidOrder,

    #[error("feedback filter admits no finitely supported state filter (tail {tail:.3e} after cumulative sum {pass})")]
    NoFiniteStateFilter { pass: usize, tail: f64 },

    #[error("quantizer input grid is empty")]
    EmptyGrid,

    #[error("coefficient sequence has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("shifted samples violate the stability criterion: filter l1 norm plus sample sup is {total:.6} > 2")]
    StabilityLost { total: f64 },
}
