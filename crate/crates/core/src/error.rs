use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("unknown parameter `{0}` for this model")]
    UnknownParameter(String),
    #[error("z = 0 with negative Fourier harmonics present")]
    ZeroModulus,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("matrix is not square")]
    NotSquare,
    #[error("eigenvalue iteration did not converge")]
    EigenSolveFailed,
    #[error("invalid sample count {0} (need at least {1})")]
    InvalidSampleCount(usize, usize),
    #[error("bands degenerate at t = {at} (min gap {gap:e})")]
    DegeneracyEncountered { at: f64, gap: f64 },
    #[error("band matching unresolved after refining to {samples} samples")]
    RefinementExhausted { samples: usize },
    #[error("bands {lower} and {upper} coincide at the crossing t = {at}")]
    DegenerateCrossing { at: f64, lower: usize, upper: usize },
    #[error("crossings not separable near t = {at}")]
    UnresolvedCrossing { at: f64 },
    #[error("braid words have different strand counts ({0} vs {1})")]
    StrandMismatch(usize, usize),
    #[error("invalid braid word: {0}")]
    InvalidWord(String),
    #[error("discriminant only defined for degree 2 or 3, got {0}")]
    UnsupportedDegree(usize),
    #[error("z-plane EPs need alpha and beta non-zero")]
    DegenerateModel,
    #[error("reference energy lies on a band at t = {at}")]
    ReferenceOnBand { at: f64 },
    #[error("winding number did not converge after {samples} samples")]
    NonConvergent { samples: usize },
}

impl Error {
    /// True for the failures that signal an exceptional point on or next to
    /// the sampled path.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::DegeneracyEncountered { .. }
                | Error::RefinementExhausted { .. }
                | Error::DegenerateCrossing { .. }
        )
    }

    /// True when the inputs were valid but the computation could not
    /// produce a result at them.
    pub fn is_numerical(&self) -> bool {
        self.is_degenerate()
            || matches!(
                self,
                Error::EigenSolveFailed
                    | Error::UnresolvedCrossing { .. }
                    | Error::ReferenceOnBand { .. }
                    | Error::NonConvergent { .. }
            )
    }
}
