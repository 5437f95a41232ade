use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Endpoint values of a bracket do not straddle zero.
    #[error("bracket [{lo}, {hi}] has no sign change (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// A function evaluation produced NaN or infinity, or an argument lies
    /// outside the mathematical domain of a kernel.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive scheme ran out of refinement before reaching the requested
    /// tolerance. The best available estimate is carried along.
    #[error("requested accuracy not reached: estimate {estimate} with error {error_estimate}")]
    Accuracy {
        estimate: f64,
        error_estimate: f64,
    },

    /// Strain at or below -1 (interpenetration of matter).
    #[error("strain {0} is outside the admissible domain Γ > -1")]
    StrainDomain(f64),

    /// Invalid argument or parameter combination.
    #[error("invalid input: {0}")]
    Usage(String),

    /// No Rankine-Hugoniot state exists for the requested impact speed.
    #[error("no compression shock: {0}")]
    NoSolution(String),

    /// A structural hypothesis required by an operation does not hold.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// A simulated field has no usable jump to measure.
    #[error("shock extraction failed: {0}")]
    Extraction(String),

    /// The simulation visited a state with P'(Γ) <= 0.
    #[error("hyperbolicity lost in cell {cell} at t = {t}: Γ = {gamma}, P'(Γ) = {dp}")]
    HyperbolicityLoss {
        cell: usize,
        t: f64,
        gamma: f64,
        dp: f64,
    },

    /// The simulation produced a strain at or below -1.
    #[error("interpenetration in cell {cell} at t = {t}: Γ = {gamma}")]
    Interpenetration { cell: usize, t: f64, gamma: f64 },
}

impl Error {
    /// True for errors caused by bad input rather than by the numerics.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Usage(_) | Error::StrainDomain(_))
    }
}
