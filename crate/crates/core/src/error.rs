use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be {requirement}, got {value}")]
    InvalidInput {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error(
        "forward singularity: theta = 0 is outside the domain of every solenoid cross section"
    )]
    ForwardSingularity,

    #[error("zero momentum transfer: q = 0 is outside the domain of the form factors")]
    ZeroTransfer,

    #[error("beam is in helicity mode; use helicity_xsec")]
    HelicityBeam,

    #[error("helicity must be +1 or -1, got {0}")]
    InvalidHelicity(i32),

    #[error("f factor must be 1 or 2, got {0}")]
    InvalidFFactor(u8),

    #[error("momentum is off shell: relative mass-shell residual {residual:e}")]
    OffShell { residual: f64 },

    #[error("massless spinors are not supported")]
    ZeroMass,

    #[error("helicity is undefined for zero spatial momentum")]
    ZeroSpatialMomentum,

    #[error("scattering is not elastic: relative q0 = {q0:e}, q3 = {q3:e}")]
    NotElastic { q0: f64, q3: f64 },

    #[error("zero index {0} outside 1..=100")]
    ZeroIndexOutOfRange(u32),

    #[error("quadrature did not converge: estimated error {achieved:e} after {evaluations} evaluations, requested {requested:e}")]
    QuadratureBudget {
        achieved: f64,
        requested: f64,
        evaluations: usize,
    },

    #[error("x = {x} outside the {regime} regime required here")]
    OutOfRegime { x: f64, regime: &'static str },

    #[error("scan undersampled: {samples_per_period:.2} samples per oscillation, need at least {required}")]
    Undersampled {
        samples_per_period: f64,
        required: f64,
    },

    #[error("only {found} envelope maxima found, need at least {required}")]
    InsufficientMaxima { found: usize, required: usize },

    #[error("angular window straddles theta = 0")]
    WindowStraddlesForward,
}

impl Error {
    pub(crate) fn invalid(name: &'static str, requirement: &'static str, value: f64) -> Self {
        Error::InvalidInput {
            name,
            requirement,
            value,
        }
    }
}
