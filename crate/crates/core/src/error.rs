use thiserror::Error;

/// Errors raised by the codecs, the cost machines, and the program-search
/// oracle. Scenario-shape problems that a user can fix in the input file are
/// reported as [`crate::scenario::Violation`] lists instead.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("digit string contains non-digit character {0:?}")]
    InvalidDigit(char),

    #[error("digit string is empty")]
    EmptyDigitString,

    #[error("digit string longer than {max} digits")]
    TooLong { max: usize },

    #[error("integer {0} outside the supported range 1..=10^16")]
    IntegerOutOfRange(u64),

    #[error("localization cell {cell_km2} km^2 exceeds world area {area_km2} km^2")]
    ResolutionExceedsArea { cell_km2: f64, area_km2: f64 },

    #[error("time resolution {resolution_h} h exceeds the world window {window_h} h")]
    ResolutionExceedsWindow { resolution_h: f64, window_h: f64 },

    #[error("occurrence density {density_per_km2}/km^2 saturates a {cell_km2} km^2 cell")]
    DensityTooHigh { density_per_km2: f64, cell_km2: f64 },

    #[error("entity {0} has no home location")]
    MissingHome(String),

    #[error("{what} reference {id:?} does not resolve")]
    UnresolvedReference { what: &'static str, id: String },

    #[error("scenario expands to {atoms} atoms, bound is {bound}")]
    TooManyAtoms { atoms: usize, bound: usize },

    #[error("observer data insufficient: {0}")]
    MissingObserverData(String),

    #[error("scenario invalid: {0}")]
    InvalidScenario(String),

    #[error("cognitive probability is undefined for negative unexpectedness ({0} bits)")]
    UndefinedForNegativeU(f64),

    #[error("probability {0} outside (0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("distribution sums to {0}, expected 1")]
    NotNormalized(f64),

    #[error("outcome {0} has zero probability")]
    ZeroProbabilityOutcome(usize),

    #[error("outcome index {index} outside a distribution of {len}")]
    OutcomeIndexOutOfRange { index: usize, len: usize },

    #[error("copy-family instruction before any digit was emitted")]
    CopyWithoutContext,

    #[error("no program within {budget_bits} bits reproduces {target:?}")]
    NotFound { target: String, budget_bits: f64 },

    #[error("scenario has {0} events, expected exactly 2")]
    NotTwoEvents(usize),

    #[error("scenario does not place two entities at a shared location")]
    NotAnEncounter,
}

pub type Result<T> = std::result::Result<T, Error>;
